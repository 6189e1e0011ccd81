#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mwip/mms.hpp"
#include "mwip/solver.hpp"

using namespace mwip;
using namespace std::complex_literals;

namespace {

Grid grid2(int nx, double T = 2.0, int nt_mult = 4) {
    // dt tied to dx so refinement studies halve both
    return build_grid(2, nx, nt_mult * (nx - 1), T);
}

WaveField fill_field(const Grid& g, int ncomp,
                     const std::function<cplx(double, const double*, int)>& f) {
    WaveField u(g, ncomp);
    double x[2];
    for (int k = 0; k <= g.nt; ++k)
        for (int node = 0; node < g.num_nodes(); ++node) {
            g.node_point(node, x);
            for (int c = 0; c < ncomp; ++c) u.at(k, node, c) = f(g.time(k), x, c);
        }
    return u;
}

double max_interior_err(const WaveField& got, const WaveField& want) {
    const Grid& g = got.grid();
    double e = 0;
    for (int k = 1; k < g.nt; ++k)
        for (int node = 0; node < g.num_nodes(); ++node) {
            if (g.on_boundary(node)) continue;
            for (int c = 0; c < got.ncomp(); ++c)
                e = std::max(e, std::abs(got.at(k, node, c) - want.at(k, node, c)));
        }
    return e;
}

}  // namespace

TEST_CASE("apply_operator: exact on polynomial fields") {
    const Grid g = grid2(17);
    // q = 0, u = (t^2, 0): second difference of t^2 is exact
    WaveField u = fill_field(g, 2, [](double t, const double*, int c) {
        return c == 0 ? cplx(t * t, 0) : cplx(0, 0);
    });
    const WaveField lu = apply_operator(MatrixPotential::zero(2), u);
    for (int k = 1; k < g.nt; ++k)
        for (int node = 0; node < g.num_nodes(); ++node) {
            CHECK(std::abs(lu.at(k, node, 0) - cplx(2, 0)) < 1e-10);
            CHECK(std::abs(lu.at(k, node, 1)) < 1e-10);
        }

    // q = [[1,2],[3,4]], u = (t, x1): Box u = 0 discretely
    const MatrixPotential q =
        MatrixPotential::constant(2, {1.0 + 0i, 2.0 + 0i, 3.0 + 0i, 4.0 + 0i});
    WaveField v = fill_field(g, 2, [](double t, const double* x, int c) {
        return c == 0 ? cplx(t, 0) : cplx(x[0], 0);
    });
    const WaveField lv = apply_operator(q, v);
    double x[2];
    for (int k = 1; k < g.nt; ++k)
        for (int node = 0; node < g.num_nodes(); ++node) {
            g.node_point(node, x);
            const double t = g.time(k);
            CHECK(std::abs(lv.at(k, node, 0) - cplx(t + 2 * x[0], 0)) < 1e-12 * (1 + t));
            CHECK(std::abs(lv.at(k, node, 1) - cplx(3 * t + 4 * x[0], 0)) < 1e-12 * (1 + t));
        }

    u.set_tag(ConjugatedTag{0.5, {1, 0}, 1});
    CHECK_THROWS_AS(apply_operator(MatrixPotential::zero(2), u), std::invalid_argument);
}

TEST_CASE("apply_operator: plane wave is a null direction at O(dx^2)") {
    const std::array<double, 2> w{1 / std::sqrt(2.0), 1 / std::sqrt(2.0)};
    auto residual = [&](int nx) {
        const Grid g = grid2(nx);
        WaveField u = fill_field(g, 1, [&](double t, const double* x, int) {
            return cplx(std::cos(t + w[0] * x[0] + w[1] * x[1]), 0);
        });
        const WaveField lu = apply_operator(MatrixPotential::zero(1), u);
        double r = 0;
        for (int k = 1; k < g.nt; ++k)
            for (int node = 0; node < g.num_nodes(); ++node) {
                if (g.on_boundary(node)) continue;
                r = std::max(r, std::abs(lu.at(k, node, 0)));
            }
        return r;
    };
    const double r1 = residual(17), r2 = residual(33);
    CHECK(r1 / r2 >= 3.0);
}

TEST_CASE("solve_ibvp: zero data gives the zero solution") {
    const Grid g = grid2(17);
    const WaveField u = solve_ibvp(g, MatrixPotential::zero(2), {});
    for (const cplx& v : u.raw()) CHECK(v == cplx(0, 0));
}

TEST_CASE("solve_ibvp: 1-D standing wave converges at order >= 1.9") {
    auto run = [](int nx, int nt) {
        const Grid g = build_grid(1, nx, nt, 2.0);
        InitialBoundaryData d;
        d.phi = [](const double* x, cplx* o) { o[0] = cplx(std::sin(M_PI * x[0]), 0); };
        const WaveField u = solve_ibvp(g, MatrixPotential::zero(1), d);
        double e = 0;
        double x[2];
        for (int k = 0; k <= g.nt; ++k)
            for (int node = 0; node < g.num_nodes(); ++node) {
                g.node_point(node, x);
                const double exact = std::sin(M_PI * x[0]) * std::cos(M_PI * g.time(k));
                e = std::max(e, std::abs(u.at(k, node, 0) - cplx(exact, 0)));
            }
        return e;
    };
    const double e1 = run(101, 400), e2 = run(201, 800);
    CHECK(std::log2(e1 / e2) >= 1.9);
}

TEST_CASE("solve_ibvp: traveling plane wave reproduced at O(dx^2)") {
    const std::array<double, 2> w{0.6, 0.8};
    auto run = [&](int nx) {
        const Grid g = grid2(nx);
        InitialBoundaryData d;
        d.phi = [&](const double* x, cplx* o) {
            o[0] = cplx(std::cos(w[0] * x[0] + w[1] * x[1]), 0);
            o[1] = cplx(0, 0);
        };
        d.psi = [&](const double* x, cplx* o) {
            o[0] = cplx(-std::sin(w[0] * x[0] + w[1] * x[1]), 0);
            o[1] = cplx(0, 0);
        };
        d.f = [&](double t, const double* x, cplx* o) {
            o[0] = cplx(std::cos(t + w[0] * x[0] + w[1] * x[1]), 0);
            o[1] = cplx(0, 0);
        };
        const WaveField u = solve_ibvp(g, MatrixPotential::zero(2), d);
        WaveField exact = fill_field(g, 2, [&](double t, const double* x, int c) {
            return c == 0 ? cplx(std::cos(t + w[0] * x[0] + w[1] * x[1]), 0) : cplx(0, 0);
        });
        return max_interior_err(u, exact);
    };
    const double e1 = run(17), e2 = run(33);
    CHECK(e1 / e2 >= 3.0);
}

TEST_CASE("solve_ibvp rejects incompatible data") {
    const Grid g = grid2(17);
    InitialBoundaryData d;
    d.f = [](double, const double*, cplx* o) {
        o[0] = cplx(1, 0);
        o[1] = cplx(0, 0);
    };
    CHECK_THROWS_AS(solve_ibvp(g, MatrixPotential::zero(2), d), std::invalid_argument);
}

TEST_CASE("manufactured 2x2 case converges at order >= 1.9") {
    const MmsResult r1 = run_manufactured_case(grid2(33));
    const MmsResult r2 = run_manufactured_case(grid2(65));
    CHECK(mms_order(r1, r2) >= 1.9);
}

TEST_CASE("neumann trace") {
    const Grid g = grid2(17);
    WaveField u = fill_field(g, 2, [](double, const double* x, int c) {
        return c == 0 ? cplx(x[0], 0) : cplx(0, 0);
    });
    const BoundaryTrace tr = neumann_trace(u);
    for (std::size_t bi = 0; bi < tr.nodes.size(); ++bi) {
        const auto nu = outward_normal(g, tr.nodes[bi]);
        CHECK(std::abs(tr.at(5, static_cast<int>(bi), 0) - cplx(nu[0], 0)) < 1e-12);
        CHECK(std::abs(tr.at(5, static_cast<int>(bi), 1)) < 1e-12);
    }

    // sin(pi x1): +-pi on the x1 faces within O(dx^2)
    WaveField s = fill_field(g, 1, [](double, const double* x, int) {
        return cplx(std::sin(M_PI * x[0]), 0);
    });
    const BoundaryTrace ts = neumann_trace(s);
    for (std::size_t bi = 0; bi < ts.nodes.size(); ++bi) {
        const auto m = g.node_multi(ts.nodes[bi]);
        const auto nu = outward_normal(g, ts.nodes[bi]);
        if (nu[0] == 0) continue;
        const double expect = (m[0] == 0 ? -M_PI : -M_PI);
        CHECK(ts.at(3, static_cast<int>(bi), 0).real() ==
              doctest::Approx(expect).epsilon(0.01));
    }

    WaveField c = fill_field(g, 1, [](double, const double*, int) { return cplx(4.2, 0); });
    const BoundaryTrace tc = neumann_trace(c);
    for (const cplx& v : tc.values) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("measure: determinism and equal potentials") {
    const Grid g = grid2(17);
    InitialBoundaryData d;
    d.phi = [](const double* x, cplx* o) {
        o[0] = cplx(std::sin(M_PI * x[0]) * std::sin(M_PI * x[1]), 0);
        o[1] = cplx(0, 0);
    };
    const MatrixPotential q =
        MatrixPotential::bump(2, 2, 0, 0, 2.0, 1.0, 0.5, {0.5, 0.5}, {0.3, 0.3});
    const Measurement m1 = measure(g, q, d);
    const Measurement m2 = measure(g, q, d);
    CHECK(m1.final_value == m2.final_value);
    CHECK(m1.neumann.values == m2.neumann.values);
    CHECK(m1.final_velocity_is_auxiliary);

    const Measurement z = measure(g, q, {});
    for (const cplx& v : z.final_value) CHECK(v == cplx(0, 0));
    for (const cplx& v : z.neumann.values) CHECK(v == cplx(0, 0));
}

TEST_CASE("energy audit: zero data, scaling invariance") {
    const Grid g = grid2(17);
    const WaveField zu = solve_ibvp(g, MatrixPotential::zero(2), {});
    const EnergyAudit za = energy_audit(zu, {});
    CHECK(za.ratio == 0.0);
    CHECK(!za.stability_violation);

    InitialBoundaryData d;
    d.phi = [](const double* x, cplx* o) {
        o[0] = cplx(std::sin(M_PI * x[0]) * std::sin(M_PI * x[1]), 0);
        o[1] = cplx(x[0] * (1 - x[0]) * x[1] * (1 - x[1]), 0);
    };
    InitialBoundaryData d2;
    d2.phi = [&d](const double* x, cplx* o) {
        d.phi(x, o);
        o[0] *= 2.0;
        o[1] *= 2.0;
    };
    const MatrixPotential q = MatrixPotential::constant(2, {1.0 + 0i, 0i, 0i, 1.0 + 0i});
    const EnergyAudit a1 = energy_audit(solve_ibvp(g, q, d), d);
    const EnergyAudit a2 = energy_audit(solve_ibvp(g, q, d2), d2);
    CHECK(a1.ratio == doctest::Approx(a2.ratio).epsilon(1e-10));
    CHECK(a1.ratio > 0);
}

TEST_CASE("superposition u = v + w") {
    const Grid g = grid2(17);
    const MatrixPotential q =
        MatrixPotential::bump(2, 2, 0, 1, 3.0, 1.0, 0.5, {0.5, 0.5}, {0.3, 0.3});
    InitialBoundaryData d;
    d.phi = [](const double* x, cplx* o) {
        o[0] = cplx(std::sin(M_PI * x[0]) * std::sin(M_PI * x[1]), 0);
        o[1] = cplx(0, 0);
    };
    d.psi = [](const double* x, cplx* o) {
        o[0] = cplx(0, 0);
        o[1] = cplx(x[0] * (1 - x[0]) * x[1] * (1 - x[1]), 0);
    };
    const WaveField u = solve_ibvp(g, q, d);
    const WaveField v = solve_ibvp(g, MatrixPotential::zero(2), d);
    SourceFn neg_qv = [&](int k, double, std::span<cplx> out) {
        double x[2];
        std::vector<cplx> qv(4);
        for (int node = 0; node < g.num_nodes(); ++node) {
            g.node_point(node, x);
            q.eval(g.time(k), x, qv.data());
            for (int c = 0; c < 2; ++c) {
                cplx acc(0, 0);
                for (int j = 0; j < 2; ++j) acc += qv[c * 2 + j] * v.at(k, node, j);
                out[static_cast<std::size_t>(node) * 2 + c] = -acc;
            }
        }
    };
    const WaveField w = solve_ibvp(g, q, {}, neg_qv);

    double gap2 = 0, scale2 = 0;
    for (int k = 0; k <= g.nt; ++k)
        for (int node = 0; node < g.num_nodes(); ++node)
            for (int c = 0; c < 2; ++c) {
                const double wgt = g.time_weight(k) * g.volume_weight(node);
                gap2 += wgt * std::norm(u.at(k, node, c) - v.at(k, node, c) - w.at(k, node, c));
                scale2 += wgt * std::norm(u.at(k, node, c));
            }
    CHECK(std::sqrt(gap2) <= 5.0 * g.dx * g.dx * std::sqrt(scale2));
}

TEST_CASE("linearity in the data") {
    const Grid g = grid2(17);
    const MatrixPotential q =
        MatrixPotential::constant(2, {1.0 + 0i, 0.5 + 0i, 0.25 + 0i, 2.0 + 0i});
    InitialBoundaryData da, db, dc;
    da.phi = [](const double* x, cplx* o) {
        o[0] = cplx(std::sin(M_PI * x[0]) * std::sin(M_PI * x[1]), 0);
        o[1] = cplx(0, 0);
    };
    db.psi = [](const double* x, cplx* o) {
        o[0] = cplx(0, 0);
        o[1] = cplx(std::sin(2 * M_PI * x[0]) * std::sin(M_PI * x[1]), 0);
    };
    const cplx a(2.0, 0.0), b(-0.5, 1.0);
    dc.phi = [&](const double* x, cplx* o) {
        cplx t[2];
        da.phi(x, t);
        o[0] = a * t[0];
        o[1] = a * t[1];
    };
    dc.psi = [&](const double* x, cplx* o) {
        cplx t[2] = {cplx(0, 0), cplx(0, 0)};
        db.psi(x, t);
        o[0] = b * t[0];
        o[1] = b * t[1];
    };
    const WaveField ua = solve_ibvp(g, q, da);
    const WaveField ub = solve_ibvp(g, q, db);
    const WaveField uc = solve_ibvp(g, q, dc);
    double err = 0, scale = 0;
    for (std::size_t idx = 0; idx < uc.raw().size(); ++idx) {
        err = std::max(err, std::abs(uc.raw()[idx] - a * ua.raw()[idx] - b * ub.raw()[idx]));
        scale = std::max(scale, std::abs(uc.raw()[idx]));
    }
    CHECK(err <= 1e-10 * std::max(1.0, scale));
}

TEST_CASE("leapfrog energy drift is at roundoff for q = 0, f = 0") {
    const Grid g = grid2(33);
    InitialBoundaryData d;
    d.phi = [](const double* x, cplx* o) {
        o[0] = cplx(std::sin(M_PI * x[0]) * std::sin(2 * M_PI * x[1]), 0);
    };
    const WaveField u = solve_ibvp(g, MatrixPotential::zero(1), d);

    // conserved leapfrog functional: |du|^2/(2 dt^2) - <lap u^{k+1}, u^k>/2
    auto energy = [&](int k) {
        double kin = 0, pot = 0;
        for (int node = 0; node < g.num_nodes(); ++node) {
            const double w = g.volume_weight(node);
            kin += w * std::norm(u.at(k + 1, node, 0) - u.at(k, node, 0));
            if (!g.on_boundary(node)) {
                const cplx lap = laplacian(g, u.level(k + 1), 1, node, 0);
                pot -= w * (lap * std::conj(u.at(k, node, 0))).real();
            }
        }
        return 0.5 * kin / (g.dt * g.dt) + 0.5 * pot;
    };
    const double e0 = energy(1);
    double drift = 0;
    for (int k = 1; k < g.nt - 1; k += 7) drift = std::max(drift, std::abs(energy(k) - e0));
    CHECK(drift <= 1e-8 * std::abs(e0));
}

TEST_CASE("conjugated solve: zero source, manufactured forward and backward") {
    const MatrixPotential q =
        MatrixPotential::constant(2, {1.0 + 0i, 0.5 + 0i, 0i, 2.0 + 0i});
    const std::array<double, 2> w{1, 0};
    const double h = 0.5;

    const Grid g0 = grid2(17);
    const WaveField z = solve_conjugated(g0, q, {h, w, +1}, {}, 2);
    for (const cplx& v : z.raw()) CHECK(v == cplx(0, 0));
    CHECK(z.conjugated());

    // manufactured amplitude with zero data at t=0 (forward, growing weight)
    auto wstar = [](double t, const double* x, int c) {
        const double s = std::sin(M_PI * x[0]) * std::sin(M_PI * x[1]);
        return c == 0 ? cplx(t * t * s, 0) : cplx(0.5 * t * t * t * s, 0);
    };
    auto wstar_box = [&](double t, const double* x, int c) -> cplx {
        const double s = std::sin(M_PI * x[0]) * std::sin(M_PI * x[1]);
        const double lap = -2 * M_PI * M_PI;
        if (c == 0) return cplx((2 - lap * t * t) * s, 0);
        return cplx((3 * t - lap * 0.5 * t * t * t) * s, 0);
    };
    auto wstar_dt = [](double t, const double* x, int c) {
        const double s = std::sin(M_PI * x[0]) * std::sin(M_PI * x[1]);
        return c == 0 ? cplx(2 * t * s, 0) : cplx(1.5 * t * t * s, 0);
    };
    auto wstar_grad_w = [&](double t, const double* x, int c) {
        // omega = (1,0): omega.grad = d/dx1
        const double s = M_PI * std::cos(M_PI * x[0]) * std::sin(M_PI * x[1]);
        return c == 0 ? cplx(t * t * s, 0) : cplx(0.5 * t * t * t * s, 0);
    };

    auto run_fwd = [&](int nx) {
        const Grid g = grid2(nx);
        SourceFn src = [&](int, double t, std::span<cplx> out) {
            double x[2];
            std::vector<cplx> qv(4);
            for (int node = 0; node < g.num_nodes(); ++node) {
                g.node_point(node, x);
                q.eval(t, x, qv.data());
                for (int c = 0; c < 2; ++c) {
                    cplx acc = h * h * wstar_box(t, x, c) +
                               2 * h * (wstar_dt(t, x, c) - wstar_grad_w(t, x, c));
                    for (int j = 0; j < 2; ++j) acc += h * h * qv[c * 2 + j] * wstar(t, x, j);
                    out[static_cast<std::size_t>(node) * 2 + c] = acc;
                }
            }
        };
        const WaveField got = solve_conjugated(g, q, {h, w, +1}, src, 2);
        WaveField want = fill_field(g, 2, wstar);
        return max_interior_err(got, want);
    };
    const double e1 = run_fwd(17), e2 = run_fwd(33);
    CHECK(e1 / e2 >= 3.0);

    // backward: zero data at t = T, decaying weight
    auto run_bwd = [&](int nx) {
        const Grid g = grid2(nx);
        auto vstar = [&](double t, const double* x, int c) {
            const double tau = g.T - t;
            const double s = std::sin(M_PI * x[0]) * std::sin(M_PI * x[1]);
            return c == 0 ? cplx(tau * tau * s, 0) : cplx(0, 0);
        };
        SourceFn src = [&](int, double t, std::span<cplx> out) {
            double x[2];
            std::vector<cplx> qv(4);
            const double tau = g.T - t;
            for (int node = 0; node < g.num_nodes(); ++node) {
                g.node_point(node, x);
                q.eval(t, x, qv.data());
                const double s = std::sin(M_PI * x[0]) * std::sin(M_PI * x[1]);
                const double sx = M_PI * std::cos(M_PI * x[0]) * std::sin(M_PI * x[1]);
                const double box = 2 * s + 2 * M_PI * M_PI * tau * tau * s;
                const double dt_v = -2 * tau * s;
                const double grad_v = tau * tau * sx;
                for (int c = 0; c < 2; ++c) {
                    cplx acc = c == 0 ? cplx(h * h * box - 2 * h * (dt_v - grad_v), 0)
                                      : cplx(0, 0);
                    for (int j = 0; j < 2; ++j)
                        acc += h * h * qv[c * 2 + j] * vstar(t, x, j);
                    out[static_cast<std::size_t>(node) * 2 + c] = acc;
                }
            }
        };
        const WaveField got =
            solve_conjugated(g, q, {h, w, -1}, src, 2, TimeDirection::Backward);
        WaveField want = fill_field(g, 2, vstar);
        return max_interior_err(got, want);
    };
    const double b1 = run_bwd(17), b2 = run_bwd(33);
    CHECK(b1 / b2 >= 3.0);
}

TEST_CASE("conjugated stencil: the two signs differ exactly by the transport term") {
    const Grid g = grid2(17);
    const double h = 0.5;
    const std::array<double, 2> w{0.8, 0.6};
    const MatrixPotential q = MatrixPotential::constant(1, {1.5 + 0i});
    WaveField v = fill_field(g, 1, [](double t, const double* x, int) {
        return cplx(std::sin(1 + t) * x[0] * x[1], std::cos(t) * x[0]);
    });
    const std::size_t stride = static_cast<std::size_t>(g.num_nodes());
    std::vector<cplx> plus(stride), minus(stride);
    const int k = g.nt / 2;
    apply_conjugated_stencil(g, q, {h, w, +1}, 1, k, v.level(k - 1), v.level(k), v.level(k + 1),
                             plus);
    apply_conjugated_stencil(g, q, {h, w, -1}, 1, k, v.level(k - 1), v.level(k), v.level(k + 1),
                             minus);
    for (int node = 0; node < g.num_nodes(); ++node) {
        if (g.on_boundary(node)) continue;
        // plus - minus = 4h (d_t - omega.grad) v
        const cplx dt = (v.at(k + 1, node, 0) - v.at(k - 1, node, 0)) / (2 * g.dt);
        cplx grad = w[0] * spatial_derivative(g, v.level(k), 1, node, 0, 0) +
                    w[1] * spatial_derivative(g, v.level(k), 1, node, 0, 1);
        const cplx want = 4.0 * h * (dt - grad);
        CHECK(std::abs(plus[node] - minus[node] - want) < 1e-12);
    }
}

TEST_CASE("conjugated solve enforces resolution and the tightened CFL") {
    const Grid g = grid2(17);
    CHECK_THROWS_AS(solve_conjugated(g, MatrixPotential::zero(1), {0.1, {1, 0}, +1}, {}, 1),
                    std::invalid_argument);

    // base-CFL grid whose dt exceeds the transport-tightened limit
    const double dx = 1.0 / 32;
    const int nt_base = static_cast<int>(std::ceil(2.0 / (0.9 * dx / std::sqrt(2.0))));
    const Grid tight = build_grid(2, 33, nt_base, 2.0);
    const double h = 8.5 * tight.dx;
    REQUIRE(tight.dt > conjugated_dt_limit(tight, h));
    CHECK_THROWS_AS(solve_conjugated(tight, MatrixPotential::zero(1), {h, {1, 0}, +1}, {}, 1),
                    std::invalid_argument);
}

TEST_CASE("von Neumann scan: conjugated stepping stays contractive") {
    // amplification roots of g^2 (1+mu) + g(dt^2 lam - 2 + 2 i theta) + (1-mu) = 0
    const Grid g = grid2(33);
    for (double h : {0.5, 0.25}) {
        REQUIRE(g.dt <= conjugated_dt_limit(g, h) * (1 + 1e-12));
        const double mu = g.dt / h;
        double worst = 0;
        const int n = 48;
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j) {
                const double k1 = M_PI * i / n / g.dx, k2 = M_PI * j / n / g.dx;
                const double lam = (4.0 / (g.dx * g.dx)) *
                                   (std::pow(std::sin(k1 * g.dx / 2), 2) +
                                    std::pow(std::sin(k2 * g.dx / 2), 2));
                const double s1 = std::sin(k1 * g.dx) / g.dx, s2 = std::sin(k2 * g.dx) / g.dx;
                const double theta = (g.dt * g.dt / h) * (0.8 * s1 + 0.6 * s2);
                const cplx a(1 + mu, 0), b(g.dt * g.dt * lam - 2.0, 2.0 * theta), c(1 - mu, 0);
                const cplx disc = std::sqrt(b * b - 4.0 * a * c);
                worst = std::max({worst, std::abs((-b + disc) / (2.0 * a)),
                                  std::abs((-b - disc) / (2.0 * a))});
            }
        CHECK(worst <= 1.0 + 1e-12);
    }
}

TEST_CASE("to_physical guards the exponential range") {
    const Grid g = grid2(17);
    WaveField w = solve_conjugated(g, MatrixPotential::zero(1), {0.5, {1, 0}, +1}, {}, 1);
    CHECK_NOTHROW(w.to_physical());
    w.set_tag(ConjugatedTag{0.01, {1, 0}, 1});
    CHECK_THROWS_AS(w.to_physical(), std::runtime_error);
}
