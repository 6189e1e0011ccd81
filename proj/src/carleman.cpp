#include "mwip/carleman.hpp"

#include <cmath>
#include <random>

namespace mwip {

namespace {
constexpr double kChiHalfWidth = 0.4;  // chi support [0.1, 0.9] per axis
}

WaveField admissible_test_field(std::uint64_t seed, const Grid& grid, int ncomp) {
    if (2 * grid.dx > 0.5 - kChiHalfWidth + 1e-12)
        throw std::invalid_argument(
            "admissible_test_field: grid too coarse for the two-layer boundary margin");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_int_distribution<int> mode(0, 2);

    struct Term {
        cplx a;
        double wt;           // temporal frequency, cos(wt * t)
        double px[2];        // spatial frequencies (multiples of pi)
        double shift[2];
    };
    const int nterms = 3;
    std::vector<std::vector<Term>> terms(ncomp);
    for (int c = 0; c < ncomp; ++c)
        for (int mth = 0; mth < nterms; ++mth) {
            Term t;
            t.a = cplx(unit(rng), unit(rng));
            t.wt = mode(rng) * M_PI / grid.T;
            for (int axis = 0; axis < 2; ++axis) {
                t.px[axis] = mode(rng) * M_PI;
                t.shift[axis] = unit(rng) * M_PI;
            }
            terms[c].push_back(t);
        }

    WaveField u(grid, ncomp);
    double x[2] = {0, 0};
    for (int k = 0; k <= grid.nt; ++k) {
        const double t = grid.time(k);
        auto lev = u.level(k);
        for (int node = 0; node < grid.num_nodes(); ++node) {
            grid.node_point(node, x);
            double chi = bspline_bump((x[0] - 0.5) / kChiHalfWidth);
            if (grid.dim == 2) chi *= bspline_bump((x[1] - 0.5) / kChiHalfWidth);
            for (int c = 0; c < ncomp; ++c) {
                cplx s(0, 0);
                for (const Term& tm : terms[c]) {
                    double sp = std::cos(tm.px[0] * x[0] + tm.shift[0]);
                    if (grid.dim == 2) sp *= std::cos(tm.px[1] * x[1] + tm.shift[1]);
                    s += tm.a * std::cos(tm.wt * t) * sp;
                }
                lev[static_cast<std::size_t>(node) * ncomp + c] = t * t * chi * s;
            }
        }
    }
    return u;
}

void require_admissible(const WaveField& u) {
    const Grid& g = u.grid();
    double scale = 0;
    for (const cplx& v : u.raw()) scale = std::max(scale, std::abs(v));
    const double tol = 1e-12 * std::max(scale, 1.0);

    for (int node = 0; node < g.num_nodes(); ++node)
        for (int c = 0; c < u.ncomp(); ++c)
            if (std::abs(u.at(0, node, c)) > tol)
                throw std::invalid_argument("inadmissible field: u(0,.) != 0");

    for (int k = 0; k <= g.nt; ++k)
        for (int node = 0; node < g.num_nodes(); ++node) {
            if (!g.on_boundary(node)) continue;
            for (int c = 0; c < u.ncomp(); ++c)
                if (std::abs(u.at(k, node, c)) > tol)
                    throw std::invalid_argument("inadmissible field: u != 0 on Sigma");
        }

    // discrete initial velocity, one-sided second order; a field with
    // du/dt(0) = 0 leaves it O(dt^2), anything else leaves it O(1)
    double v0 = 0, utt0 = 0;
    for (int node = 0; node < g.num_nodes(); ++node)
        for (int c = 0; c < u.ncomp(); ++c) {
            const cplx a = u.at(0, node, c), b = u.at(1, node, c), d = u.at(2, node, c);
            v0 = std::max(v0, std::abs((-3.0 * a + 4.0 * b - d) / (2 * g.dt)));
            utt0 = std::max(utt0, std::abs((d - 2.0 * b + a) / (g.dt * g.dt)));
        }
    if (v0 > std::max(0.5 * g.dt * utt0, tol / g.dt))
        throw std::invalid_argument("inadmissible field: du/dt(0,.) != 0");
}

namespace {

double weight_sq(const Grid& g, const std::array<double, 2>& omega, double h, double t,
                 const double* x) {
    return std::exp(-2.0 * phase(omega, g.dim, t, x) / h);
}

}  // namespace

CarlemanTerms evaluate_carleman(const WaveField& u, const MatrixPotential& q, double h,
                                const std::array<double, 2>& omega) {
    require_admissible(u);
    const Grid& g = u.grid();
    const int m = u.ncomp();
    CarlemanTerms out;
    out.h = h;

    const WaveField lq = apply_operator(q, u);
    double x[2] = {0, 0};

    // interior and operator terms
    for (int k = 0; k <= g.nt; ++k) {
        const double t = g.time(k);
        double si = 0, sop = 0;
        for (int node = 0; node < g.num_nodes(); ++node) {
            g.node_point(node, x);
            const double w = weight_sq(g, omega, h, t, x) * g.volume_weight(node);
            double nu = 0, nop = 0;
            for (int c = 0; c < m; ++c) {
                nu += std::norm(u.at(k, node, c));
                nop += std::norm(lq.at(k, node, c));
            }
            si += w * nu;
            sop += w * nop;
        }
        out.interior += g.time_weight(k) * si;
        out.op_term += g.time_weight(k) * sop;
    }
    out.op_term *= h * h;

    // final-time terms
    const auto lastv = u.level(g.nt);
    for (int node = 0; node < g.num_nodes(); ++node) {
        g.node_point(node, x);
        const double w = weight_sq(g, omega, h, g.T, x) * g.volume_weight(node);
        double nval = 0, nvel = 0, ngrad = 0;
        for (int c = 0; c < m; ++c) {
            nval += std::norm(u.at(g.nt, node, c));
            nvel += std::norm(time_derivative(u, g.nt, node, c));
            for (int axis = 0; axis < g.dim; ++axis)
                ngrad += std::norm(spatial_derivative(g, lastv, m, node, c, axis));
        }
        out.final_velocity += h * w * nvel;
        out.final_value += w * nval / h;
        out.final_gradient += h * w * ngrad;
    }

    // lateral flux terms, split by the sign of nu.omega on each face
    const SurfaceQuad sq = build_surface_quad(g);
    for (int k = 0; k <= g.nt; ++k) {
        const double t = g.time(k);
        double splus = 0, sminus = 0;
        for (const auto& e : sq.entries) {
            const double d = e.normal[0] * omega[0] + e.normal[1] * omega[1];
            if (d == 0) continue;
            g.node_point(e.node, x);
            const double w = weight_sq(g, omega, h, t, x) * e.weight;
            double nn = 0;
            for (int c = 0; c < m; ++c)
                nn += std::norm(neumann_at_entry(g, u.level(k), m, e, c));
            if (d > 0)
                splus += d * w * nn;
            else
                sminus += -d * w * nn;
        }
        out.flux_plus += h * g.time_weight(k) * splus;
        out.flux_minus += h * g.time_weight(k) * sminus;
    }

    out.lhs_total = out.interior + out.flux_plus + out.final_velocity;
    out.rhs_total = out.op_term + out.final_value + out.final_gradient + out.flux_minus;
    out.ratio = out.rhs_total > 0 ? out.lhs_total / out.rhs_total : 0.0;
    return out;
}

double check_p2_identity(const WaveField& v, double h, const std::array<double, 2>& omega) {
    (void)omega;
    require_admissible(v);
    const Grid& g = v.grid();
    const int m = v.ncomp();
    const double h3 = h * h * h;
    const MatrixPotential none = MatrixPotential::zero(m);
    const WaveField box = apply_operator(none, v);

    double volume = 0;
    for (int k = 0; k <= g.nt; ++k) {
        double s = 0;
        for (int node = 0; node < g.num_nodes(); ++node)
            for (int c = 0; c < m; ++c)
                s += g.volume_weight(node) *
                     (box.at(k, node, c) * std::conj(time_derivative(v, k, node, c))).real();
        volume += g.time_weight(k) * s;
    }
    volume *= 4.0 * h3;

    double surface = 0;
    const auto lastv = v.level(g.nt);
    for (int node = 0; node < g.num_nodes(); ++node)
        for (int c = 0; c < m; ++c) {
            double nn = std::norm(time_derivative(v, g.nt, node, c));
            for (int axis = 0; axis < g.dim; ++axis)
                nn += std::norm(spatial_derivative(g, lastv, m, node, c, axis));
            surface += g.volume_weight(node) * nn;
        }
    surface *= 2.0 * h3;

    return std::abs(volume - surface) / (std::abs(surface) + 1e-300);
}

double check_p1p2_boundary_identity(const WaveField& v, double h,
                                    const std::array<double, 2>& omega) {
    require_admissible(v);
    const Grid& g = v.grid();
    const int m = v.ncomp();
    const double h3 = h * h * h;
    const MatrixPotential none = MatrixPotential::zero(m);
    const WaveField box = apply_operator(none, v);

    auto omega_grad = [&](std::span<const cplx> lev, int node, int c) {
        cplx acc = omega[0] * spatial_derivative(g, lev, m, node, c, 0);
        if (g.dim == 2) acc += omega[1] * spatial_derivative(g, lev, m, node, c, 1);
        return acc;
    };

    double volume = 0;
    for (int k = 0; k <= g.nt; ++k) {
        double s = 0;
        const auto lev = v.level(k);
        for (int node = 0; node < g.num_nodes(); ++node)
            for (int c = 0; c < m; ++c)
                s += g.volume_weight(node) *
                     (box.at(k, node, c) * std::conj(omega_grad(lev, node, c))).real();
        volume += g.time_weight(k) * s;
    }
    volume *= -4.0 * h3;

    double final_term = 0;
    const auto lastv = v.level(g.nt);
    for (int node = 0; node < g.num_nodes(); ++node)
        for (int c = 0; c < m; ++c)
            final_term += g.volume_weight(node) *
                          (time_derivative(v, g.nt, node, c) * std::conj(omega_grad(lastv, node, c)))
                              .real();
    final_term *= -4.0 * h3;

    double sigma_term = 0;
    const SurfaceQuad sq = build_surface_quad(g);
    for (int k = 0; k <= g.nt; ++k) {
        double s = 0;
        for (const auto& e : sq.entries) {
            const double d = e.normal[0] * omega[0] + e.normal[1] * omega[1];
            if (d == 0) continue;
            double nn = 0;
            for (int c = 0; c < m; ++c)
                nn += std::norm(neumann_at_entry(g, v.level(k), m, e, c));
            s += d * e.weight * nn;
        }
        sigma_term += g.time_weight(k) * s;
    }
    sigma_term *= 2.0 * h3;

    const double closed = final_term + sigma_term;
    return std::abs(volume - closed) / (std::abs(closed) + 1e-300);
}

}  // namespace mwip
