#include "mwip/solver.hpp"

#include <cmath>

namespace mwip {

namespace {

// one-sided / centered second derivative along one axis
cplx second_derivative_axis(const Grid& g, std::span<const cplx> level, int ncomp, int node, int c,
                            int axis) {
    const auto m = g.node_multi(node);
    const int i = axis == 0 ? m[0] : m[1];
    const int step = (axis == 0 ? 1 : g.nx) * ncomp;
    const std::size_t base = static_cast<std::size_t>(node) * ncomp + c;
    const double inv = 1.0 / (g.dx * g.dx);
    if (i == 0)
        return (2.0 * level[base] - 5.0 * level[base + step] + 4.0 * level[base + 2 * step] -
                level[base + 3 * step]) * inv;
    if (i == g.nx - 1)
        return (2.0 * level[base] - 5.0 * level[base - step] + 4.0 * level[base - 2 * step] -
                level[base - 3 * step]) * inv;
    return (level[base + step] - 2.0 * level[base] + level[base - step]) * inv;
}

cplx laplacian_any(const Grid& g, std::span<const cplx> level, int ncomp, int node, int c) {
    cplx acc = second_derivative_axis(g, level, ncomp, node, c, 0);
    if (g.dim == 2) acc += second_derivative_axis(g, level, ncomp, node, c, 1);
    return acc;
}

void check_level_finite(std::span<const cplx> level, const char* what) {
    for (const cplx& v : level)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw numerical_error(std::string(what) + ": non-finite values in solution");
}

struct QLevel {
    const MatrixPotential* q = nullptr;
    int m = 0;
    bool active = false;
    std::vector<cplx> buf;

    QLevel(const Grid& g, const MatrixPotential& pot) {
        q = &pot;
        m = pot.dim();
        active = !pot.is_zero();
        if (active) buf.resize(static_cast<std::size_t>(g.num_nodes()) * m * m);
    }
    void fill(const Grid& g, double t) {
        if (!active) return;
        double x[2] = {0, 0};
        for (int node = 0; node < g.num_nodes(); ++node) {
            g.node_point(node, x);
            q->eval(t, x, &buf[static_cast<std::size_t>(node) * m * m]);
        }
    }
    // out_c -= (q u)_c accumulated directly into the update
    void apply(int node, const cplx* u, cplx* out) const {
        const cplx* qa = &buf[static_cast<std::size_t>(node) * m * m];
        for (int i = 0; i < m; ++i) {
            cplx acc(0, 0);
            for (int j = 0; j < m; ++j) acc += qa[i * m + j] * u[j];
            out[i] = acc;
        }
    }
};

}  // namespace

WaveField apply_operator(const MatrixPotential& q, const WaveField& u) {
    if (u.conjugated())
        throw std::invalid_argument(
            "apply_operator: conjugated-representation field; use the conjugated operator");
    const Grid& g = u.grid();
    const int ncomp = u.ncomp();
    if (q.dim() != ncomp) throw std::invalid_argument("apply_operator: potential/field mismatch");
    WaveField out(g, ncomp);
    QLevel ql(g, q);
    std::vector<cplx> uval(ncomp), qu(ncomp);
    for (int k = 0; k <= g.nt; ++k) {
        ql.fill(g, g.time(k));
        const auto lev = u.level(k);
        auto dst = out.level(k);
        for (int node = 0; node < g.num_nodes(); ++node) {
            for (int c = 0; c < ncomp; ++c) uval[c] = lev[static_cast<std::size_t>(node) * ncomp + c];
            if (ql.active)
                ql.apply(node, uval.data(), qu.data());
            else
                std::fill(qu.begin(), qu.end(), cplx(0, 0));
            for (int c = 0; c < ncomp; ++c) {
                const cplx utt = time_second_derivative(u, k, node, c);
                const cplx lap = laplacian_any(g, lev, ncomp, node, c);
                dst[static_cast<std::size_t>(node) * ncomp + c] = utt - lap + qu[c];
            }
        }
    }
    return out;
}

void run_ibvp(const Grid& grid, const MatrixPotential& q, const InitialBoundaryData& data,
              const SourceFn& F, const LevelObserver& observe) {
    const int ncomp = q.dim();
    const int nn = grid.num_nodes();
    const std::size_t stride = static_cast<std::size_t>(nn) * ncomp;
    std::vector<cplx> prev(stride, cplx(0, 0)), curr(stride, cplx(0, 0)), next(stride, cplx(0, 0));
    std::vector<cplx> psi_vals(stride, cplx(0, 0)), src(F ? stride : 0, cplx(0, 0));
    QLevel ql(grid, q);
    double x[2] = {0, 0};

    // level 0: phi, with the Dirichlet trace imposed on the boundary
    double phi_sup = 0;
    for (int node = 0; node < nn; ++node) {
        grid.node_point(node, x);
        if (data.phi) data.phi(x, &prev[static_cast<std::size_t>(node) * ncomp]);
        if (data.psi) data.psi(x, &psi_vals[static_cast<std::size_t>(node) * ncomp]);
        for (int c = 0; c < ncomp; ++c)
            phi_sup = std::max(phi_sup, std::abs(prev[static_cast<std::size_t>(node) * ncomp + c]));
    }
    double compat = 0;
    std::vector<cplx> fval(ncomp, cplx(0, 0));
    for (int node = 0; node < nn; ++node) {
        if (!grid.on_boundary(node)) continue;
        grid.node_point(node, x);
        std::fill(fval.begin(), fval.end(), cplx(0, 0));
        if (data.f) data.f(0.0, x, fval.data());
        for (int c = 0; c < ncomp; ++c) {
            compat = std::max(compat, std::abs(fval[c] - prev[static_cast<std::size_t>(node) * ncomp + c]));
            prev[static_cast<std::size_t>(node) * ncomp + c] = fval[c];
        }
    }
    if (compat > 1e-10 * std::max(1.0, phi_sup))
        throw std::invalid_argument("solve_ibvp: incompatible data, f(0,.) != phi on the boundary");
    observe(0, prev);

    // level 1, Taylor start: u1 = phi + dt psi + dt^2/2 (lap phi - q(0) phi + F(0))
    ql.fill(grid, 0.0);
    if (F) F(0, 0.0, src);
    std::vector<cplx> uval(ncomp), qu(ncomp, cplx(0, 0));
    const double dt = grid.dt, dt2 = dt * dt;
    for (int node = 0; node < nn; ++node) {
        if (grid.on_boundary(node)) continue;
        for (int c = 0; c < ncomp; ++c) uval[c] = prev[static_cast<std::size_t>(node) * ncomp + c];
        if (ql.active) ql.apply(node, uval.data(), qu.data());
        for (int c = 0; c < ncomp; ++c) {
            const std::size_t idx = static_cast<std::size_t>(node) * ncomp + c;
            cplx lap = laplacian(grid, prev, ncomp, node, c);
            cplx acc = prev[idx] + dt * psi_vals[idx] + 0.5 * dt2 * (lap - qu[c]);
            if (F) acc += 0.5 * dt2 * src[idx];
            curr[idx] = acc;
        }
    }
    for (int node = 0; node < nn; ++node) {
        if (!grid.on_boundary(node)) continue;
        grid.node_point(node, x);
        std::fill(fval.begin(), fval.end(), cplx(0, 0));
        if (data.f) data.f(grid.time(1), x, fval.data());
        for (int c = 0; c < ncomp; ++c) curr[static_cast<std::size_t>(node) * ncomp + c] = fval[c];
    }
    observe(1, curr);

    for (int k = 1; k < grid.nt; ++k) {
        ql.fill(grid, grid.time(k));
        if (F) F(k, grid.time(k), src);
        for (int iy = grid.dim == 1 ? 0 : 1; iy < (grid.dim == 1 ? 1 : grid.nx - 1); ++iy) {
            for (int ix = 1; ix < grid.nx - 1; ++ix) {
                const int node = ix + (grid.dim == 2 ? grid.nx * iy : 0);
                for (int c = 0; c < ncomp; ++c) uval[c] = curr[static_cast<std::size_t>(node) * ncomp + c];
                if (ql.active) ql.apply(node, uval.data(), qu.data());
                for (int c = 0; c < ncomp; ++c) {
                    const std::size_t idx = static_cast<std::size_t>(node) * ncomp + c;
                    cplx lap = laplacian(grid, curr, ncomp, node, c);
                    cplx acc = 2.0 * curr[idx] - prev[idx] + dt2 * (lap - qu[c]);
                    if (F) acc += dt2 * src[idx];
                    next[idx] = acc;
                }
            }
        }
        for (int node = 0; node < nn; ++node) {
            if (!grid.on_boundary(node)) continue;
            grid.node_point(node, x);
            std::fill(fval.begin(), fval.end(), cplx(0, 0));
            if (data.f) data.f(grid.time(k + 1), x, fval.data());
            for (int c = 0; c < ncomp; ++c) next[static_cast<std::size_t>(node) * ncomp + c] = fval[c];
        }
        observe(k + 1, next);
        prev.swap(curr);
        curr.swap(next);
    }
    check_level_finite(curr, "solve_ibvp");
}

WaveField solve_ibvp(const Grid& grid, const MatrixPotential& q, const InitialBoundaryData& data,
                     const SourceFn& F) {
    WaveField u(grid, q.dim());
    run_ibvp(grid, q, data, F, [&](int k, std::span<const cplx> lev) {
        std::copy(lev.begin(), lev.end(), u.level(k).begin());
    });
    if (!u.all_finite()) throw numerical_error("solve_ibvp: non-finite values in solution");
    return u;
}

BoundaryTrace neumann_trace(const WaveField& u) {
    if (u.conjugated())
        throw std::invalid_argument("neumann_trace: physical representation required");
    const Grid& g = u.grid();
    BoundaryTrace tr;
    tr.ncomp = u.ncomp();
    tr.num_levels = g.num_levels();
    for (int node = 0; node < g.num_nodes(); ++node)
        if (g.on_boundary(node)) tr.nodes.push_back(node);
    tr.values.resize(static_cast<std::size_t>(tr.num_levels) * tr.nodes.size() * tr.ncomp);
    for (int k = 0; k <= g.nt; ++k) {
        const auto lev = u.level(k);
        for (std::size_t bi = 0; bi < tr.nodes.size(); ++bi) {
            const int node = tr.nodes[bi];
            const auto nu = outward_normal(g, node);
            SurfaceEntry e;
            e.node = node;
            e.axis = nu[1] != 0 ? 1 : 0;
            e.side = nu[e.axis] > 0 ? 1 : 0;
            for (int c = 0; c < tr.ncomp; ++c)
                tr.values[(static_cast<std::size_t>(k) * tr.nodes.size() + bi) * tr.ncomp + c] =
                    neumann_at_entry(g, lev, tr.ncomp, e, c);
        }
    }
    return tr;
}

Measurement measure(const Grid& grid, const MatrixPotential& q, const InitialBoundaryData& data,
                    TraceRegion region, const BoundaryPartition* partition) {
    if (region == TraceRegion::GOnly && partition == nullptr)
        throw std::invalid_argument("measure: G-restricted trace needs a boundary partition");
    WaveField u = solve_ibvp(grid, q, data);

    Measurement m;
    m.input_label = data.label;
    m.region = region;
    const auto last = u.level(grid.nt);
    m.final_value.assign(last.begin(), last.end());
    m.final_velocity.resize(last.size());
    one_sided_time_derivative(u.level(grid.nt), u.level(grid.nt - 1), u.level(grid.nt - 2),
                              grid.dt, m.final_velocity);

    BoundaryTrace tr = neumann_trace(u);
    if (region == TraceRegion::GOnly) {
        BoundaryTrace sel;
        sel.ncomp = tr.ncomp;
        sel.num_levels = tr.num_levels;
        std::vector<std::size_t> keep;
        for (std::size_t bi = 0; bi < tr.nodes.size(); ++bi)
            if (partition->in_g(tr.nodes[bi])) {
                keep.push_back(bi);
                sel.nodes.push_back(tr.nodes[bi]);
            }
        sel.values.resize(static_cast<std::size_t>(sel.num_levels) * sel.nodes.size() * sel.ncomp);
        for (int k = 0; k < sel.num_levels; ++k)
            for (std::size_t out = 0; out < keep.size(); ++out)
                for (int c = 0; c < sel.ncomp; ++c)
                    sel.values[(static_cast<std::size_t>(k) * sel.nodes.size() + out) * sel.ncomp + c] =
                        tr.at(k, static_cast<int>(keep[out]), c);
        m.neumann = std::move(sel);
    } else {
        m.neumann = std::move(tr);
    }

    // compatibility residual of the supplied data
    double compat = 0, x[2];
    std::vector<cplx> fval(q.dim()), pval(q.dim());
    for (int node = 0; node < grid.num_nodes(); ++node) {
        if (!grid.on_boundary(node)) continue;
        grid.node_point(node, x);
        std::fill(fval.begin(), fval.end(), cplx(0, 0));
        std::fill(pval.begin(), pval.end(), cplx(0, 0));
        if (data.f) data.f(0.0, x, fval.data());
        if (data.phi) data.phi(x, pval.data());
        for (int c = 0; c < q.dim(); ++c) compat = std::max(compat, std::abs(fval[c] - pval[c]));
    }
    m.compat_residual = compat;
    return m;
}

EnergyAudit energy_audit(const WaveField& u, const InitialBoundaryData& data) {
    const Grid& g = u.grid();
    const int ncomp = u.ncomp();
    const SurfaceQuad sq = build_surface_quad(g);

    EnergyAudit a;
    a.lhs_trace = neumann_l2_sigma(u, sq);
    a.lhs_h1 = h1_q(u);
    a.lhs_total = a.lhs_trace + a.lhs_h1;

    const int nn = g.num_nodes();
    std::vector<cplx> phiv(static_cast<std::size_t>(nn) * ncomp, cplx(0, 0));
    std::vector<cplx> psiv(static_cast<std::size_t>(nn) * ncomp, cplx(0, 0));
    double x[2] = {0, 0};
    for (int node = 0; node < nn; ++node) {
        g.node_point(node, x);
        if (data.phi) data.phi(x, &phiv[static_cast<std::size_t>(node) * ncomp]);
        if (data.psi) data.psi(x, &psiv[static_cast<std::size_t>(node) * ncomp]);
    }
    double phi_l2 = 0, phi_grad = 0, psi_l2 = 0;
    for (int node = 0; node < nn; ++node) {
        const double w = g.volume_weight(node);
        for (int c = 0; c < ncomp; ++c) {
            phi_l2 += w * std::norm(phiv[static_cast<std::size_t>(node) * ncomp + c]);
            psi_l2 += w * std::norm(psiv[static_cast<std::size_t>(node) * ncomp + c]);
            for (int axis = 0; axis < g.dim; ++axis)
                phi_grad += w * std::norm(spatial_derivative(g, phiv, ncomp, node, c, axis));
        }
    }
    a.rhs_phi = std::sqrt(phi_l2 + phi_grad);
    a.rhs_psi = std::sqrt(psi_l2);

    double f_l2 = 0;
    std::vector<cplx> fval(ncomp);
    for (int k = 0; k <= g.nt; ++k) {
        double s = 0;
        for (const auto& e : sq.entries) {
            g.node_point(e.node, x);
            std::fill(fval.begin(), fval.end(), cplx(0, 0));
            if (data.f) data.f(g.time(k), x, fval.data());
            double nn2 = 0;
            for (int c = 0; c < ncomp; ++c) nn2 += std::norm(fval[c]);
            s += e.weight * nn2;
        }
        f_l2 += g.time_weight(k) * s;
    }
    a.rhs_f = std::sqrt(f_l2);
    a.rhs_total = a.rhs_phi + a.rhs_psi + a.rhs_f;

    if (a.rhs_total > 0) {
        a.ratio = a.lhs_total / a.rhs_total;
    } else {
        a.ratio = 0;
        a.stability_violation = a.lhs_total > 1e-10;
    }
    return a;
}

// -------------------------------------------------------------- conjugated

double conjugated_dt_limit(const Grid& grid, double h) {
    const double base = grid.cfl_factor * grid.dx / std::sqrt(static_cast<double>(grid.dim));
    return base / (1.0 + 2.0 * grid.dx / h);
}

void check_resolution(const Grid& grid, double h) {
    if (h < 8.0 * grid.dx - 1e-12)
        throw std::invalid_argument("conjugated solve: h = " + std::to_string(h) +
                                    " under-resolved, need h >= 8*dx = " +
                                    std::to_string(8.0 * grid.dx));
}

ConjugatedStepper::ConjugatedStepper(const Grid& grid, const MatrixPotential& q_tilde,
                                     const ConjugatedOp& op, int ncomp)
    : grid_(grid), q_(q_tilde), op_(op), ncomp_(ncomp), has_q_(!q_tilde.is_zero()) {
    const std::size_t stride = static_cast<std::size_t>(grid.num_nodes()) * ncomp;
    prev_.assign(stride, cplx(0, 0));
    curr_.assign(stride, cplx(0, 0));
    next_.assign(stride, cplx(0, 0));
    if (has_q_) qbuf_.resize(static_cast<std::size_t>(grid.num_nodes()) * ncomp * ncomp);
}

void ConjugatedStepper::fill_q(double t) {
    if (!has_q_) return;
    double x[2] = {0, 0};
    for (int node = 0; node < grid_.num_nodes(); ++node) {
        grid_.node_point(node, x);
        q_.eval(t, x, &qbuf_[static_cast<std::size_t>(node) * ncomp_ * ncomp_]);
    }
}

void ConjugatedStepper::start(std::span<const cplx> source_level0) {
    const double s = grid_.dt * grid_.dt / (2.0 * op_.h * op_.h);
    for (int node = 0; node < grid_.num_nodes(); ++node) {
        if (grid_.on_boundary(node)) continue;
        for (int c = 0; c < ncomp_; ++c) {
            const std::size_t idx = static_cast<std::size_t>(node) * ncomp_ + c;
            curr_[idx] = s * source_level0[idx];
        }
    }
    k_ = 1;
}

void ConjugatedStepper::advance(std::span<const cplx> source_at_newest) {
    const double h = op_.h, dt = grid_.dt, dx = grid_.dx;
    const double alpha = h * h / (dt * dt);
    const double beta = op_.sign * h / dt;
    const double a_next = alpha + beta;
    const double a_prev = alpha - beta;
    const double h2 = h * h;
    const double tr = op_.sign * 2.0 * h / (2.0 * dx);   // transport * centered-difference factor
    const double lap_c = h2 / (dx * dx);
    fill_q(grid_.time(k_));

    const int nx = grid_.nx;
    const int m = ncomp_;
    const cplx* cu = curr_.data();
    const cplx* pu = prev_.data();
    const cplx* src = source_at_newest.data();
    cplx* nu = next_.data();
    const double w0 = op_.omega[0], w1 = op_.omega[1];

    auto update_node = [&](int node) {
        const std::size_t b = static_cast<std::size_t>(node) * m;
        const int sx = m, sy = nx * m;
        for (int c = 0; c < m; ++c) {
            const std::size_t idx = b + c;
            cplx lap = lap_c * (cu[idx + sx] - 2.0 * cu[idx] + cu[idx - sx]);
            cplx trp = tr * w0 * (cu[idx + sx] - cu[idx - sx]);
            if (grid_.dim == 2) {
                lap += lap_c * (cu[idx + sy] - 2.0 * cu[idx] + cu[idx - sy]);
                trp += tr * w1 * (cu[idx + sy] - cu[idx - sy]);
            }
            cplx qu(0, 0);
            if (has_q_) {
                const cplx* qa = &qbuf_[b * m];
                for (int j = 0; j < m; ++j) qu += qa[c * m + j] * cu[b + j];
            }
            nu[idx] = (src[idx] + 2.0 * alpha * cu[idx] - a_prev * pu[idx] + lap + trp -
                       h2 * qu) / a_next;
        }
    };

    if (grid_.dim == 1) {
        for (int ix = 1; ix < nx - 1; ++ix) update_node(ix);
        nu[0] = cplx(0, 0);
        nu[static_cast<std::size_t>(nx - 1) * m] = cplx(0, 0);
        for (int c = 1; c < m; ++c) {
            nu[c] = cplx(0, 0);
            nu[static_cast<std::size_t>(nx - 1) * m + c] = cplx(0, 0);
        }
    } else {
        for (int iy = 1; iy < nx - 1; ++iy)
            for (int ix = 1; ix < nx - 1; ++ix) update_node(ix + nx * iy);
        for (int node = 0; node < grid_.num_nodes(); ++node)
            if (grid_.on_boundary(node))
                for (int c = 0; c < m; ++c) nu[static_cast<std::size_t>(node) * m + c] = cplx(0, 0);
    }
    prev_.swap(curr_);
    curr_.swap(next_);
    ++k_;
}

void run_conjugated(const Grid& grid, const MatrixPotential& q_tilde, const ConjugatedOp& op,
                    const SourceFn& S, int ncomp, TimeDirection dir,
                    const LevelObserver& observe) {
    if (!(op.h > 0)) throw std::invalid_argument("conjugated solve: h must be positive");
    if (op.sign != 1 && op.sign != -1)
        throw std::invalid_argument("conjugated solve: sign must be +1 or -1");
    check_resolution(grid, op.h);
    const double limit = conjugated_dt_limit(grid, op.h);
    if (grid.dt > limit * (1 + 1e-12))
        throw std::invalid_argument(
            "conjugated solve: transport-augmented CFL violation, dt = " + std::to_string(grid.dt) +
            " exceeds " + std::to_string(limit) + "; need nt >= " +
            std::to_string(static_cast<int>(std::ceil(grid.T / limit - 1e-12))));

    if (dir == TimeDirection::Backward) {
        MatrixPotential q_r = time_reflect(q_tilde, grid.T);
        ConjugatedOp op_r{op.h, {-op.omega[0], -op.omega[1]}, -op.sign};
        const int nt = grid.nt;
        const double T = grid.T;
        SourceFn s_r = [&S, nt, T](int k, double t, std::span<cplx> out) {
            S(nt - k, T - t, out);
        };
        run_conjugated(grid, q_r, op_r, s_r, ncomp, TimeDirection::Forward,
                       [&observe, nt](int k, std::span<const cplx> lev) { observe(nt - k, lev); });
        return;
    }

    ConjugatedStepper st(grid, q_tilde, op, ncomp);
    const std::size_t stride = static_cast<std::size_t>(grid.num_nodes()) * ncomp;
    std::vector<cplx> src(stride, cplx(0, 0));
    if (S) S(0, 0.0, src);
    st.start(src);
    observe(0, st.previous());
    observe(1, st.newest());
    for (int k = 1; k < grid.nt; ++k) {
        if (S) {
            S(k, grid.time(k), src);
        }
        st.advance(src);
        observe(k + 1, st.newest());
    }
    check_level_finite(st.newest(), "solve_conjugated");
}

WaveField solve_conjugated(const Grid& grid, const MatrixPotential& q_tilde,
                           const ConjugatedOp& op, const SourceFn& S, int ncomp,
                           TimeDirection dir) {
    WaveField w(grid, ncomp);
    run_conjugated(grid, q_tilde, op, S, ncomp, dir, [&](int k, std::span<const cplx> lev) {
        std::copy(lev.begin(), lev.end(), w.level(k).begin());
    });
    if (!w.all_finite()) throw numerical_error("solve_conjugated: non-finite values in solution");
    w.set_tag(ConjugatedTag{op.h, op.omega, op.sign});
    return w;
}

void apply_conjugated_stencil(const Grid& grid, const MatrixPotential& q_tilde,
                              const ConjugatedOp& op, int ncomp, int k_mid,
                              std::span<const cplx> prev, std::span<const cplx> mid,
                              std::span<const cplx> next, std::span<cplx> out) {
    const double h = op.h, dt = grid.dt;
    const double h2 = h * h;
    QLevel ql(grid, q_tilde);
    ql.fill(grid, grid.time(k_mid));
    std::vector<cplx> uval(ncomp), qu(ncomp, cplx(0, 0));
    std::fill(out.begin(), out.end(), cplx(0, 0));
    for (int node = 0; node < grid.num_nodes(); ++node) {
        if (grid.on_boundary(node)) continue;
        for (int c = 0; c < ncomp; ++c) uval[c] = mid[static_cast<std::size_t>(node) * ncomp + c];
        if (ql.active) ql.apply(node, uval.data(), qu.data());
        for (int c = 0; c < ncomp; ++c) {
            const std::size_t idx = static_cast<std::size_t>(node) * ncomp + c;
            const cplx utt = (next[idx] - 2.0 * mid[idx] + prev[idx]) / (dt * dt);
            const cplx ut = (next[idx] - prev[idx]) / (2.0 * dt);
            cplx grad = op.omega[0] * spatial_derivative(grid, mid, ncomp, node, c, 0);
            if (grid.dim == 2) grad += op.omega[1] * spatial_derivative(grid, mid, ncomp, node, c, 1);
            const cplx lap = laplacian(grid, mid, ncomp, node, c);
            out[idx] = h2 * (utt - lap) + op.sign * 2.0 * h * (ut - grad) + h2 * qu[c];
        }
    }
}

}  // namespace mwip
