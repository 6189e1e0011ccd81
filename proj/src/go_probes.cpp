#include "mwip/go_probes.hpp"

#include <cmath>

namespace mwip {

std::array<double, 3> make_zeta(int dim, const std::array<double, 2>& omega,
                                const std::array<double, 2>& xi_x) {
    double dot = omega[0] * xi_x[0] + (dim == 2 ? omega[1] * xi_x[1] : 0.0);
    return {dot, xi_x[0], dim == 2 ? xi_x[1] : 0.0};
}

cplx GoProbe::b_at(double t, const double* x, int dim, int c) const {
    if (op.sign > 0) return K[c];
    const double arg = zeta[0] * t + zeta[1] * x[0] + (dim == 2 ? zeta[2] * x[1] : 0.0);
    return std::polar(1.0, -arg) * K[c];
}

cplx GoProbe::b_dt_at(double t, const double* x, int dim, int c) const {
    if (op.sign > 0) return {0, 0};
    return cplx(0, -zeta[0]) * b_at(t, x, dim, c);
}

namespace {

// collects traces, remainder norm, residual and (optionally) the full field
// from a streamed conjugated solve of the remainder equation
struct ProbeCollector {
    const Grid& g;
    GoProbe& p;
    const MatrixPotential& q_tilde;
    const SurfaceQuad& sq;
    bool keep_full;
    int m;

    // rolling window of amplitude levels in visit order
    std::vector<std::vector<cplx>> win;  // up to 3 levels
    std::vector<int> win_k;
    std::vector<cplx> resid;
    double resid_acc = 0, rem_acc = 0;

    ProbeCollector(const Grid& grid, GoProbe& probe, const MatrixPotential& qt,
                   const SurfaceQuad& surf, bool full)
        : g(grid), p(probe), q_tilde(qt), sq(surf), keep_full(full), m(probe.ncomp) {
        const std::size_t stride = static_cast<std::size_t>(g.num_nodes()) * m;
        resid.resize(stride);
        p.amp_sigma.assign(static_cast<std::size_t>(g.num_levels()) * sq.entries.size() * m,
                           cplx(0, 0));
        p.amp_T.assign(stride, cplx(0, 0));
        p.amp_dt_T.assign(stride, cplx(0, 0));
        if (keep_full) p.R.emplace(g, m);
    }

    void amplitude_of(int k, std::span<const cplx> r_level, std::vector<cplx>& out) {
        const double t = g.time(k);
        const double h = p.op.h;
        out.resize(r_level.size());
        double x[2] = {0, 0};
        for (int node = 0; node < g.num_nodes(); ++node) {
            g.node_point(node, x);
            for (int c = 0; c < m; ++c) {
                const std::size_t idx = static_cast<std::size_t>(node) * m + c;
                out[idx] = p.b_at(t, x, g.dim, c) + h * r_level[idx];
            }
        }
    }

    void operator()(int k, std::span<const cplx> r_level) {
        if (keep_full) std::copy(r_level.begin(), r_level.end(), p.R->level(k).begin());

        // remainder L2 accumulation
        double s = 0;
        for (int node = 0; node < g.num_nodes(); ++node) {
            double nn = 0;
            for (int c = 0; c < m; ++c) nn += std::norm(r_level[static_cast<std::size_t>(node) * m + c]);
            s += g.volume_weight(node) * nn;
        }
        rem_acc += g.time_weight(k) * s;

        // lateral trace of the amplitude
        double x[2] = {0, 0};
        const double h = p.op.h;
        for (std::size_t ei = 0; ei < sq.entries.size(); ++ei) {
            const int node = sq.entries[ei].node;
            g.node_point(node, x);
            for (int c = 0; c < m; ++c)
                p.amp_sigma[(static_cast<std::size_t>(k) * sq.entries.size() + ei) * m + c] =
                    p.b_at(g.time(k), x, g.dim, c) +
                    h * r_level[static_cast<std::size_t>(node) * m + c];
        }

        // rolling residual window (amplitude, physical order)
        std::vector<cplx> amp;
        amplitude_of(k, r_level, amp);
        win.push_back(std::move(amp));
        win_k.push_back(k);
        if (win.size() == 3) {
            // physical orientation: prev = smallest k
            int order[3] = {0, 1, 2};
            if (win_k[0] > win_k[2]) {
                order[0] = 2;
                order[2] = 0;
            }
            const int k_mid = win_k[order[1]];
            apply_conjugated_stencil(g, q_tilde, p.op, m, k_mid, win[order[0]], win[order[1]],
                                     win[order[2]], resid);
            double rs = 0;
            for (int node = 0; node < g.num_nodes(); ++node) {
                double nn = 0;
                for (int c = 0; c < m; ++c) nn += std::norm(resid[static_cast<std::size_t>(node) * m + c]);
                rs += g.volume_weight(node) * nn;
            }
            resid_acc += g.dt * rs;
            win.erase(win.begin());
            win_k.erase(win_k.begin());
        }
    }

    // final-time data must be taken from the three levels adjacent to T,
    // regardless of visit order
    void record_final(const WaveField* full, const std::vector<std::vector<cplx>>& tail,
                      const std::vector<int>& tail_k) {
        const double h = p.op.h;
        const std::size_t stride = static_cast<std::size_t>(g.num_nodes()) * m;
        std::vector<cplx> rT(stride), rT1(stride), rT2(stride);
        auto fetch = [&](int k, std::vector<cplx>& dst) {
            if (full) {
                auto lv = full->level(k);
                std::copy(lv.begin(), lv.end(), dst.begin());
            } else {
                for (std::size_t i = 0; i < tail_k.size(); ++i)
                    if (tail_k[i] == k) std::copy(tail[i].begin(), tail[i].end(), dst.begin());
            }
        };
        fetch(g.nt, rT);
        fetch(g.nt - 1, rT1);
        fetch(g.nt - 2, rT2);
        std::vector<cplx> rdt(stride);
        one_sided_time_derivative(rT, rT1, rT2, g.dt, rdt);
        double x[2] = {0, 0};
        for (int node = 0; node < g.num_nodes(); ++node) {
            g.node_point(node, x);
            for (int c = 0; c < m; ++c) {
                const std::size_t idx = static_cast<std::size_t>(node) * m + c;
                p.amp_T[idx] = p.b_at(g.T, x, g.dim, c) + h * rT[idx];
                p.amp_dt_T[idx] = p.b_dt_at(g.T, x, g.dim, c) + h * rdt[idx];
            }
        }
    }
};

GoProbe build_probe(const Grid& grid, const MatrixPotential& q_tilde, double h,
                    const std::array<double, 2>& omega, const std::array<double, 3>& zeta,
                    const std::vector<cplx>& K, int sign, ProbeStorage storage) {
    check_resolution(grid, h);
    GoProbe p;
    p.op = ConjugatedOp{h, omega, sign};
    p.zeta = zeta;
    p.K = K;
    p.ncomp = static_cast<int>(K.size());
    const int m = p.ncomp;
    if (q_tilde.dim() != m) throw std::invalid_argument("probe: potential/K dimension mismatch");

    const double box_b = zeta[1] * zeta[1] + zeta[2] * zeta[2] - zeta[0] * zeta[0];

    // source: -h L_{q~} B = -h (Box B + q~ B); Box B = (|zeta_x|^2 - zeta_t^2) B
    std::vector<cplx> qb(static_cast<std::size_t>(m) * m);
    SourceFn src = [&](int, double t, std::span<cplx> out) {
        double x[2] = {0, 0};
        for (int node = 0; node < grid.num_nodes(); ++node) {
            grid.node_point(node, x);
            q_tilde.eval(t, x, qb.data());
            for (int c = 0; c < m; ++c) {
                cplx acc = box_b * p.b_at(t, x, grid.dim, c);
                for (int j = 0; j < m; ++j) acc += qb[c * static_cast<std::size_t>(m) + j] *
                                                   p.b_at(t, x, grid.dim, j);
                out[static_cast<std::size_t>(node) * m + c] = -h * acc;
            }
        }
    };

    const SurfaceQuad sq = build_surface_quad(grid);
    const bool full = storage == ProbeStorage::Full;
    ProbeCollector coll(grid, p, q_tilde, sq, full);

    // keep the three levels nearest T when streaming
    std::vector<std::vector<cplx>> tail(3);
    std::vector<int> tail_k = {-1, -1, -1};
    const TimeDirection dir = sign < 0 ? TimeDirection::Backward : TimeDirection::Forward;
    run_conjugated(grid, q_tilde, p.op, src, m, dir, [&](int k, std::span<const cplx> lev) {
        coll(k, lev);
        if (!full && k >= grid.nt - 2) {
            const int slot = grid.nt - k;
            tail[slot].assign(lev.begin(), lev.end());
            tail_k[slot] = k;
        }
    });
    coll.record_final(full ? &*p.R : nullptr, tail, tail_k);
    if (full) p.R->set_tag(ConjugatedTag{h, omega, sign});

    p.remainder_l2 = std::sqrt(coll.rem_acc);
    const double k_norm2 = [&] {
        double s = 0;
        for (const cplx& v : K) s += std::norm(v);
        return s;
    }();
    const double b_l2 = std::sqrt(k_norm2 * grid.T);  // |B| = |K| pointwise, |Omega| = 1
    p.residual_norm = b_l2 > 0 ? std::sqrt(coll.resid_acc) / b_l2 : 0.0;
    p.residual_flagged = p.residual_norm > 0.1;
    return p;
}

}  // namespace

GoProbe make_decaying_probe(const Grid& grid, const MatrixPotential& q, double h,
                            const std::array<double, 2>& omega, const std::array<double, 3>& zeta,
                            const std::vector<cplx>& K1, ProbeStorage storage) {
    const double ortho = zeta[0] - (zeta[1] * omega[0] + zeta[2] * omega[1]);
    const double scale = std::abs(zeta[0]) + std::abs(zeta[1]) + std::abs(zeta[2]);
    if (std::abs(ortho) > 1e-12 * std::max(1.0, scale))
        throw std::invalid_argument("decaying probe: zeta must satisfy zeta.(1,-omega) = 0");
    return build_probe(grid, q.adjoint(), h, omega, zeta, K1, -1, storage);
}

GoProbe make_growing_probe(const Grid& grid, const MatrixPotential& q, double h,
                           const std::array<double, 2>& omega, const std::vector<cplx>& K2,
                           ProbeStorage storage) {
    return build_probe(grid, q, h, omega, {0, 0, 0}, K2, +1, storage);
}

WaveField decaying_remainder_fixed_point(const Grid& grid, const MatrixPotential& q, double h,
                                         const std::array<double, 2>& omega,
                                         const std::array<double, 3>& zeta,
                                         const std::vector<cplx>& K1, int max_iter, double tol,
                                         int* iterations) {
    const MatrixPotential qs = q.adjoint();
    const int m = static_cast<int>(K1.size());
    const ConjugatedOp op{h, omega, -1};
    const double box_b = zeta[1] * zeta[1] + zeta[2] * zeta[2] - zeta[0] * zeta[0];
    GoProbe shape;  // only for b_at
    shape.op = op;
    shape.zeta = zeta;
    shape.K = K1;
    shape.ncomp = m;

    std::vector<cplx> qb(static_cast<std::size_t>(m) * m);
    auto fixed_source = [&](double t, const double* x, int c) {
        qs.eval(t, x, qb.data());
        cplx acc = box_b * shape.b_at(t, x, grid.dim, c);
        for (int j = 0; j < m; ++j) acc += qb[c * static_cast<std::size_t>(m) + j] *
                                           shape.b_at(t, x, grid.dim, j);
        return -h * acc;
    };

    WaveField w(grid, m);  // zero start
    const MatrixPotential none = MatrixPotential::zero(m);
    for (int it = 0; it < max_iter; ++it) {
        SourceFn src = [&](int k, double t, std::span<cplx> out) {
            double x[2] = {0, 0};
            for (int node = 0; node < grid.num_nodes(); ++node) {
                grid.node_point(node, x);
                qs.eval(t, x, qb.data());
                for (int c = 0; c < m; ++c) {
                    cplx acc = fixed_source(t, x, c);
                    for (int j = 0; j < m; ++j)
                        acc -= h * h * qb[c * static_cast<std::size_t>(m) + j] * w.at(k, node, j);
                    out[static_cast<std::size_t>(node) * m + c] = acc;
                }
            }
        };
        WaveField w_next =
            solve_conjugated(grid, none, op, src, m, TimeDirection::Backward);
        // L2 gap between successive iterates
        double gap2 = 0;
        for (int k = 0; k <= grid.nt; ++k) {
            double s = 0;
            for (int node = 0; node < grid.num_nodes(); ++node)
                for (int c = 0; c < m; ++c) s += grid.volume_weight(node) *
                                                 std::norm(w_next.at(k, node, c) - w.at(k, node, c));
            gap2 += grid.time_weight(k) * s;
        }
        w = std::move(w_next);
        if (iterations) *iterations = it + 1;
        if (std::sqrt(gap2) < tol) {
            w.set_tag(ConjugatedTag{h, omega, -1});
            return w;
        }
    }
    throw numerical_error("decaying_remainder_fixed_point: no convergence within max_iter");
}

RemainderSweep remainder_norm_sweep(const Grid& grid, const MatrixPotential& q,
                                    const std::array<double, 2>& omega,
                                    const std::array<double, 3>& zeta, const std::vector<cplx>& K,
                                    const std::vector<double>& h_list) {
    RemainderSweep out;
    double dmin = 0, dmax = 0, gmin = 0, gmax = 0;
    for (double h : h_list) {
        GoProbe pd = make_decaying_probe(grid, q, h, omega, zeta, K, ProbeStorage::TracesOnly);
        GoProbe pg = make_growing_probe(grid, q, h, omega, K, ProbeStorage::TracesOnly);
        RemainderSweepRow row;
        row.h = h;
        row.decaying_l2 = pd.remainder_l2;
        row.growing_l2 = pg.remainder_l2;
        row.decaying_residual = pd.residual_norm;
        row.growing_residual = pg.residual_norm;
        out.rows.push_back(row);
        if (out.rows.size() == 1) {
            dmin = dmax = row.decaying_l2;
            gmin = gmax = row.growing_l2;
        } else {
            dmin = std::min(dmin, row.decaying_l2);
            dmax = std::max(dmax, row.decaying_l2);
            gmin = std::min(gmin, row.growing_l2);
            gmax = std::max(gmax, row.growing_l2);
        }
    }
    out.decaying_max_over_min = dmin > 0 ? dmax / dmin : (dmax > 0 ? HUGE_VAL : 1.0);
    out.growing_max_over_min = gmin > 0 ? gmax / gmin : (gmax > 0 ? HUGE_VAL : 1.0);
    return out;
}

}  // namespace mwip
