#include "mwip/identity.hpp"

#include <cmath>

namespace mwip {

namespace {

SourceFn difference_source(const Grid& grid, const MatrixPotential& qdiff, const GoProbe& growing,
                           int m) {
    const double h = growing.op.h;
    return [&grid, qdiff, &growing, m, h](int k, double t, std::span<cplx> out) {
        std::vector<cplx> qv(static_cast<std::size_t>(m) * m);
        double x[2] = {0, 0};
        for (int node = 0; node < grid.num_nodes(); ++node) {
            grid.node_point(node, x);
            qdiff.eval(t, x, qv.data());
            bool any = false;
            for (const cplx& v : qv)
                if (v != cplx(0, 0)) { any = true; break; }
            const std::size_t base = static_cast<std::size_t>(node) * m;
            if (!any) {
                for (int c = 0; c < m; ++c) out[base + c] = cplx(0, 0);
                continue;
            }
            for (int c = 0; c < m; ++c) {
                cplx acc(0, 0);
                for (int j = 0; j < m; ++j) {
                    const cplx amp = growing.K[j] + h * growing.R->at(k, node, j);
                    acc += qv[static_cast<std::size_t>(c) * m + j] * amp;
                }
                out[base + c] = h * h * acc;
            }
        }
    };
}

}  // namespace

WaveField difference_field(const Grid& grid, const MatrixPotential& q1,
                           const MatrixPotential& q2, const GoProbe& growing) {
    if (growing.op.sign != +1 || !growing.R)
        throw std::invalid_argument("difference_field: need a growing probe with full storage");
    const int m = q1.dim();
    if (q2.dim() != m || growing.ncomp != m)
        throw std::invalid_argument("difference_field: dimension mismatch");
    const MatrixPotential qdiff = difference(q1, q2);
    WaveField u = solve_conjugated(grid, q1, growing.op,
                                   difference_source(grid, qdiff, growing, m), m,
                                   TimeDirection::Forward);
    return u;
}

IdentityReport evaluate_identity(const Grid& grid, const MatrixPotential& q1,
                                 const MatrixPotential& q2, double h,
                                 const std::array<double, 2>& omega,
                                 const std::array<double, 3>& zeta, const std::vector<cplx>& K1,
                                 const std::vector<cplx>& K2, const BoundaryPartition& partition) {
    const int m = q1.dim();
    if (static_cast<int>(partition.g_prime.size()) != grid.num_nodes())
        throw std::invalid_argument("evaluate_identity: partition built on a different grid");

    IdentityReport rep;
    rep.h = h;

    GoProbe pg = make_growing_probe(grid, q2, h, omega, K2, ProbeStorage::Full);
    GoProbe pd = make_decaying_probe(grid, q1, h, omega, zeta, K1, ProbeStorage::Full);
    rep.probe_residual_growing = pg.residual_norm;
    rep.probe_residual_decaying = pd.residual_norm;

    const MatrixPotential qdiff = difference(q1, q2);
    WaveField ut = difference_field(grid, q1, q2, pg);

    double maxabs = 0;
    auto track = [&maxabs](const cplx& v) { maxabs = std::max(maxabs, std::abs(v)); };

    // lhs = int_Q (q (B_g + hR_g)) . conj(B_d + hR_d)
    std::vector<cplx> qv(static_cast<std::size_t>(m) * m);
    double x[2] = {0, 0};
    cplx lhs(0, 0);
    for (int k = 0; k <= grid.nt; ++k) {
        const double t = grid.time(k);
        cplx s(0, 0);
        for (int node = 0; node < grid.num_nodes(); ++node) {
            grid.node_point(node, x);
            qdiff.eval(t, x, qv.data());
            bool any = false;
            for (const cplx& v : qv)
                if (v != cplx(0, 0)) { any = true; break; }
            if (!any) continue;
            for (int i = 0; i < m; ++i) {
                cplx qu(0, 0);
                for (int j = 0; j < m; ++j) {
                    const cplx ag = pg.K[j] + h * pg.R->at(k, node, j);
                    track(ag);
                    qu += qv[static_cast<std::size_t>(i) * m + j] * ag;
                }
                const cplx ad = pd.b_at(t, x, grid.dim, i) + h * pd.R->at(k, node, i);
                track(ad);
                s += grid.volume_weight(node) * qu * std::conj(ad);
            }
        }
        lhs += grid.time_weight(k) * s;
    }
    rep.lhs = lhs;

    // final-time pairings; dt u e^{-phi/h} = dt u~ + u~/h, dt v e^{+phi/h} = dt A_d - A_d/h
    const std::size_t stride = static_cast<std::size_t>(grid.num_nodes()) * m;
    std::vector<cplx> ut_dt(stride);
    one_sided_time_derivative(ut.level(grid.nt), ut.level(grid.nt - 1), ut.level(grid.nt - 2),
                              grid.dt, ut_dt);
    cplx a_term(0, 0), b_term(0, 0);
    for (int node = 0; node < grid.num_nodes(); ++node) {
        const double w = grid.volume_weight(node);
        for (int c = 0; c < m; ++c) {
            const std::size_t idx = static_cast<std::size_t>(node) * m + c;
            const cplx uT = ut.at(grid.nt, node, c);
            const cplx du = ut_dt[idx] + uT / h;
            const cplx adT = pd.amp_T[idx];
            const cplx dv = pd.amp_dt_T[idx] - adT / h;
            track(du);
            track(adT);
            track(dv);
            a_term += w * du * std::conj(adT);
            b_term -= w * uT * std::conj(dv);
        }
    }
    rep.rhs_final = a_term;
    rep.rhs_final_dual = b_term;

    // lateral pairings; d_nu u e^{-phi/h} = d_nu u~ on Sigma since u~ vanishes there
    const SurfaceQuad sq = build_surface_quad(grid);
    cplx lat_out(0, 0), lat_g(0, 0);
    for (int k = 0; k <= grid.nt; ++k) {
        const auto lev = ut.level(k);
        cplx so(0, 0), sg(0, 0);
        for (std::size_t ei = 0; ei < sq.entries.size(); ++ei) {
            const auto& e = sq.entries[ei];
            cplx dot(0, 0);
            for (int c = 0; c < m; ++c) {
                const cplx dn = neumann_at_entry(grid, lev, m, e, c);
                const cplx ad =
                    pd.amp_sigma[(static_cast<std::size_t>(k) * sq.entries.size() + ei) * m + c];
                track(dn);
                dot += dn * std::conj(ad);
            }
            if (partition.in_g(e.node))
                sg += e.weight * dot;
            else
                so += e.weight * dot;
        }
        lat_out -= grid.time_weight(k) * so;
        lat_g -= grid.time_weight(k) * sg;
    }
    rep.rhs_lateral = lat_out;
    rep.rhs_lateral_g = lat_g;

    rep.gap = std::abs(rep.lhs - rep.rhs_final - rep.rhs_lateral);
    rep.gap_exact = std::abs(rep.lhs - (rep.rhs_final + rep.rhs_final_dual + rep.rhs_lateral +
                                        rep.rhs_lateral_g));
    rep.rel_gap_exact = rep.gap_exact / (std::abs(rep.lhs) + 1e-300);

    // cone limit: conj(B_d) carries exp(+i zeta.(t,x)), so lhs approaches the
    // oracle at -zeta
    cplx target(0, 0);
    const std::array<double, 3> mz{-zeta[0], -zeta[1], -zeta[2]};
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            target += std::conj(K1[i]) * K2[j] * fourier_oracle(qdiff, grid, i, j, mz);
    rep.fourier_target = target;
    rep.max_intermediate = maxabs;
    return rep;
}

std::vector<DecayRow> remainder_decay_sweep(const Grid& grid, const MatrixPotential& q1,
                                            const MatrixPotential& q2,
                                            const std::array<double, 2>& omega,
                                            const std::array<double, 3>& zeta,
                                            const std::vector<cplx>& K1,
                                            const std::vector<cplx>& K2,
                                            const std::vector<double>& h_list,
                                            const BoundaryPartition& partition) {
    std::vector<DecayRow> rows;
    for (double h : h_list) {
        DecayRow r;
        r.h = h;
        r.report = evaluate_identity(grid, q1, q2, h, omega, zeta, K1, K2, partition);
        r.final_mag = std::abs(r.report.rhs_final);
        r.lateral_mag = std::abs(r.report.rhs_lateral);
        r.final_lemma = h * r.final_mag;
        r.lateral_lemma = h * r.lateral_mag;
        r.lhs_vs_target = std::abs(r.report.lhs - r.report.fourier_target);
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace mwip
