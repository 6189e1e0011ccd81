#pragma once

#include <optional>

#include "mwip/solver.hpp"

namespace mwip {

/// Space-time frequency (zeta_t, zeta_x) with zeta_t = xi_x . omega, so that
/// zeta . (1, -omega) = 0 holds exactly by construction.
std::array<double, 3> make_zeta(int dim, const std::array<double, 2>& omega,
                                const std::array<double, 2>& xi_x);

enum class ProbeStorage { Full, TracesOnly };

/// Geometric-optics probe in conjugated representation. The physical probe is
/// exp(sign*phi/h) (B + h R); it is never materialized here. B is analytic:
/// a constant vector K for the growing probe, exp(-i zeta.(t,x)) K for the
/// decaying one.
struct GoProbe {
    ConjugatedOp op;
    std::array<double, 3> zeta{0, 0, 0};
    std::vector<cplx> K;
    int ncomp = 0;

    double remainder_l2 = 0;   // |R|_{L2(Q)}
    double residual_norm = 0;  // |(conj op + h^2 q~)(B + hR)|_{L2, interior} / |B|_{L2(Q)}
    bool residual_flagged = false;  // residual_norm > 0.1

    std::optional<WaveField> R;  // Full storage only

    // amplitude A = B + hR sampled where the downstream integrals need it
    std::vector<cplx> amp_sigma;  // (nt+1) x surface entries x ncomp
    std::vector<cplx> amp_T;      // A(T,.)
    std::vector<cplx> amp_dt_T;   // dA/dt(T,.), one-sided second order

    /// Analytic amplitude B at (t, x).
    cplx b_at(double t, const double* x, int dim, int c) const;
    /// d/dt of B.
    cplx b_dt_at(double t, const double* x, int dim, int c) const;
};

/// Decaying probe for the adjoint operator: B_d = exp(-i zeta.(t,x)) K1 and
/// R_d solving (Box_{-phi} + h^2 q*) R_d = -h L_{q*} B_d, zero Cauchy data
/// placed at t = T (backward solve; the forward modes of Box_{-phi} grow
/// like exp(t/h) and would swamp the remainder).
GoProbe make_decaying_probe(const Grid& grid, const MatrixPotential& q, double h,
                            const std::array<double, 2>& omega, const std::array<double, 3>& zeta,
                            const std::vector<cplx>& K1, ProbeStorage storage = ProbeStorage::Full);

/// Growing probe for L_q: B_g = K2, R_g solving
/// (Box_{+phi} + h^2 q) R_g = -h q K2 with zero data at t = 0.
GoProbe make_growing_probe(const Grid& grid, const MatrixPotential& q, double h,
                           const std::array<double, 2>& omega, const std::vector<cplx>& K2,
                           ProbeStorage storage = ProbeStorage::Full);

/// Affine fixed-point iteration for the decaying remainder, mirror of the
/// contraction argument behind the probe's existence; must agree with the
/// direct solve to solver accuracy.
WaveField decaying_remainder_fixed_point(const Grid& grid, const MatrixPotential& q, double h,
                                         const std::array<double, 2>& omega,
                                         const std::array<double, 3>& zeta,
                                         const std::vector<cplx>& K1, int max_iter = 50,
                                         double tol = 1e-10, int* iterations = nullptr);

struct RemainderSweepRow {
    double h = 0;
    double decaying_l2 = 0, growing_l2 = 0;
    double decaying_residual = 0, growing_residual = 0;
};
struct RemainderSweep {
    std::vector<RemainderSweepRow> rows;
    double decaying_max_over_min = 0, growing_max_over_min = 0;
};

/// Per-h remainder norms for both probe families on one grid; all h must
/// satisfy the resolution rule there.
RemainderSweep remainder_norm_sweep(const Grid& grid, const MatrixPotential& q,
                                    const std::array<double, 2>& omega,
                                    const std::array<double, 3>& zeta, const std::vector<cplx>& K,
                                    const std::vector<double>& h_list);

}  // namespace mwip
