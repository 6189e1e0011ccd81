#pragma once

#include "mwip/go_probes.hpp"

namespace mwip {

/// Both sides of the boundary integral identity evaluated in conjugated
/// variables (the exp(+-phi/h) weights cancel analytically in every product).
///
/// gap is the limit-form defect |lhs - rhs_final - rhs_lateral|; gap_exact
/// additionally keeps the terms that vanish only when the two input-output
/// maps coincide (the u(T) pairing and the G part of the lateral trace), so
/// it measures pure discretization error for any pair of potentials.
struct IdentityReport {
    double h = 0;
    cplx lhs;             // int_Q q u2 . conj(v)
    cplx rhs_final;       // int_Omega dt u(T) . conj(v(T))
    cplx rhs_final_dual;  // -int_Omega u(T) . dt conj(v(T))
    cplx rhs_lateral;     // -int_{Sigma\G} d_nu u . conj(v)
    cplx rhs_lateral_g;   // -int_G d_nu u . conj(v)
    double gap = 0;
    double gap_exact = 0;
    double rel_gap_exact = 0;
    cplx fourier_target;  // cone limit of lhs, via the Fourier oracle
    double probe_residual_growing = 0, probe_residual_decaying = 0;
    double max_intermediate = 0;  // overflow audit over every stored value
};

/// Difference field in conjugated representation: solves
/// (Box_{+phi} + h^2 q1) u~ = h^2 (q2-q1) (B_g + h R_g) with zero data;
/// the physical difference is exp(phi/h) u~ by the tag.
WaveField difference_field(const Grid& grid, const MatrixPotential& q1,
                           const MatrixPotential& q2, const GoProbe& growing);

IdentityReport evaluate_identity(const Grid& grid, const MatrixPotential& q1,
                                 const MatrixPotential& q2, double h,
                                 const std::array<double, 2>& omega,
                                 const std::array<double, 3>& zeta, const std::vector<cplx>& K1,
                                 const std::vector<cplx>& K2, const BoundaryPartition& partition);

/// Per-h magnitudes of the two unmeasured terms. The lemma-form columns carry
/// the additional factor h of the decay statements; the raw columns are the
/// identity terms themselves.
struct DecayRow {
    double h = 0;
    double final_mag = 0, lateral_mag = 0;        // |rhs_final|, |rhs_lateral|
    double final_lemma = 0, lateral_lemma = 0;    // h * the above
    double lhs_vs_target = 0;                     // |lhs - fourier_target|
    IdentityReport report;
};

std::vector<DecayRow> remainder_decay_sweep(const Grid& grid, const MatrixPotential& q1,
                                            const MatrixPotential& q2,
                                            const std::array<double, 2>& omega,
                                            const std::array<double, 3>& zeta,
                                            const std::vector<cplx>& K1,
                                            const std::vector<cplx>& K2,
                                            const std::vector<double>& h_list,
                                            const BoundaryPartition& partition);

}  // namespace mwip
