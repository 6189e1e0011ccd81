#pragma once

#include <cstdint>

#include "mwip/solver.hpp"

namespace mwip {

/// Pseudo-random smooth field u = t^2 * chi(x) * s(t,x) satisfying the
/// weighted-estimate hypotheses discretely: u(0,.) = 0 and du/dt(0,.) = 0
/// (t^2 factor, s even in t) and u = 0 on Sigma (chi keeps a fixed margin
/// of at least two node layers from the boundary).
WaveField admissible_test_field(std::uint64_t seed, const Grid& grid, int ncomp);

/// Throws naming the violated hypothesis when u fails u|_Sigma = 0,
/// u|_{t=0} = 0 or du/dt|_{t=0} = 0 at the discrete level.
void require_admissible(const WaveField& u);

/// Both sides of the weighted boundary estimate for weight exp(-phi/h),
/// phi = t + x.omega. Flux terms carry the |nu.omega| factor of d_nu(phi),
/// so every stored term is nonnegative.
struct CarlemanTerms {
    double h = 0;
    // controlled side
    double interior = 0;        // int_Q e^{-2phi/h} |u|^2
    double flux_plus = 0;       // h int_{Sigma+} (nu.omega) e^{-2phi/h} |d_nu u|^2
    double final_velocity = 0;  // h int_Omega e^{-2phi(T)/h} |du/dt(T)|^2
    // controlling side (constant-free)
    double op_term = 0;         // h^2 int_Q e^{-2phi/h} |L_q u|^2
    double final_value = 0;     // (1/h) int_Omega e^{-2phi(T)/h} |u(T)|^2
    double final_gradient = 0;  // h int_Omega e^{-2phi(T)/h} |grad u(T)|^2
    double flux_minus = 0;      // h int_{Sigma-} (-nu.omega) e^{-2phi/h} |d_nu u|^2
    double lhs_total = 0, rhs_total = 0;
    double ratio = 0;  // lhs/rhs; 0 when both sides vanish
};

CarlemanTerms evaluate_carleman(const WaveField& u, const MatrixPotential& q, double h,
                                const std::array<double, 2>& omega);

/// Discrete integration-by-parts audit of
/// 4h^3 int_Q Re(Box v_j dt(conj v_j)) = 2h^3 int_Omega (|dt v_j(T)|^2 + |grad v_j(T)|^2);
/// returns |volume form - surface form| / (|surface form| + tiny).
double check_p2_identity(const WaveField& v, double h, const std::array<double, 2>& omega);

/// Audit of the transport cross term:
/// -4h^3 int_Q Re(Box v_j (omega.grad conj v_j)) against its closed form
/// -4h^3 Re int_Omega dt v_j(T) (omega.grad conj v_j)(T) + 2h^3 int_Sigma (omega.nu)|d_nu v_j|^2.
double check_p1p2_boundary_identity(const WaveField& v, double h,
                                    const std::array<double, 2>& omega);

/// One sweep record, as emitted by the CLI.
struct CarlemanRecord {
    std::uint64_t seed = 0;
    std::string q_name;
    CarlemanTerms terms;
};

}  // namespace mwip
