#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "mwip/geometry.hpp"

namespace mwip {

using cplx = std::complex<double>;

/// Cubic B-spline bump: support |s| < 1, peak value 1 at s = 0, C^2.
double bspline_bump(double s);
double bspline_bump_deriv(double s);

/// Axis-aligned space-time box, used as the compact-support region of a
/// potential. Empty box (t0 > t1) means "identically zero potential".
struct SupportBox {
    double t0 = 0, t1 = -1;
    std::array<double, 2> x0{0, 0}, x1{-1, -1};
    bool empty() const { return t0 > t1; }
};

/// n x n time-dependent matrix potential q(t,x) on Q, complex entries.
///
/// Closed-form potentials evaluate anywhere in the closure of Q; grid-sampled
/// ones evaluate only at their own grid's nodes (no interpolation).
class MatrixPotential {
  public:
    using EntryFn = std::function<cplx(double t, const double* x)>;
    enum class Kind { ClosedForm, GridSampled };

    static MatrixPotential zero(int m);
    static MatrixPotential constant(int m, std::vector<cplx> entries);  // row-major m*m
    static MatrixPotential closed_form(int m, std::vector<EntryFn> entries);
    static MatrixPotential sampled(const Grid& grid, int m,
                                   std::vector<std::vector<cplx>> entry_values);

    /// Single-entry separable space-time B-spline bump with a support mask:
    /// q_ij = amp * b((t-ct)/wt) * prod_a b((x_a-cx_a)/wx_a).
    static MatrixPotential bump(int dim, int m, int i, int j, double amp, double center_t,
                                double width_t, const std::array<double, 2>& center_x,
                                const std::array<double, 2>& width_x);

    int dim() const { return m_; }
    Kind kind() const { return kind_; }
    bool is_zero() const { return zero_; }

    cplx eval_entry(int i, int j, double t, const double* x) const;
    /// Fills out[m*m] row-major.
    void eval(double t, const double* x, cplx* out) const;

    /// Conjugate transpose, entrywise: adjoint(q)_{ij} = conj(q_{ji}).
    MatrixPotential adjoint() const;

    /// Scales every entry by a real factor.
    MatrixPotential scaled(double factor) const;

    const std::optional<SupportBox>& support() const { return support_; }
    void set_support(const SupportBox& box) { support_ = box; }

    /// Verifies the support box keeps a margin of at least `layers` node
    /// layers from the parabolic boundary of Q on the given grid.
    bool support_has_margin(const Grid& grid, int layers = 2) const;

  private:
    MatrixPotential() = default;
    int m_ = 0;
    Kind kind_ = Kind::ClosedForm;
    bool zero_ = false;
    std::vector<EntryFn> entries_;  // row-major, ClosedForm
    // GridSampled storage
    std::shared_ptr<const std::vector<std::vector<cplx>>> samples_;
    bool sampled_conjugate_transpose_ = false;
    Grid sample_grid_;
    std::optional<SupportBox> support_;
};

/// Discrete W^{1,inf} norm on the grid: max over entries and nodes of |value|
/// and of one-sided (forward) difference quotients in t and each x axis.
double w1inf_norm(const MatrixPotential& q, const Grid& grid);

/// Entrywise sup of |q| sampled on the grid.
double sup_norm(const MatrixPotential& q, const Grid& grid);

/// Brute-force space-time Fourier transform by trapezoidal quadrature:
/// qhat_ij(zeta) = int_Q exp(-i zeta.(t,x)) q_ij(t,x) dx dt,
/// zeta = (zeta_t, zeta_x1[, zeta_x2]).
cplx fourier_oracle(const MatrixPotential& q, const Grid& grid, int i, int j,
                    const std::array<double, 3>& zeta);

/// q2 - q1 as a closed-form potential (entries evaluated on demand).
MatrixPotential difference(const MatrixPotential& q1, const MatrixPotential& q2);

/// The potential t -> q(T - t, x), used by backward-in-time solves.
MatrixPotential time_reflect(const MatrixPotential& q, double T);

/// Support box of q2 - q1 (union of boxes; zero potentials contribute
/// nothing). Nullopt when a nonzero operand lacks a mask.
std::optional<SupportBox> difference_support(const MatrixPotential& q1,
                                             const MatrixPotential& q2);

}  // namespace mwip
