#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "mwip/geometry.hpp"
#include "mwip/potential.hpp"

namespace mwip {

/// Conjugated-representation tag: the physical field is
/// exp(sign * phi/h) * stored values with phi(t,x) = t + x.omega.
struct ConjugatedTag {
    double h = 0;
    std::array<double, 2> omega{1, 0};
    int sign = +1;  // +1 growing weight, -1 decaying weight
};

double phase(const std::array<double, 2>& omega, int dim, double t, const double* x);

/// Vector-valued space-time field on a Grid. Storage is level-major:
/// value(k, node, c) = values[(k*num_nodes + node)*ncomp + c].
class WaveField {
  public:
    WaveField() = default;
    WaveField(const Grid& grid, int ncomp)
        : grid_(grid),
          ncomp_(ncomp),
          values_(static_cast<std::size_t>(grid.num_levels()) * grid.num_nodes() * ncomp) {}

    const Grid& grid() const { return grid_; }
    int ncomp() const { return ncomp_; }

    bool conjugated() const { return tag_.has_value(); }
    const std::optional<ConjugatedTag>& tag() const { return tag_; }
    void set_tag(const ConjugatedTag& t) { tag_ = t; }

    std::span<cplx> level(int k) {
        const std::size_t stride = static_cast<std::size_t>(grid_.num_nodes()) * ncomp_;
        return {values_.data() + k * stride, stride};
    }
    std::span<const cplx> level(int k) const {
        const std::size_t stride = static_cast<std::size_t>(grid_.num_nodes()) * ncomp_;
        return {values_.data() + k * stride, stride};
    }
    cplx at(int k, int node, int c) const {
        return values_[(static_cast<std::size_t>(k) * grid_.num_nodes() + node) * ncomp_ + c];
    }
    cplx& at(int k, int node, int c) {
        return values_[(static_cast<std::size_t>(k) * grid_.num_nodes() + node) * ncomp_ + c];
    }
    std::vector<cplx>& raw() { return values_; }
    const std::vector<cplx>& raw() const { return values_; }

    bool all_finite() const;

    /// Materializes the physical field from a conjugated one. Refuses when
    /// max |phi|/h exceeds `max_exponent` (default 50), where the weight is
    /// no longer representable to any useful accuracy.
    WaveField to_physical(double max_exponent = 50.0) const;

  private:
    Grid grid_;
    int ncomp_ = 0;
    std::optional<ConjugatedTag> tag_;
    std::vector<cplx> values_;
};

// ---- discrete derivative helpers (centered interior, 2nd-order one-sided ends)

/// d/dt of a level-major array at level k, one component.
cplx time_derivative(const WaveField& u, int k, int node, int c);
/// d2/dt2, one-sided second-order at the ends.
cplx time_second_derivative(const WaveField& u, int k, int node, int c);
/// One-sided 2nd-order time derivative of level data vectors a (k), b (k-1), c (k-2)
/// evaluated at the newest level: (3a - 4b + c) / (2 dt).
void one_sided_time_derivative(std::span<const cplx> newest, std::span<const cplx> mid,
                               std::span<const cplx> oldest, double dt, std::span<cplx> out);

/// Spatial gradient component d/dx_axis at a node of one time-level span.
cplx spatial_derivative(const Grid& grid, std::span<const cplx> level, int ncomp, int node, int c,
                        int axis);
/// 5-point (2-D) / 3-point (1-D) Laplacian at an interior node.
cplx laplacian(const Grid& grid, std::span<const cplx> level, int ncomp, int node, int c);

/// Outward normal derivative at a surface-quadrature entry, second-order
/// one-sided along the entry's face axis.
cplx neumann_at_entry(const Grid& grid, std::span<const cplx> level, int ncomp,
                      const SurfaceEntry& e, int c);

// ---- quadrature over fields

/// L2(Q) norm with trapezoidal weights.
double l2_q(const WaveField& u);
/// L2(Omega) norm of one level.
double l2_omega(const Grid& grid, std::span<const cplx> level);
/// H1(Q) norm: L2 of values, time derivative and spatial gradient.
double h1_q(const WaveField& u);
/// L2(Sigma) norm of the outward normal trace over the full lateral boundary.
double neumann_l2_sigma(const WaveField& u, const SurfaceQuad& sq);

}  // namespace mwip
