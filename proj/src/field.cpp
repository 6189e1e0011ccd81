#include "mwip/field.hpp"

#include <cmath>
#include <stdexcept>

namespace mwip {

double phase(const std::array<double, 2>& omega, int dim, double t, const double* x) {
    return t + omega[0] * x[0] + (dim == 2 ? omega[1] * x[1] : 0.0);
}

bool WaveField::all_finite() const {
    for (const cplx& v : values_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

WaveField WaveField::to_physical(double max_exponent) const {
    if (!tag_) return *this;
    const ConjugatedTag t = *tag_;
    // worst-case |phi|/h over the closure of Q
    double phi_max = grid_.T;
    for (int a = 0; a < grid_.dim; ++a) phi_max += std::abs(t.omega[a]);
    if (phi_max / t.h > max_exponent)
        throw std::runtime_error("to_physical: conjugation weight exceeds representable range");
    WaveField out(grid_, ncomp_);
    double x[2] = {0, 0};
    for (int k = 0; k <= grid_.nt; ++k) {
        for (int node = 0; node < grid_.num_nodes(); ++node) {
            grid_.node_point(node, x);
            const double w = std::exp(t.sign * phase(t.omega, grid_.dim, grid_.time(k), x) / t.h);
            for (int c = 0; c < ncomp_; ++c) out.at(k, node, c) = w * at(k, node, c);
        }
    }
    return out;
}

cplx time_derivative(const WaveField& u, int k, int node, int c) {
    const double dt = u.grid().dt;
    const int nt = u.grid().nt;
    if (k == 0) return (-3.0 * u.at(0, node, c) + 4.0 * u.at(1, node, c) - u.at(2, node, c)) / (2 * dt);
    if (k == nt)
        return (3.0 * u.at(nt, node, c) - 4.0 * u.at(nt - 1, node, c) + u.at(nt - 2, node, c)) / (2 * dt);
    return (u.at(k + 1, node, c) - u.at(k - 1, node, c)) / (2 * dt);
}

cplx time_second_derivative(const WaveField& u, int k, int node, int c) {
    const double dt2 = u.grid().dt * u.grid().dt;
    const int nt = u.grid().nt;
    if (k == 0)
        return (2.0 * u.at(0, node, c) - 5.0 * u.at(1, node, c) + 4.0 * u.at(2, node, c) -
                u.at(3, node, c)) / dt2;
    if (k == nt)
        return (2.0 * u.at(nt, node, c) - 5.0 * u.at(nt - 1, node, c) + 4.0 * u.at(nt - 2, node, c) -
                u.at(nt - 3, node, c)) / dt2;
    return (u.at(k + 1, node, c) - 2.0 * u.at(k, node, c) + u.at(k - 1, node, c)) / dt2;
}

void one_sided_time_derivative(std::span<const cplx> newest, std::span<const cplx> mid,
                               std::span<const cplx> oldest, double dt, std::span<cplx> out) {
    for (std::size_t i = 0; i < newest.size(); ++i)
        out[i] = (3.0 * newest[i] - 4.0 * mid[i] + oldest[i]) / (2 * dt);
}

cplx spatial_derivative(const Grid& grid, std::span<const cplx> level, int ncomp, int node, int c,
                        int axis) {
    const auto m = grid.node_multi(node);
    const int i = axis == 0 ? m[0] : m[1];
    const int step = (axis == 0 ? 1 : grid.nx) * ncomp;
    const std::size_t base = static_cast<std::size_t>(node) * ncomp + c;
    const double d2 = 2 * grid.dx;
    if (i == 0) return (-3.0 * level[base] + 4.0 * level[base + step] - level[base + 2 * step]) / d2;
    if (i == grid.nx - 1)
        return (3.0 * level[base] - 4.0 * level[base - step] + level[base - 2 * step]) / d2;
    return (level[base + step] - level[base - step]) / d2;
}

cplx laplacian(const Grid& grid, std::span<const cplx> level, int ncomp, int node, int c) {
    const std::size_t base = static_cast<std::size_t>(node) * ncomp + c;
    const double inv = 1.0 / (grid.dx * grid.dx);
    cplx acc = (level[base + ncomp] - 2.0 * level[base] + level[base - ncomp]) * inv;
    if (grid.dim == 2) {
        const int step = grid.nx * ncomp;
        acc += (level[base + step] - 2.0 * level[base] + level[base - step]) * inv;
    }
    return acc;
}

cplx neumann_at_entry(const Grid& grid, std::span<const cplx> level, int ncomp,
                      const SurfaceEntry& e, int c) {
    const int step = (e.axis == 0 ? 1 : grid.nx) * ncomp;
    const std::size_t base = static_cast<std::size_t>(e.node) * ncomp + c;
    const double d2 = 2 * grid.dx;
    if (e.side == 0)  // inward is +axis, outward normal flips the sign
        return -(-3.0 * level[base] + 4.0 * level[base + step] - level[base + 2 * step]) / d2;
    return (3.0 * level[base] - 4.0 * level[base - step] + level[base - 2 * step]) / d2;
}

double l2_q(const WaveField& u) {
    const Grid& g = u.grid();
    double acc = 0;
    for (int k = 0; k <= g.nt; ++k) {
        const auto lev = u.level(k);
        double s = 0;
        for (int node = 0; node < g.num_nodes(); ++node) {
            double nn = 0;
            for (int c = 0; c < u.ncomp(); ++c) nn += std::norm(lev[static_cast<std::size_t>(node) * u.ncomp() + c]);
            s += g.volume_weight(node) * nn;
        }
        acc += g.time_weight(k) * s;
    }
    return std::sqrt(acc);
}

double l2_omega(const Grid& grid, std::span<const cplx> level) {
    const int ncomp = static_cast<int>(level.size()) / grid.num_nodes();
    double s = 0;
    for (int node = 0; node < grid.num_nodes(); ++node) {
        double nn = 0;
        for (int c = 0; c < ncomp; ++c) nn += std::norm(level[static_cast<std::size_t>(node) * ncomp + c]);
        s += grid.volume_weight(node) * nn;
    }
    return std::sqrt(s);
}

double h1_q(const WaveField& u) {
    const Grid& g = u.grid();
    double acc = 0;
    for (int k = 0; k <= g.nt; ++k) {
        const auto lev = u.level(k);
        double s = 0;
        for (int node = 0; node < g.num_nodes(); ++node) {
            double nn = 0;
            for (int c = 0; c < u.ncomp(); ++c) {
                nn += std::norm(lev[static_cast<std::size_t>(node) * u.ncomp() + c]);
                nn += std::norm(time_derivative(u, k, node, c));
                for (int a = 0; a < g.dim; ++a)
                    nn += std::norm(spatial_derivative(g, lev, u.ncomp(), node, c, a));
            }
            s += g.volume_weight(node) * nn;
        }
        acc += g.time_weight(k) * s;
    }
    return std::sqrt(acc);
}

double neumann_l2_sigma(const WaveField& u, const SurfaceQuad& sq) {
    const Grid& g = u.grid();
    double acc = 0;
    for (int k = 0; k <= g.nt; ++k) {
        const auto lev = u.level(k);
        double s = 0;
        for (const auto& e : sq.entries) {
            double nn = 0;
            for (int c = 0; c < u.ncomp(); ++c)
                nn += std::norm(neumann_at_entry(g, lev, u.ncomp(), e, c));
            s += e.weight * nn;
        }
        acc += g.time_weight(k) * s;
    }
    return std::sqrt(acc);
}

}  // namespace mwip
