#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace mwip {

/// Space-time discretization of Q = (0,T) x Omega, Omega = (0,1)^dim.
///
/// dt is always derived from nt (dt = T/nt) and must satisfy the explicit
/// stability bound dt <= cfl_factor * dx / sqrt(dim).
struct Grid {
    int dim = 1;   // spatial dimension, 1 or 2
    int nx = 0;    // nodes per spatial axis, spacing dx = 1/(nx-1)
    int nt = 0;    // time steps; levels 0..nt
    double T = 0;
    double dx = 0;
    double dt = 0;
    double cfl_factor = 0.9;

    int num_nodes() const { return dim == 1 ? nx : nx * nx; }
    int num_levels() const { return nt + 1; }

    int node_index(int ix, int iy = 0) const { return dim == 1 ? ix : ix + nx * iy; }
    std::array<int, 2> node_multi(int node) const {
        return dim == 1 ? std::array<int, 2>{node, 0} : std::array<int, 2>{node % nx, node / nx};
    }
    double coord(int i) const { return i * dx; }
    void node_point(int node, double* x) const {
        auto m = node_multi(node);
        x[0] = coord(m[0]);
        if (dim == 2) x[1] = coord(m[1]);
    }
    double time(int k) const { return k * dt; }

    bool on_boundary(int node) const {
        auto m = node_multi(node);
        if (m[0] == 0 || m[0] == nx - 1) return true;
        return dim == 2 && (m[1] == 0 || m[1] == nx - 1);
    }

    /// Trapezoidal weight along one axis (includes the dx factor).
    double axis_weight(int i) const { return (i == 0 || i == nx - 1) ? 0.5 * dx : dx; }
    double volume_weight(int node) const {
        auto m = node_multi(node);
        double w = axis_weight(m[0]);
        if (dim == 2) w *= axis_weight(m[1]);
        return w;
    }
    double time_weight(int k) const { return (k == 0 || k == nt) ? 0.5 * dt : dt; }
};

/// Smallest nt accepted by build_grid for the given spatial resolution.
int min_valid_nt(int dim, int nx, double T, double cfl_factor = 0.9);

/// Builds the grid, rejecting CFL violations with the required minimum nt.
Grid build_grid(int dim, int nx, int nt, double T, double cfl_factor = 0.9);

/// Outward unit normal of the face a boundary node is assigned to.
/// Corner nodes resolve to the lowest-axis face (lexicographic tie-break).
std::array<double, 2> outward_normal(const Grid& grid, int node);

/// One node of the lateral-boundary quadrature. Nodes shared by several
/// faces (corners) appear once per face, each with that face's normal and
/// the face-local trapezoidal weight.
struct SurfaceEntry {
    int node = 0;
    int axis = 0;  // face axis: the coordinate frozen at 0 or 1
    int side = 0;  // 0 -> x_axis = 0 face, 1 -> x_axis = 1 face
    double weight = 0;
    std::array<double, 2> normal{0, 0};
};

struct SurfaceQuad {
    std::vector<SurfaceEntry> entries;
    double area() const;  // sum of weights, equals |dOmega|
};

SurfaceQuad build_surface_quad(const Grid& grid);

/// Boundary classification for a probing direction omega0.
///
/// plus/minus sets use face membership: a node belongs to the +/- set if any
/// of its faces has nu . omega0 >= 0 (resp. <= 0), so the two sets cover the
/// boundary and overlap exactly where a face normal is orthogonal to omega0.
/// g_prime (and f_prime) are the -/+ sets dilated along the boundary lattice.
struct BoundaryPartition {
    std::array<double, 2> omega0{1, 0};
    double epsilon = 0.05;
    int dilation = 1;

    std::vector<int> boundary_nodes;
    // indexed by flat node id; meaningful on boundary nodes only
    std::vector<std::uint8_t> plus_mask, minus_mask, f_prime, g_prime;

    bool in_g(int node) const { return g_prime[node] != 0; }
    bool in_f(int node) const { return f_prime[node] != 0; }
};

/// Classifies the boundary. Rejects |omega0| != 1 and epsilon values so large
/// that some node outside G' could fail nu . omega > epsilon for an
/// admissible omega (|omega - omega0| <= epsilon).
BoundaryPartition boundary_partition(const Grid& grid, const std::array<double, 2>& omega0,
                                     double epsilon, int dilation = 1);

}  // namespace mwip
