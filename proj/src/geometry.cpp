#include "mwip/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace mwip {

int min_valid_nt(int dim, int nx, double T, double cfl_factor) {
    const double dx = 1.0 / (nx - 1);
    const double dt_max = cfl_factor * dx / std::sqrt(static_cast<double>(dim));
    return std::max(8, static_cast<int>(std::ceil(T / dt_max - 1e-12)));
}

Grid build_grid(int dim, int nx, int nt, double T, double cfl_factor) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("grid: dim must be 1 or 2");
    if (nx < 8) throw std::invalid_argument("grid: nx must be >= 8");
    if (nt < 8) throw std::invalid_argument("grid: nt must be >= 8");
    if (!(T > 0)) throw std::invalid_argument("grid: T must be positive");
    if (!(cfl_factor > 0) || cfl_factor > 0.9)
        throw std::invalid_argument("grid: cfl_factor must lie in (0, 0.9]");

    Grid g;
    g.dim = dim;
    g.nx = nx;
    g.nt = nt;
    g.T = T;
    g.dx = 1.0 / (nx - 1);
    g.dt = T / nt;
    g.cfl_factor = cfl_factor;

    const double dt_max = cfl_factor * g.dx / std::sqrt(static_cast<double>(dim));
    if (g.dt > dt_max * (1 + 1e-12)) {
        throw std::invalid_argument("grid: CFL violation, dt = " + std::to_string(g.dt) +
                                    " exceeds " + std::to_string(dt_max) +
                                    "; need nt >= " + std::to_string(min_valid_nt(dim, nx, T, cfl_factor)));
    }
    return g;
}

std::array<double, 2> outward_normal(const Grid& grid, int node) {
    if (!grid.on_boundary(node)) throw std::invalid_argument("outward_normal: interior node");
    auto m = grid.node_multi(node);
    // lowest axis wins at corners
    if (m[0] == 0) return {-1, 0};
    if (m[0] == grid.nx - 1) return {1, 0};
    if (m[1] == 0) return {0, -1};
    return {0, 1};
}

SurfaceQuad build_surface_quad(const Grid& grid) {
    SurfaceQuad q;
    if (grid.dim == 1) {
        q.entries.push_back({grid.node_index(0), 0, 0, 1.0, {-1, 0}});
        q.entries.push_back({grid.node_index(grid.nx - 1), 0, 1, 1.0, {1, 0}});
        return q;
    }
    const int n = grid.nx;
    for (int side = 0; side < 2; ++side) {
        const int ix = side == 0 ? 0 : n - 1;
        for (int iy = 0; iy < n; ++iy) {
            q.entries.push_back({grid.node_index(ix, iy), 0, side, grid.axis_weight(iy),
                                 {side == 0 ? -1.0 : 1.0, 0.0}});
        }
    }
    for (int side = 0; side < 2; ++side) {
        const int iy = side == 0 ? 0 : n - 1;
        for (int ix = 0; ix < n; ++ix) {
            q.entries.push_back({grid.node_index(ix, iy), 1, side, grid.axis_weight(ix),
                                 {0.0, side == 0 ? -1.0 : 1.0}});
        }
    }
    return q;
}

double SurfaceQuad::area() const {
    double a = 0;
    for (const auto& e : entries) a += e.weight;
    return a;
}

namespace {

// all face normals a boundary node participates in
std::vector<std::array<double, 2>> face_normals(const Grid& grid, int node) {
    std::vector<std::array<double, 2>> out;
    auto m = grid.node_multi(node);
    if (m[0] == 0) out.push_back({-1, 0});
    if (m[0] == grid.nx - 1) out.push_back({1, 0});
    if (grid.dim == 2 && m[1] == 0) out.push_back({0, -1});
    if (grid.dim == 2 && m[1] == grid.nx - 1) out.push_back({0, 1});
    return out;
}

std::vector<std::uint8_t> dilate_on_boundary(const Grid& grid, std::vector<std::uint8_t> mask,
                                             int layers) {
    for (int pass = 0; pass < layers; ++pass) {
        std::vector<std::uint8_t> next = mask;
        for (int node = 0; node < grid.num_nodes(); ++node) {
            if (!grid.on_boundary(node) || mask[node]) continue;
            auto m = grid.node_multi(node);
            const int step[2] = {1, grid.nx};
            for (int a = 0; a < grid.dim; ++a) {
                for (int s = -1; s <= 1; s += 2) {
                    const int ia = (a == 0 ? m[0] : m[1]) + s;
                    if (ia < 0 || ia >= grid.nx) continue;
                    const int nb = node + s * step[a];
                    if (grid.on_boundary(nb) && mask[nb]) next[node] = 1;
                }
            }
        }
        mask = std::move(next);
    }
    return mask;
}

}  // namespace

BoundaryPartition boundary_partition(const Grid& grid, const std::array<double, 2>& omega0,
                                     double epsilon, int dilation) {
    double norm2 = omega0[0] * omega0[0] + (grid.dim == 2 ? omega0[1] * omega0[1] : 0.0);
    if (std::abs(std::sqrt(norm2) - 1.0) > 1e-12)
        throw std::invalid_argument("boundary_partition: omega0 must be a unit vector");
    if (epsilon < 0) throw std::invalid_argument("boundary_partition: epsilon must be >= 0");

    BoundaryPartition p;
    p.omega0 = omega0;
    p.epsilon = epsilon;
    p.dilation = dilation;
    const int nn = grid.num_nodes();
    p.plus_mask.assign(nn, 0);
    p.minus_mask.assign(nn, 0);

    for (int node = 0; node < nn; ++node) {
        if (!grid.on_boundary(node)) continue;
        p.boundary_nodes.push_back(node);
        for (const auto& nu : face_normals(grid, node)) {
            const double d = nu[0] * omega0[0] + nu[1] * omega0[1];
            if (d >= 0) p.plus_mask[node] = 1;
            if (d <= 0) p.minus_mask[node] = 1;
        }
    }

    p.g_prime = dilate_on_boundary(grid, p.minus_mask, dilation);
    p.f_prime = dilate_on_boundary(grid, p.plus_mask, dilation);

    // every face a non-G' node lies on must satisfy nu . omega > epsilon for
    // all omega with |omega - omega0| <= epsilon
    for (int node : p.boundary_nodes) {
        if (p.g_prime[node]) continue;
        for (const auto& nu : face_normals(grid, node)) {
            const double worst = nu[0] * omega0[0] + nu[1] * omega0[1] - epsilon;
            if (worst <= epsilon)
                throw std::invalid_argument(
                    "boundary_partition: epsilon too large, Sigma\\G escapes the "
                    "admissible cone at a boundary node");
        }
    }
    return p;
}

}  // namespace mwip
