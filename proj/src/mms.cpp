#include "mwip/mms.hpp"

#include <cmath>

namespace mwip {

namespace {

// exact solution components and the matching potential
cplx exact_u(int dim, int c, double t, const double* x) {
    if (dim == 1) return cplx(std::sin(M_PI * x[0]) * std::cos(t), 0);
    if (c == 0) return cplx(std::sin(M_PI * x[0]) * std::sin(M_PI * x[1]) * std::cos(t), 0);
    return cplx(0.5 * std::cos(M_PI * x[0]) * std::cos(M_PI * x[1]) * std::sin(2.0 * t), 0);
}

cplx exact_dt(int dim, int c, double t, const double* x) {
    if (dim == 1) return cplx(-std::sin(M_PI * x[0]) * std::sin(t), 0);
    if (c == 0) return cplx(-std::sin(M_PI * x[0]) * std::sin(M_PI * x[1]) * std::sin(t), 0);
    return cplx(std::cos(M_PI * x[0]) * std::cos(M_PI * x[1]) * std::cos(2.0 * t), 0);
}

// Box u* componentwise
cplx exact_box(int dim, int c, double t, const double* x) {
    if (dim == 1) return (-1.0 + M_PI * M_PI) * exact_u(dim, c, t, x);
    if (c == 0) return (-1.0 + 2.0 * M_PI * M_PI) * exact_u(dim, c, t, x);
    return (-4.0 + 2.0 * M_PI * M_PI) * exact_u(dim, c, t, x);
}

MatrixPotential mms_potential(int dim) {
    if (dim == 1)
        return MatrixPotential::closed_form(
            1, {[](double t, const double* x) { return cplx(1.0 + t + x[0], 0); }});
    return MatrixPotential::closed_form(
        2, {[](double t, const double*) { return cplx(1.0 + t, 0); },
            [](double, const double* x) { return cplx(x[0], 0); },
            [](double t, const double* x) { return cplx(x[1] * t, 0); },
            [](double, const double*) { return cplx(2.0, 0); }});
}

}  // namespace

MmsResult run_manufactured_case(const Grid& grid) {
    const int dim = grid.dim;
    const int m = dim;
    const MatrixPotential q = mms_potential(dim);

    InitialBoundaryData data;
    data.label = "mms";
    data.phi = [dim, m](const double* x, cplx* out) {
        for (int c = 0; c < m; ++c) out[c] = exact_u(dim, c, 0.0, x);
    };
    data.psi = [dim, m](const double* x, cplx* out) {
        for (int c = 0; c < m; ++c) out[c] = exact_dt(dim, c, 0.0, x);
    };
    data.f = [dim, m](double t, const double* x, cplx* out) {
        for (int c = 0; c < m; ++c) out[c] = exact_u(dim, c, t, x);
    };
    SourceFn F = [&grid, dim, m, q](int, double t, std::span<cplx> out) {
        double x[2] = {0, 0};
        std::vector<cplx> qv(static_cast<std::size_t>(m) * m), uv(m);
        for (int node = 0; node < grid.num_nodes(); ++node) {
            grid.node_point(node, x);
            q.eval(t, x, qv.data());
            for (int c = 0; c < m; ++c) uv[c] = exact_u(dim, c, t, x);
            for (int c = 0; c < m; ++c) {
                cplx acc = exact_box(dim, c, t, x);
                for (int j = 0; j < m; ++j) acc += qv[static_cast<std::size_t>(c) * m + j] * uv[j];
                out[static_cast<std::size_t>(node) * m + c] = acc;
            }
        }
    };

    MmsResult r;
    r.nx = grid.nx;
    r.nt = grid.nt;
    double err2 = 0, sol2 = 0, linf = 0;
    double x[2] = {0, 0};
    run_ibvp(grid, q, data, F, [&](int k, std::span<const cplx> lev) {
        const double t = grid.time(k);
        double se = 0, ss = 0;
        for (int node = 0; node < grid.num_nodes(); ++node) {
            grid.node_point(node, x);
            for (int c = 0; c < m; ++c) {
                const cplx ex = exact_u(dim, c, t, x);
                const cplx d = lev[static_cast<std::size_t>(node) * m + c] - ex;
                se += grid.volume_weight(node) * std::norm(d);
                ss += grid.volume_weight(node) * std::norm(ex);
                linf = std::max(linf, std::abs(d));
            }
        }
        err2 += grid.time_weight(k) * se;
        sol2 += grid.time_weight(k) * ss;
    });
    r.err_l2 = std::sqrt(err2);
    r.sol_l2 = std::sqrt(sol2);
    r.err_linf = linf;
    return r;
}

double mms_order(const MmsResult& coarse, const MmsResult& fine) {
    return std::log2(coarse.err_l2 / fine.err_l2);
}

std::vector<InitialBoundaryData> standard_data_presets(int dim, int ncomp) {
    std::vector<InitialBoundaryData> out;

    auto sine = [dim](const double* x) {
        double s = std::sin(M_PI * x[0]);
        if (dim == 2) s *= std::sin(M_PI * x[1]);
        return s;
    };
    auto poly = [dim](const double* x) {
        double s = x[0] * (1 - x[0]);
        if (dim == 2) s *= x[1] * (1 - x[1]);
        return s;
    };
    auto affine = [dim](const double* x) { return x[0] + (dim == 2 ? x[1] : 0.0); };

    InitialBoundaryData p1;
    p1.label = "sine-init";
    p1.phi = [=](const double* x, cplx* o) {
        for (int c = 0; c < ncomp; ++c) o[c] = c == 0 ? cplx(sine(x), 0) : cplx(0, 0);
    };
    out.push_back(p1);

    InitialBoundaryData p2;
    p2.label = "velocity";
    p2.psi = [=](const double* x, cplx* o) {
        for (int c = 0; c < ncomp; ++c) o[c] = cplx(sine(x), 0);
    };
    out.push_back(p2);

    InitialBoundaryData p3;
    p3.label = "boundary-drive";
    p3.f = [=](double t, const double* x, cplx* o) {
        for (int c = 0; c < ncomp; ++c)
            o[c] = c == 0 ? cplx(std::sin(M_PI * t) * (1.0 + affine(x)), 0) : cplx(0, 0);
    };
    out.push_back(p3);

    InitialBoundaryData p4;
    p4.label = "mixed";
    p4.phi = [=](const double* x, cplx* o) {
        for (int c = 0; c < ncomp; ++c) o[c] = cplx(poly(x), 0);
    };
    p4.psi = [=](const double* x, cplx* o) {
        for (int c = 0; c < ncomp; ++c)
            o[c] = c == ncomp - 1 ? cplx(std::cos(M_PI * x[0]), 0) : cplx(0, 0);
    };
    out.push_back(p4);

    InitialBoundaryData p5;
    p5.label = "affine-compatible";
    p5.phi = [=](const double* x, cplx* o) {
        for (int c = 0; c < ncomp; ++c) o[c] = c == 0 ? cplx(affine(x), 0) : cplx(0, 0);
    };
    p5.f = [=](double t, const double* x, cplx* o) {
        for (int c = 0; c < ncomp; ++c)
            o[c] = c == 0 ? cplx(affine(x) * std::cos(t), 0) : cplx(0, 0);
    };
    out.push_back(p5);

    return out;
}

}  // namespace mwip
