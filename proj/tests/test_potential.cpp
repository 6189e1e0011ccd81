#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mwip/potential.hpp"

using namespace mwip;
using namespace std::complex_literals;

namespace {

// independent 1-D trapezoidal quadrature for the separable-bump cross-check
cplx trap_1d(double a, double b, int n, const std::function<cplx(double)>& f) {
    const double h = (b - a) / (n - 1);
    cplx acc = 0.5 * (f(a) + f(b));
    for (int i = 1; i < n - 1; ++i) acc += f(a + i * h);
    return acc * h;
}

}  // namespace

TEST_CASE("eval basics") {
    const Grid g = build_grid(2, 17, 96, 2.0);
    const MatrixPotential z = MatrixPotential::zero(2);
    double x[2] = {0.3, 0.7};
    CHECK(z.eval_entry(0, 1, 0.5, x) == cplx(0, 0));

    const MatrixPotential id = MatrixPotential::constant(2, {1.0 + 0i, 0i, 0i, 1.0 + 0i});
    CHECK(id.eval_entry(0, 0, 1.0, x) == cplx(1, 0));
    CHECK(id.eval_entry(0, 1, 1.0, x) == cplx(0, 0));

    // q12 = t*x1, rest zero, at t=2, x=(0.5, 0)
    const MatrixPotential q = MatrixPotential::closed_form(
        2, {nullptr, [](double t, const double* p) { return cplx(t * p[0], 0); }, nullptr,
            nullptr});
    double y[2] = {0.5, 0.0};
    CHECK(q.eval_entry(0, 1, 2.0, y) == cplx(1.0, 0));
    (void)g;
}

TEST_CASE("sampled potentials refuse off-grid queries") {
    const Grid g = build_grid(1, 8, 16, 2.0);
    std::vector<std::vector<cplx>> vals(1);
    vals[0].resize(static_cast<std::size_t>(g.num_levels()) * g.num_nodes());
    for (int k = 0; k <= g.nt; ++k)
        for (int n = 0; n < g.num_nodes(); ++n)
            vals[0][static_cast<std::size_t>(k) * g.num_nodes() + n] = cplx(k + 0.1 * n, 0);
    const MatrixPotential q = MatrixPotential::sampled(g, 1, vals);
    double x[2] = {g.coord(3), 0};
    CHECK(q.eval_entry(0, 0, g.time(2), x) == cplx(2.3, 0));
    double bad[2] = {g.coord(3) + 0.3 * g.dx, 0};
    CHECK_THROWS_AS(q.eval_entry(0, 0, g.time(2), bad), std::invalid_argument);
    CHECK_THROWS_AS(q.eval_entry(0, 0, 0.37 * g.dt, x), std::invalid_argument);
}

TEST_CASE("adjoint conjugate-transposes entrywise") {
    double x[2] = {0.25, 0.5};
    const MatrixPotential sym = MatrixPotential::constant(2, {1.0 + 0i, 2.0 + 0i, 2.0 + 0i, 3.0 + 0i});
    const MatrixPotential syma = sym.adjoint();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(syma.eval_entry(i, j, 0.5, x) == sym.eval_entry(i, j, 0.5, x));

    const MatrixPotential qi = MatrixPotential::constant(2, {0i, 1i, 0i, 0i});
    const MatrixPotential qia = qi.adjoint();
    CHECK(qia.eval_entry(1, 0, 0.5, x) == cplx(0, -1));
    CHECK(qia.eval_entry(0, 1, 0.5, x) == cplx(0, 0));

    // involution, including on sampled storage
    const Grid g = build_grid(1, 8, 16, 2.0);
    std::vector<std::vector<cplx>> vals(1);
    vals[0].assign(static_cast<std::size_t>(g.num_levels()) * g.num_nodes(), cplx(1, 2));
    const MatrixPotential qs = MatrixPotential::sampled(g, 1, vals);
    double y[2] = {g.coord(2), 0};
    CHECK(qs.adjoint().adjoint().eval_entry(0, 0, g.time(1), y) ==
          qs.eval_entry(0, 0, g.time(1), y));
    CHECK(qs.adjoint().eval_entry(0, 0, g.time(1), y) == std::conj(cplx(1, 2)));
}

TEST_CASE("w1inf norm") {
    const Grid g = build_grid(1, 101, 400, 2.0);
    CHECK(w1inf_norm(MatrixPotential::zero(1), g) == 0.0);

    const MatrixPotential c3 = MatrixPotential::constant(1, {3.0 + 0i});
    CHECK(w1inf_norm(c3, g) == doctest::Approx(3.0));

    const MatrixPotential s = MatrixPotential::closed_form(
        1, {[](double, const double* x) { return cplx(std::sin(2 * M_PI * x[0]), 0); }});
    CHECK(w1inf_norm(s, g) == doctest::Approx(2 * M_PI).epsilon(0.05));
}

TEST_CASE("adjoint preserves the sup part of the norm") {
    const Grid g = build_grid(2, 17, 96, 2.0);
    const MatrixPotential q = MatrixPotential::constant(2, {1.0 + 2i, 0.5 + 0i, 3i, 2.0 + 0i});
    CHECK(sup_norm(q, g) == doctest::Approx(sup_norm(q.adjoint(), g)).epsilon(1e-14));
}

TEST_CASE("fourier oracle basics") {
    const Grid g = build_grid(2, 33, 128, 2.0);
    const MatrixPotential z = MatrixPotential::zero(2);
    CHECK(std::abs(fourier_oracle(z, g, 0, 1, {1.0, 2.0, 3.0})) == 0.0);

    // zeta = 0 is the plain integral: constant 1 integrates to |Q| = T
    const MatrixPotential one = MatrixPotential::constant(1, {1.0 + 0i});
    const Grid g1 = build_grid(1, 33, 96, 2.0);
    CHECK(fourier_oracle(one, g1, 0, 0, {0, 0, 0}).real() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("separable bump agrees with a product of 1-D quadratures") {
    const Grid g = build_grid(2, 33, 128, 2.0);
    const MatrixPotential q =
        MatrixPotential::bump(2, 2, 0, 1, 1.0, 1.0, 0.5, {0.5, 0.5}, {0.25, 0.25});
    const std::array<double, 3> zeta{1.3, -2.0, 0.7};
    const cplx got = fourier_oracle(q, g, 0, 1, zeta);

    auto b = [](double c, double w, double s) { return bspline_bump((s - c) / w); };
    const cplx ft = trap_1d(0, g.T, g.num_levels(), [&](double t) {
        return std::polar(1.0, -zeta[0] * t) * b(1.0, 0.5, t);
    });
    const cplx fx = trap_1d(0, 1, g.nx, [&](double x) {
        return std::polar(1.0, -zeta[1] * x) * b(0.5, 0.25, x);
    });
    const cplx fy = trap_1d(0, 1, g.nx, [&](double y) {
        return std::polar(1.0, -zeta[2] * y) * b(0.5, 0.25, y);
    });
    CHECK(std::abs(got - ft * fx * fy) < 1e-10);
}

TEST_CASE("oracle symmetry and linearity for real potentials") {
    const Grid g = build_grid(2, 17, 96, 2.0);
    const MatrixPotential q =
        MatrixPotential::bump(2, 2, 1, 0, 2.0, 1.0, 0.5, {0.4, 0.6}, {0.3, 0.25});
    const std::array<double, 3> zeta{0.9, 1.7, -1.1};
    const std::array<double, 3> neg{-0.9, -1.7, 1.1};
    CHECK(std::abs(fourier_oracle(q, g, 1, 0, neg) - std::conj(fourier_oracle(q, g, 1, 0, zeta))) <
          1e-12);

    const MatrixPotential q2 = q.scaled(2.5);
    CHECK(std::abs(fourier_oracle(q2, g, 1, 0, zeta) - 2.5 * fourier_oracle(q, g, 1, 0, zeta)) <
          1e-12);
}

TEST_CASE("oracle refinement convergence for a smooth entry") {
    // smooth but not endpoint-flat, so the trapezoid error is genuinely O(dx^2)
    auto make = [] {
        return MatrixPotential::closed_form(
            1, {[](double t, const double* x) { return cplx(x[0] * x[0] + 0.5 * t, 0); }});
    };
    const std::array<double, 3> zeta{1.0, 2.0, 0.0};
    const Grid ga = build_grid(1, 33, 80, 2.0);
    const Grid gb = build_grid(1, 65, 160, 2.0);
    const Grid gc = build_grid(1, 129, 320, 2.0);
    const cplx a = fourier_oracle(make(), ga, 0, 0, zeta);
    const cplx bqs = fourier_oracle(make(), gb, 0, 0, zeta);
    const cplx c = fourier_oracle(make(), gc, 0, 0, zeta);
    const double e1 = std::abs(a - bqs), e2 = std::abs(bqs - c);
    if (e1 > 1e-13) CHECK(e1 / e2 >= 3.0);
}

TEST_CASE("support boxes and margins") {
    const Grid g = build_grid(2, 33, 128, 2.0);
    const MatrixPotential q =
        MatrixPotential::bump(2, 2, 0, 0, 1.0, 1.0, 0.5, {0.5, 0.5}, {0.25, 0.25});
    CHECK(q.support_has_margin(g, 2));
    const MatrixPotential wide =
        MatrixPotential::bump(2, 2, 0, 0, 1.0, 1.0, 1.0, {0.5, 0.5}, {0.5, 0.5});
    CHECK(!wide.support_has_margin(g, 2));

    CHECK(difference_support(MatrixPotential::zero(2), q).has_value());
    CHECK(!difference_support(MatrixPotential::constant(2, {1.0 + 0i, 0i, 0i, 1.0 + 0i}), q)
               .has_value());
}

TEST_CASE("time reflection") {
    const Grid g = build_grid(1, 33, 80, 2.0);
    const MatrixPotential q = MatrixPotential::closed_form(
        1, {[](double t, const double* x) { return cplx(t * t + x[0], 0); }});
    const MatrixPotential r = time_reflect(q, g.T);
    double x[2] = {g.coord(7), 0};
    for (int k = 0; k <= g.nt; ++k)
        CHECK(r.eval_entry(0, 0, g.time(k), x).real() ==
              doctest::Approx(std::pow(g.T - g.time(k), 2) + x[0]).epsilon(1e-14));
}
