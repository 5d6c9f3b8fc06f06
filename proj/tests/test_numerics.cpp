#include <doctest.h>

#include <cmath>

#include "pathmub/numerics.hpp"

using namespace pathmub;

TEST_CASE("grid layout") {
    const GridSpec g(16, -2.0, 2.0);
    CHECK(g.spacing() == doctest::Approx(0.25));
    CHECK(g.x(0) == -2.0);
    CHECK(g.x(15) == doctest::Approx(1.75));
    CHECK(g.nodes().size() == 16);
    CHECK(g.mode_number(0) == 0);
    CHECK(g.mode_number(7) == 7);
    CHECK(g.mode_number(8) == -8);
    CHECK(g.mode_number(15) == -1);
    CHECK(g.nearest_index(1.99) == 0);  // wraps onto x_min
    CHECK(g.nearest_index(0.26) == 9);
    CHECK_THROWS_AS(GridSpec(4, 0.0, 1.0), Error);
    CHECK_THROWS_AS(GridSpec(16, 1.0, 1.0), Error);
}

TEST_CASE("momentum follows 2 pi hbar m / L") {
    const GridSpec g(32, 0.0, 4.0);
    const PhysicalUnits u(2.0, 1.0);
    CHECK(g.momentum(3, u) == doctest::Approx(2.0 * 2.0 * kPi * 3.0 / 4.0));
    CHECK(g.momentum(31, u) == doctest::Approx(-2.0 * 2.0 * kPi / 4.0));
}

TEST_CASE("self-dual grid extent") {
    const PhysicalUnits u(1.0, 0.5);
    const auto g = self_dual_grid(64, 0.3, u);
    CHECK(g.length() * g.length() == doctest::Approx(2.0 * kPi * 0.3 * 64 / 0.5));
    CHECK(g.x_min() == doctest::Approx(-g.x_max()));
    CHECK(self_dual_time(g, u) == doctest::Approx(0.3));
}

TEST_CASE("trapezoid and continuous product") {
    std::vector<double> lin{1.0, 2.0, 3.0, 4.0, 5.0};
    CHECK(trapezoid(lin, 0.0, 4.0) == doctest::Approx(12.0));

    const auto f = SampledFunction::sample([](double t) { return std::exp(std::sin(t)); }, 0.0, 1.0, 1025);
    const double exact = std::exp(1.0 - std::cos(1.0));
    CHECK(std::abs(continuous_product(f, 1024) - exact) < 1e-6);
    // coarser partition over the same samples
    CHECK(std::abs(continuous_product(f, 256) - exact) < 1e-5);
    CHECK_THROWS_AS(continuous_product(f, 1000), Error);

    const auto neg = SampledFunction::sample([](double t) { return t - 0.5; }, 0.0, 1.0, 9);
    try {
        continuous_product(neg, 8);
        FAIL("expected NonPositiveSample");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NonPositiveSample);
    }
}

TEST_CASE("inner product and grids") {
    const GridSpec g(16, 0.0, 1.0);
    const auto v = ComplexGridVector::sample(g, [](double x) { return Complex(std::cos(2 * kPi * x), 0.0); });
    CHECK(norm(v) == doctest::Approx(std::sqrt(0.5)));  // spacing-weighted L2 norm
    const GridSpec h(16, 0.0, 2.0);
    const auto w = ComplexGridVector::sample(h, [](double) { return Complex(1.0, 0.0); });
    try {
        inner_product(v, w);
        FAIL("expected GridMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::GridMismatch);
    }
}

TEST_CASE("fft round trip and delta") {
    Fft fft(8);
    std::vector<Complex> d(8, 0.0);
    d[0] = 1.0;
    fft.forward(d);
    for (auto z : d) CHECK(std::abs(z - Complex(1.0, 0.0)) < 1e-15);
    fft.backward(d);
    CHECK(std::abs(d[0] - Complex(1.0, 0.0)) < 1e-15);
    for (std::size_t i = 1; i < 8; ++i) CHECK(std::abs(d[i]) < 1e-15);

    Fft cube(std::vector<int>{4, 4, 4});
    std::vector<Complex> c(64);
    for (std::size_t i = 0; i < 64; ++i) c[i] = Complex(std::sin(0.3 * i), std::cos(0.7 * i));
    const auto orig = c;
    cube.forward(c);
    cube.backward(c);
    for (std::size_t i = 0; i < 64; ++i) CHECK(std::abs(c[i] - orig[i]) < 1e-13);
}

TEST_CASE("kinetic circulant acts as p^2/2m on plane waves") {
    const GridSpec g(32, -3.0, 3.0);
    const PhysicalUnits u(1.3, 0.7);
    const auto col = kinetic_circulant(g, u);
    const double p = g.momentum(5, u);
    for (std::size_t j : {0u, 7u, 19u}) {
        Complex acc = 0.0;
        for (std::size_t k = 0; k < 32; ++k)
            acc += col[(j + 32 - k) % 32] * std::exp(Complex(0.0, p * g.x(k) / u.hbar));
        const Complex expected = p * p / (2.0 * u.mass) * std::exp(Complex(0.0, p * g.x(j) / u.hbar));
        CHECK(std::abs(acc - expected) < 1e-10);
    }
}

TEST_CASE("momentum multiplier derivative") {
    const GridSpec g(64, 0.0, 2.0 * kPi);
    const auto v = ComplexGridVector::sample(g, [](double x) { return Complex(std::sin(3 * x), 0.0); });
    const auto dv = apply_momentum_function(v, [](double p) { return Complex(0.0, p); }, PhysicalUnits{});
    for (std::size_t j = 0; j < 64; ++j) CHECK(std::abs(dv.values[j] - 3.0 * std::cos(3 * g.x(j))) < 1e-11);
}
