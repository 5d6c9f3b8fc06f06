#include <doctest.h>

#include <cmath>

#include "pathmub/closed_kernels.hpp"

using namespace pathmub;

namespace {

// i hbar dK/dt + hbar^2/(2m) d2K/dx2 - V(x) K, by central differences
Complex schrodinger_residual(const std::function<Complex(double, double)>& K, double x, double t,
                             const PhysicalUnits& u, double V) {
    const double e = 1e-4;
    const Complex dt = (K(x, t + e) - K(x, t - e)) / (2 * e);
    const Complex dxx = (K(x + e, t) - 2.0 * K(x, t) + K(x - e, t)) / (e * e);
    return Complex(0, u.hbar) * dt + u.hbar * u.hbar / (2 * u.mass) * dxx - V * K(x, t);
}

}  // namespace

TEST_CASE("free kernel modulus and phase") {
    const PhysicalUnits u(1.0, 1.0);
    const double t = 0.7;
    const Complex k = free_kernel(1.1, -0.4, t, u);
    CHECK(std::abs(k) == doctest::Approx(1.0 / std::sqrt(2 * kPi * t)));
    const Complex expected = std::exp(Complex(0, -kPi / 4 + 1.5 * 1.5 / (2 * t))) / std::sqrt(2 * kPi * t);
    CHECK(std::abs(k - expected) < 1e-14);
    CHECK_THROWS_AS(free_kernel(0, 0, 0.0, u), Error);
}

TEST_CASE("free kernel solves the Schrodinger equation") {
    const PhysicalUnits u(0.8, 1.7);
    const auto K = [&](double x, double t) { return free_kernel(x, 0.3, t, u); };
    CHECK(std::abs(schrodinger_residual(K, 0.9, 0.6, u, 0.0)) < 1e-5);
}

TEST_CASE("harmonic kernel solves the Schrodinger equation") {
    const PhysicalUnits u(1.0, 1.0);
    const double w = 1.3;
    const auto K = [&](double x, double t) { return harmonic_kernel(x, -0.5, t, w, u); };
    const double x = 0.7;
    CHECK(std::abs(schrodinger_residual(K, x, 0.9, u, 0.5 * w * w * x * x)) < 1e-5);
    // past the first caustic the Maslov branch keeps it a solution
    CHECK(std::abs(schrodinger_residual(K, x, 3.0, u, 0.5 * w * w * x * x)) < 1e-5);
}

TEST_CASE("harmonic kernel tends to the free kernel as omega -> 0") {
    const PhysicalUnits u(1.0, 2.0);
    const Complex a = harmonic_kernel(0.4, 1.2, 0.5, 1e-6, u);
    const Complex b = free_kernel(0.4, 1.2, 0.5, u);
    CHECK(std::abs(a - b) < 1e-9);
}

TEST_CASE("harmonic caustic") {
    const PhysicalUnits u;
    try {
        harmonic_kernel(0.0, 0.0, kPi, 1.0, u);
        FAIL("expected CausticSingularity");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::CausticSingularity);
    }
    CHECK_NOTHROW(harmonic_kernel(0.0, 0.0, kPi - 1e-3, 1.0, u));
}

TEST_CASE("harmonic phase matches the kernel argument") {
    const PhysicalUnits u(1.0, 1.0);
    const double ph = harmonic_phase(0.3, -0.8, 0.4, 2.0, u);
    const Complex k = harmonic_kernel(0.3, -0.8, 0.4, 2.0, u);
    const Complex expected = std::polar(std::abs(k), ph - kPi / 4);
    CHECK(std::abs(k - expected) < 1e-13);
}

TEST_CASE("heat kernel is a normalized Gaussian") {
    const PhysicalUnits u(1.0, 1.0);
    double sum = 0.0;
    const double h = 1e-3;
    for (int i = -10000; i <= 10000; ++i) sum += heat_kernel(i * h, 0.2, 0.3, u) * h;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(heat_kernel(0.2, 0.2, 0.3, u) == doctest::Approx(1.0 / std::sqrt(2 * kPi * 0.3)));
}

TEST_CASE("translation moves a delta forward") {
    const GridSpec g(16, 0.0, 16.0);
    std::vector<Complex> v(16, 0.0);
    v[3] = 1.0;
    const auto out = translation_kernel_apply(ComplexGridVector(g, v), 5.0);
    CHECK(out.values[8] == Complex(1.0, 0.0));
    CHECK(translation_shift_sites(g, 5.2) == 5);
    CHECK(translation_shift_sites(g, 17.0) == 1);
    const auto wrap = translation_kernel_apply(ComplexGridVector(g, v), 14.0);
    CHECK(wrap.values[1] == Complex(1.0, 0.0));
}
