#include "pathmub/closed_kernels.hpp"

#include <cmath>
#include <sstream>

namespace pathmub {

namespace {

const Complex kMinusQuarterTurn = std::polar(1.0, -0.25 * kPi);

void require_positive_time(double t) {
    if (!(t > 0.0)) {
        std::ostringstream os;
        os << "kernel needs t > 0, got " << t;
        fail(Errc::NonPositiveTime, os.str());
    }
}

double checked_sine(double t, double omega, double caustic_tol) {
    require_positive_time(t);
    require(omega > 0.0, Errc::InvalidArgument, "harmonic kernel needs omega > 0");
    const double s = std::sin(omega * t);
    if (std::abs(s) <= caustic_tol) {
        std::ostringstream os;
        os << "|sin(omega t)| = " << std::abs(s) << " at omega t = " << omega * t;
        fail(Errc::CausticSingularity, os.str());
    }
    return s;
}

}  // namespace

Complex free_kernel(double x, double y, double t, const PhysicalUnits& units) {
    require_positive_time(t);
    const double d = x - y;
    const double modulus = 1.0 / std::sqrt(2.0 * kPi * units.hbar * t / units.mass);
    const double phase = units.mass * d * d / (2.0 * units.hbar * t);
    return kMinusQuarterTurn * std::polar(modulus, phase);
}

double harmonic_phase(double x, double y, double t, double omega, const PhysicalUnits& units,
                      double caustic_tol) {
    const double s = checked_sine(t, omega, caustic_tol);
    const double c = std::cos(omega * t);
    return units.mass * omega / (2.0 * units.hbar * s) * ((x * x + y * y) * c - 2.0 * x * y);
}

Complex harmonic_kernel(double x, double y, double t, double omega, const PhysicalUnits& units,
                        double caustic_tol) {
    const double s = checked_sine(t, omega, caustic_tol);
    const double modulus = std::sqrt(units.mass * omega / (2.0 * kPi * units.hbar * std::abs(s)));
    const double caustics_passed = std::floor(omega * t / kPi);
    const Complex maslov = std::polar(1.0, -0.5 * kPi * caustics_passed);
    const double phase = harmonic_phase(x, y, t, omega, units, caustic_tol);
    return kMinusQuarterTurn * maslov * std::polar(modulus, phase);
}

double heat_kernel(double x, double y, double t, const PhysicalUnits& units) {
    require_positive_time(t);
    const double d = x - y;
    return std::exp(-units.mass * d * d / (2.0 * units.hbar * t)) /
           std::sqrt(2.0 * kPi * units.hbar * t / units.mass);
}

std::size_t translation_shift_sites(const GridSpec& grid, double t) {
    const auto n = static_cast<long long>(grid.size());
    long long k = std::llround(t / grid.spacing()) % n;
    if (k < 0) k += n;
    return static_cast<std::size_t>(k);
}

ComplexGridVector translation_kernel_apply(const ComplexGridVector& v, double t) {
    const std::size_t n = v.grid.size();
    const std::size_t k = translation_shift_sites(v.grid, t);
    std::vector<Complex> out(n);
    for (std::size_t j = 0; j < n; ++j) out[(j + k) % n] = v.values[j];
    return ComplexGridVector(v.grid, std::move(out));
}

}  // namespace pathmub
