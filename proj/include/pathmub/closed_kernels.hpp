#pragma once

#include "pathmub/numerics.hpp"

namespace pathmub {

inline constexpr double kDefaultCausticTol = 1e-8;

struct KernelPoint {
    double x;
    double y;
    double t;
    Complex value;
};

/**
 * Free-particle propagator <x,t|y,0> = (2 pi i hbar t / m)^(-1/2) exp(i m (x-y)^2 / (2 hbar t)).
 *
 * The square root is taken as e^{-i pi/4} (2 pi hbar t / m)^{-1/2}, the Fresnel branch whose
 * Wick rotation t -> -i t is the (positive) heat kernel.
 */
Complex free_kernel(double x, double y, double t, const PhysicalUnits& units);

/**
 * Mehler kernel of V = m omega^2 x^2 / 2.
 *
 * Branch: e^{-i pi/4} e^{-i pi/2 floor(omega t / pi)} sqrt(m omega / (2 pi hbar |sin omega t|)),
 * i.e. the principal branch on (0, pi/omega) continued through caustics with the Maslov phase.
 * Throws CausticSingularity when |sin omega t| <= caustic_tol.
 */
Complex harmonic_kernel(double x, double y, double t, double omega, const PhysicalUnits& units,
                        double caustic_tol = kDefaultCausticTol);

/// Exponent of harmonic_kernel, m omega ((x^2+y^2) cos - 2xy) / (2 hbar sin), without the prefactor.
double harmonic_phase(double x, double y, double t, double omega, const PhysicalUnits& units,
                      double caustic_tol = kDefaultCausticTol);

/// Wick rotation of free_kernel: (2 pi hbar t / m)^(-1/2) exp(-m (x-y)^2 / (2 hbar t)).
double heat_kernel(double x, double y, double t, const PhysicalUnits& units);

/**
 * (U(t) v)(x) = v(x - t) on the periodic grid, with t rounded to the nearest multiple
 * of the spacing. A delta at site j lands on site j + k for t = k * spacing.
 */
ComplexGridVector translation_kernel_apply(const ComplexGridVector& v, double t);

/// Number of sites the translation by t moves (rounded, reduced mod n).
std::size_t translation_shift_sites(const GridSpec& grid, double t);

}  // namespace pathmub
