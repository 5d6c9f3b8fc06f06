#pragma once

#include <string>
#include <vector>

#include "pathmub/potential.hpp"
#include "pathmub/trotter.hpp"

namespace pathmub {

inline constexpr double kDefaultWindow = 0.5;
inline constexpr double kKernelUnitarityTol = 1e-8;

struct DeficitPoint {
    double t;
    double deficit;
};

struct DeficitCurve {
    std::string potential;
    double window;
    std::vector<DeficitPoint> points;

    /// Each step may exceed the previous value by at most `slack` times that value.
    bool nonincreasing_with_slack(double slack) const;
};

/// Rows `t,deficit,window,potential` with a header row; numbers in %.16e.
std::string deficit_curve_csv(const DeficitCurve& curve);

/// Index range [first, first + size) of the centered window covering `window` of n points.
struct WindowRange {
    std::size_t first;
    std::size_t size;
};
WindowRange central_window(std::size_t n, double window);

/**
 * Flatness of the moduli of K on the central window x window block, after rescaling the
 * block so its mean squared modulus is 1/M_w: max | M_w |entry|^2 - 1 |.
 * Zero iff the block moduli are exactly flat. NonUnitaryKernel if K is not unitary.
 */
double kernel_flatness_deficit(const KernelMatrix& K, double window = kDefaultWindow,
                               double unitarity_tol = kKernelUnitarityTol);

/// Dense permutation matrix of translation_kernel_apply.
KernelMatrix translation_kernel_matrix(const GridSpec& grid, double t);

/// Deficit of the oracle kernel at each t (descending), one eigendecomposition total.
DeficitCurve asymptotic_mub_sweep(const PotentialSpec& V, const GridSpec& grid,
                                  const std::vector<double>& t_list, const PhysicalUnits& units,
                                  double window = kDefaultWindow);

/**
 * Same sweep, but each t uses self_dual_grid(n_points, t): the box shrinks like sqrt(t),
 * the free kernel is exactly flat at every t and only the potential can bias the bases.
 */
DeficitCurve adapted_mub_sweep(const PotentialSpec& V, std::size_t n_points,
                               const std::vector<double>& t_list, const PhysicalUnits& units,
                               double window = kDefaultWindow);

DeficitCurve translation_deficit_curve(const GridSpec& grid, const std::vector<double>& t_list,
                                       double window = kDefaultWindow);

struct ScalingCheck {
    Complex lhs;
    Complex rhs;
    double rel_error;
};

/**
 * K_V(x, y, t) against t^{-1/2} K_{V_t}(x/sqrt t, y/sqrt t, 1), V_t(x) = t V(sqrt(t) x).
 * The left side uses the oracle on `grid`, the right side the oracle on `grid` scaled by
 * 1/sqrt(t); both are read off by band-limited interpolation.
 */
ScalingCheck scaling_check(const PotentialSpec& V, double x, double y, double t,
                           const PhysicalUnits& units, const GridSpec& grid);

/// The same identity for a harmonic potential evaluated with the Mehler closed form.
ScalingCheck harmonic_scaling_check(double omega, double x, double y, double t,
                                    const PhysicalUnits& units);

struct QuadraticPhaseFit {
    double R;
    double S;
    double P;
    double residual;  // rms phase misfit over the window
};

/**
 * Unwraps arg K(x, y_index) along x over the central window and least-squares fits
 * R x^2 / 2 + S x + P.
 */
QuadraticPhaseFit phase_quadratic_fit(const KernelMatrix& K, std::size_t y_index,
                                      double window = kDefaultWindow);

/**
 * Phase ODEs of a flat-modulus kernel in units where i psi_t = -psi_xx + V psi
 * (hbar = 1, m = 1/2):
 *   R'/2 + R^2 = k1,  S' + 2 R S = k2,  P' + S^2 = k3,  V(x) = -k1 x^2 - k2 x - k3.
 */
struct RiccatiState {
    double k1;
    double k2;
    double k3;
    double y;
    std::vector<double> t;
    std::vector<double> R;
    std::vector<double> S;
    std::vector<double> P;

    PotentialSpec implied_potential() const;
};

inline constexpr double kRiccatiOverflowGuard = 1e12;

/**
 * Starts from free-kernel data at t0: R = 1/(2 t0), S = -y/(2 t0), P = y^2/(4 t0), and takes
 * `steps` classical RK4 steps uniform in ln t, so t0 can be taken close to 0.
 * The recorded times are log-spaced. BlowUp once |R| exceeds overflow_guard.
 */
RiccatiState riccati_solve(double k1, double k2, double k3, double t0, double t_end, std::size_t steps,
                           double y = 0.0, double overflow_guard = kRiccatiOverflowGuard);

struct RiccatiConstants {
    double k1;
    double k2;
    double k3;
};

/// k's for an at most quadratic V (same units as riccati_solve); UnsupportedPotential otherwise.
RiccatiConstants riccati_constants(const PotentialSpec& V);

/// Units of the Riccati system: hbar = 1, m = 1/2.
PhysicalUnits riccati_units();

}  // namespace pathmub
