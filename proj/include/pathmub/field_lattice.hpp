#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pathmub/closed_kernels.hpp"
#include "pathmub/potential.hpp"

namespace pathmub {

/// Periodic cubic lattice in d = 1 or 3 dimensions, hbar = c = 1.
struct LatticeConfig {
    int dims = 1;
    std::size_t sites_per_dim = 2;
    double spacing = 1.0;
    double field_mass = 0.0;

    static constexpr std::size_t kMaxSites = std::size_t{1} << 20;

    /// InvalidArgument unless d in {1, 3}, D >= 2, D^d <= 2^20, a > 0, m >= 0.
    void validate() const;
    std::size_t total_sites() const noexcept;
    double extent() const noexcept { return static_cast<double>(sites_per_dim) * spacing; }
    double cell_volume() const noexcept;

    bool operator==(const LatticeConfig&) const = default;
};

struct FieldConfig {
    LatticeConfig lattice;
    std::vector<double> values;  // row-major site order

    FieldConfig(LatticeConfig lattice_, std::vector<double> values_);
};

struct ModeContribution {
    std::size_t mode_index;  // flat DFT index, row-major
    double omega;
    double contribution;
};

struct ModePhaseBreakdown {
    std::vector<ModeContribution> modes;  // ascending mode_index
    double total_phase = 0.0;
};

/// omega_k = sqrt(|p_k|^2 + m^2) with spectral momenta 2 pi n / (D a) per axis.
double dispersion(std::size_t mode_index, const LatticeConfig& lattice);

/**
 * Phase of the transition amplitude between field eigenstates alpha at time 0 and beta at t:
 * sum over modes of (a^d / N) (omega / sin omega t) (cos omega t (|a_k|^2 + |b_k|^2) - 2 Re conj(a_k) b_k),
 * a_k, b_k unnormalized DFTs. Each mode is an oscillator of unit frequency scale and mass 2.
 * ModeCausticError when |sin omega_k t| <= caustic_tol.
 */
ModePhaseBreakdown field_transition_phase(const FieldConfig& alpha, const FieldConfig& beta, double t,
                                          double caustic_tol = kDefaultCausticTol);

/// (1/t) sum_sites a^d (alpha - beta)^2
double field_short_time_phase(const FieldConfig& alpha, const FieldConfig& beta, double t);

/// Rows `mode_index,omega,contribution`.
std::string mode_breakdown_csv(const ModePhaseBreakdown& breakdown);

/**
 * Composition integrals are evaluated along gamma0 + e^{+-i pi/4} s through the saddle, where
 * the integrand decays like exp(-decay (s/s_max)^2); `nodes` trapezoid points on [-s_max, s_max].
 */
struct CompositionQuadrature {
    std::size_t nodes = 2001;
    double decay = 60.0;
    std::vector<std::pair<double, double>> samples = {{0.0, 0.0}, {0.3, -0.7}, {1.2, 0.5}, {-1.5, 2.0}, {2.5, 2.4}};
};

/// Oscillator kernel with m = hbar = 1 extended to complex arguments.
Complex oscillator_kernel(Complex x, Complex y, double t, double omega,
                          double caustic_tol = kDefaultCausticTol);

/// max over samples of |int K(a, g, t1) K(g, b, t2) dg - K(a, b, t1 + t2)| / |K(a, b, t1 + t2)|
double mode_composition_check(double omega, double t1, double t2,
                              const CompositionQuadrature& quad = {});

struct Lagrangian4Form {
    double kinetic_coeff;
    double grad_coeff;
    double mass_coeff;
    PotentialSpec potential;
};

/**
 * t -> s t, phi -> sqrt(s) phi applied to kin phi_t^2 - grad (grad phi)^2 + mass phi^2 + V(phi):
 * kinetic unchanged, grad and mass times s^2, V(phi) -> s V(sqrt(s) phi).
 */
Lagrangian4Form rescale_lagrangian_4form(double s, double grad_coeff, double mass_coeff,
                                         const PotentialSpec& potential);

}  // namespace pathmub
