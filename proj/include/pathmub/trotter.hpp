#pragma once

#include <Eigen/Dense>

#include "pathmub/numerics.hpp"
#include "pathmub/potential.hpp"

namespace pathmub {

struct TrotterPlan {
    double t_total;
    std::size_t n_slices;

    TrotterPlan(double t_total_, std::size_t n_slices_);

    double delta_s() const noexcept { return t_total / static_cast<double>(n_slices); }
};

/**
 * U(t) in the orthonormal grid basis: entry (j, k) = <x_j| U |x_k>, so the continuum
 * kernel is approximately entry / spacing.
 */
struct KernelMatrix {
    GridSpec grid;
    double t;
    Eigen::MatrixXcd entries;

    Complex continuum(std::size_t j, std::size_t k) const { return entries(j, k) / grid.spacing(); }

    /// max |U^dagger U - I|
    double unitarity_error() const;

    /**
     * Continuum kernel at arbitrary (x, y) by band-limited (periodic sinc) interpolation
     * of the matrix in both indices.
     */
    Complex interpolate(double x, double y) const;
};

/// Periodic band-limited cardinal functions of `grid` evaluated at x (Dirichlet kernel).
Eigen::VectorXd cardinal_weights(const GridSpec& grid, double x);

/// m/2 ((x - y)/ds)^2 - V(x), potential taken at the endpoint x.
double short_time_lagrangian(double x, double y, double delta_s, const PotentialSpec& V,
                             const PhysicalUnits& units);

/// (2 pi i hbar ds / m)^(-1/2) exp(i L(x, y) ds / hbar), same branch as free_kernel.
Complex short_time_kernel(double x, double y, double delta_s, const PotentialSpec& V,
                          const PhysicalUnits& units);

enum class SliceRule {
    // diag(exp(-i V ds / hbar)) times the exact spectral free propagator over ds
    spectral,
    // short_time_kernel(x_j, x_k) * spacing, sampled directly (not unitary in general)
    sampled,
};

Eigen::MatrixXcd slice_matrix(const GridSpec& grid, const PotentialSpec& V, double delta_s,
                              const PhysicalUnits& units, SliceRule rule = SliceRule::spectral);

/// Product of plan.n_slices identical slice matrices (time-sliced path integral).
KernelMatrix composed_kernel(const GridSpec& grid, const PotentialSpec& V, const TrotterPlan& plan,
                             const PhysicalUnits& units, SliceRule rule = SliceRule::spectral);

/// One Lie-Trotter step: kinetic factor in momentum space, then the potential phase.
ComplexGridVector split_operator_step(const ComplexGridVector& psi, double delta_s,
                                      const PotentialSpec& V, const PhysicalUnits& units);

/// Reusable stepper for long runs; step() has the same arithmetic as split_operator_step.
class SplitOperator {
public:
    SplitOperator(const GridSpec& grid, const PotentialSpec& V, double delta_s,
                  const PhysicalUnits& units);

    void step(ComplexGridVector& psi);
    void evolve(ComplexGridVector& psi, std::size_t steps);

    const GridSpec& grid() const noexcept { return grid_; }

private:
    GridSpec grid_;
    std::vector<Complex> kinetic_phase_;
    std::vector<Complex> potential_phase_;
    Fft fft_;
};

inline constexpr std::size_t kMaxOracleDimension = 2048;

/// Real symmetric discretized Hamiltonian: spectral kinetic circulant + diag(V).
Eigen::MatrixXd hamiltonian_matrix(const GridSpec& grid, const PotentialSpec& V,
                                   const PhysicalUnits& units);

/**
 * Ground-truth U(t) = exp(-i H t / hbar) from one eigendecomposition of the grid
 * Hamiltonian; kernel(t) can be called for any real t.
 */
class SpectralOracle {
public:
    SpectralOracle(const GridSpec& grid, const PotentialSpec& V, const PhysicalUnits& units);

    KernelMatrix kernel(double t) const;

    const GridSpec& grid() const noexcept { return grid_; }
    const Eigen::VectorXd& energies() const noexcept { return energies_; }
    const Eigen::MatrixXd& eigenvectors() const noexcept { return vectors_; }

private:
    GridSpec grid_;
    PhysicalUnits units_;
    Eigen::VectorXd energies_;
    Eigen::MatrixXd vectors_;
};

KernelMatrix spectral_oracle_kernel(const GridSpec& grid, const PotentialSpec& V, double t,
                                    const PhysicalUnits& units);

}  // namespace pathmub
