#include "pathmub/trotter.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

#include "pathmub/closed_kernels.hpp"

namespace pathmub {

TrotterPlan::TrotterPlan(double t_total_, std::size_t n_slices_) : t_total(t_total_), n_slices(n_slices_) {
    require(t_total > 0.0, Errc::NonPositiveTime, "Trotter plan needs t_total > 0");
    require(n_slices >= 1, Errc::InvalidArgument, "Trotter plan needs at least one slice");
}

double KernelMatrix::unitarity_error() const {
    const auto n = entries.rows();
    const Eigen::MatrixXcd g = entries.adjoint() * entries - Eigen::MatrixXcd::Identity(n, n);
    return g.cwiseAbs().maxCoeff();
}

Eigen::VectorXd cardinal_weights(const GridSpec& grid, double x) {
    const std::size_t n = grid.size();
    const double L = grid.length();
    const bool even = n % 2 == 0;
    Eigen::VectorXd w(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
        const double half_theta = kPi * (x - grid.x(j)) / L;
        const double s = std::sin(static_cast<double>(n) * half_theta);
        const double den = static_cast<double>(n) * (even ? std::tan(half_theta) : std::sin(half_theta));
        // On node j or a periodic image of it the limit is 1 for either parity.
        const bool on_node = std::abs(std::sin(half_theta)) < 1e-14;
        w(static_cast<Eigen::Index>(j)) = on_node ? 1.0 : s / den;
    }
    return w;
}

Complex KernelMatrix::interpolate(double x, double y) const {
    const Eigen::VectorXd wx = cardinal_weights(grid, x);
    const Eigen::VectorXd wy = cardinal_weights(grid, y);
    const Eigen::VectorXcd col = entries * wy.cast<Complex>();
    return wx.cast<Complex>().dot(col) / grid.spacing();
}

double short_time_lagrangian(double x, double y, double delta_s, const PotentialSpec& V,
                             const PhysicalUnits& units) {
    require(delta_s > 0.0, Errc::NonPositiveTime, "short-time lagrangian needs delta_s > 0");
    const double v = (x - y) / delta_s;
    return 0.5 * units.mass * v * v - V(x, units);
}

Complex short_time_kernel(double x, double y, double delta_s, const PotentialSpec& V,
                          const PhysicalUnits& units) {
    require(delta_s > 0.0, Errc::NonPositiveTime, "short-time kernel needs delta_s > 0");
    const double modulus = 1.0 / std::sqrt(2.0 * kPi * units.hbar * delta_s / units.mass);
    const double phase = short_time_lagrangian(x, y, delta_s, V, units) * delta_s / units.hbar;
    return std::polar(1.0, -0.25 * kPi) * std::polar(modulus, phase);
}

namespace {

// First column of the circulant exp(-i H0 ds / hbar) in the grid basis.
std::vector<Complex> free_propagator_circulant(const GridSpec& grid, double delta_s,
                                               const PhysicalUnits& units) {
    const std::size_t n = grid.size();
    std::vector<Complex> c(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double p = grid.momentum(k, units);
        c[k] = std::polar(1.0, -p * p * delta_s / (2.0 * units.mass * units.hbar));
    }
    Fft fft(n);
    fft.backward(c);
    return c;
}

Eigen::MatrixXcd matrix_power(const Eigen::MatrixXcd& base, std::size_t exponent) {
    // Binary powering; all factors are powers of one matrix so they commute.
    Eigen::MatrixXcd result;
    bool have_result = false;
    Eigen::MatrixXcd square = base;
    while (exponent > 0) {
        if (exponent & 1U) {
            if (have_result) {
                result = (result * square).eval();
            } else {
                result = square;
                have_result = true;
            }
        }
        exponent >>= 1U;
        if (exponent > 0) square = (square * square).eval();
    }
    return result;
}

}  // namespace

Eigen::MatrixXcd slice_matrix(const GridSpec& grid, const PotentialSpec& V, double delta_s,
                              const PhysicalUnits& units, SliceRule rule) {
    require(delta_s > 0.0, Errc::NonPositiveTime, "slice needs delta_s > 0");
    const std::size_t n = grid.size();
    const auto ni = static_cast<Eigen::Index>(n);
    Eigen::MatrixXcd S(ni, ni);

    if (rule == SliceRule::sampled) {
        const double h = grid.spacing();
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j)
                S(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
                    short_time_kernel(grid.x(j), grid.x(k), delta_s, V, units) * h;
        return S;
    }

    const auto c = free_propagator_circulant(grid, delta_s, units);
    const auto v = V.sample(grid, units);
    for (std::size_t j = 0; j < n; ++j) {
        const Complex kick = std::polar(1.0, -v[j] * delta_s / units.hbar);
        for (std::size_t k = 0; k < n; ++k)
            S(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = kick * c[(j + n - k) % n];
    }
    return S;
}

KernelMatrix composed_kernel(const GridSpec& grid, const PotentialSpec& V, const TrotterPlan& plan,
                             const PhysicalUnits& units, SliceRule rule) {
    const Eigen::MatrixXcd slice = slice_matrix(grid, V, plan.delta_s(), units, rule);
    return KernelMatrix{grid, plan.t_total, matrix_power(slice, plan.n_slices)};
}

SplitOperator::SplitOperator(const GridSpec& grid, const PotentialSpec& V, double delta_s,
                             const PhysicalUnits& units)
    : grid_(grid), fft_(grid.size()) {
    require(delta_s > 0.0, Errc::NonPositiveTime, "split-operator step needs delta_s > 0");
    const std::size_t n = grid.size();
    kinetic_phase_.resize(n);
    potential_phase_.resize(n);
    const auto v = V.sample(grid, units);
    for (std::size_t k = 0; k < n; ++k) {
        const double p = grid.momentum(k, units);
        kinetic_phase_[k] = std::polar(1.0, -p * p * delta_s / (2.0 * units.mass * units.hbar));
        potential_phase_[k] = std::polar(1.0, -v[k] * delta_s / units.hbar);
    }
}

void SplitOperator::step(ComplexGridVector& psi) {
    require(psi.grid == grid_, Errc::GridMismatch, "state lives on another grid");
    auto& data = psi.values;
    fft_.forward(data);
    for (std::size_t k = 0; k < data.size(); ++k) data[k] *= kinetic_phase_[k];
    fft_.backward(data);
    for (std::size_t j = 0; j < data.size(); ++j) data[j] *= potential_phase_[j];
}

void SplitOperator::evolve(ComplexGridVector& psi, std::size_t steps) {
    for (std::size_t s = 0; s < steps; ++s) step(psi);
}

ComplexGridVector split_operator_step(const ComplexGridVector& psi, double delta_s,
                                      const PotentialSpec& V, const PhysicalUnits& units) {
    SplitOperator op(psi.grid, V, delta_s, units);
    ComplexGridVector out = psi;
    op.step(out);
    return out;
}

Eigen::MatrixXd hamiltonian_matrix(const GridSpec& grid, const PotentialSpec& V,
                                   const PhysicalUnits& units) {
    const std::size_t n = grid.size();
    const auto c = kinetic_circulant(grid, units);
    const auto v = V.sample(grid, units);
    const auto ni = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd H(ni, ni);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j)
            H(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = c[(j + n - k) % n];
    for (std::size_t j = 0; j < n; ++j) H(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) += v[j];
    return H;
}

SpectralOracle::SpectralOracle(const GridSpec& grid, const PotentialSpec& V, const PhysicalUnits& units)
    : grid_(grid), units_(units) {
    if (grid.size() > kMaxOracleDimension) {
        std::ostringstream os;
        os << "dense oracle limited to " << kMaxOracleDimension << " points, got " << grid.size();
        fail(Errc::DimensionTooLarge, os.str());
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hamiltonian_matrix(grid, V, units));
    require(solver.info() == Eigen::Success, Errc::InvalidArgument, "eigendecomposition failed");
    energies_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors();
}

KernelMatrix SpectralOracle::kernel(double t) const {
    const Eigen::ArrayXd phase = -energies_.array() * (t / units_.hbar);
    const Eigen::MatrixXd qc = vectors_ * phase.cos().matrix().asDiagonal();
    const Eigen::MatrixXd qs = vectors_ * phase.sin().matrix().asDiagonal();
    Eigen::MatrixXcd U(vectors_.rows(), vectors_.cols());
    U.real() = qc * vectors_.transpose();
    U.imag() = qs * vectors_.transpose();
    return KernelMatrix{grid_, t, std::move(U)};
}

KernelMatrix spectral_oracle_kernel(const GridSpec& grid, const PotentialSpec& V, double t,
                                    const PhysicalUnits& units) {
    return SpectralOracle(grid, V, units).kernel(t);
}

}  // namespace pathmub
