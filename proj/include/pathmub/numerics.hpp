#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "pathmub/error.hpp"

namespace pathmub {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

struct PhysicalUnits {
    double hbar = 1.0;
    double mass = 1.0;

    PhysicalUnits() = default;
    PhysicalUnits(double hbar_, double mass_);
};

enum class Boundary { periodic };

/**
 * Uniform periodic grid on [x_min, x_max). Node j sits at x_min + j*spacing,
 * with spacing = (x_max - x_min) / n_points, so x_max itself is the image of x_min.
 */
class GridSpec {
public:
    GridSpec(std::size_t n_points, double x_min, double x_max);

    std::size_t size() const noexcept { return n_; }
    double x_min() const noexcept { return x_min_; }
    double x_max() const noexcept { return x_max_; }
    double length() const noexcept { return x_max_ - x_min_; }
    double spacing() const noexcept { return (x_max_ - x_min_) / static_cast<double>(n_); }
    Boundary boundary() const noexcept { return Boundary::periodic; }

    double x(std::size_t j) const noexcept { return x_min_ + static_cast<double>(j) * spacing(); }
    std::vector<double> nodes() const;

    // Signed integer of DFT slot k in the symmetric range [-n/2, (n-1)/2].
    long mode_number(std::size_t k) const noexcept;
    // Spectral momentum hbar * 2*pi*mode_number(k) / L.
    double momentum(std::size_t k, const PhysicalUnits& units) const noexcept;
    double max_momentum(const PhysicalUnits& units) const noexcept;

    // Nearest node index (periodic), used for point lookups.
    std::size_t nearest_index(double x) const noexcept;

    bool operator==(const GridSpec& other) const noexcept {
        return n_ == other.n_ && x_min_ == other.x_min_ && x_max_ == other.x_max_;
    }

private:
    std::size_t n_;
    double x_min_;
    double x_max_;
};

/// Centered grid whose extent satisfies L^2 = 2*pi*hbar*t*n/m. At time t the
/// spectral free propagator on it equals the sampled closed form exactly (for even n).
GridSpec self_dual_grid(std::size_t n_points, double t, const PhysicalUnits& units);

double self_dual_time(const GridSpec& grid, const PhysicalUnits& units);

struct ComplexGridVector {
    GridSpec grid;
    std::vector<Complex> values;

    ComplexGridVector(GridSpec grid_, std::vector<Complex> values_);

    static ComplexGridVector sample(const GridSpec& grid, const std::function<Complex(double)>& f);
};

struct SampledFunction {
    double a;
    double b;
    std::vector<double> samples;

    SampledFunction(double a_, double b_, std::vector<double> samples_);

    static SampledFunction sample(const std::function<double(double)>& f, double a, double b,
                                  std::size_t n_samples);
};

/// Composite trapezoid rule for uniformly spaced samples on [a, b].
double trapezoid(std::span<const double> samples, double a, double b);

/**
 * Riemann continuous product prod_a^b f(t)^dt = exp(int_a^b ln f dt).
 * The log-integral uses the trapezoid rule over `partitions` equal panels;
 * (samples - 1) must be a multiple of `partitions`.
 */
double continuous_product(const SampledFunction& f, std::size_t partitions);

Complex inner_product(const ComplexGridVector& v, const ComplexGridVector& w);
double norm(const ComplexGridVector& v);

/// Multiply DFT mode k of v by multipliers[k] (FFTW slot order) and transform back.
ComplexGridVector apply_momentum_multiplier(const ComplexGridVector& v,
                                            std::span<const Complex> multipliers);

ComplexGridVector apply_momentum_function(const ComplexGridVector& v,
                                          const std::function<Complex(double)>& g,
                                          const PhysicalUnits& units);

/// Multipliers g(p_k) in FFTW slot order.
std::vector<Complex> momentum_multipliers(const GridSpec& grid,
                                          const std::function<Complex(double)>& g,
                                          const PhysicalUnits& units);

/**
 * First column of the circulant matrix F^-1 diag(p_k^2 / 2m) F, i.e. the spectral
 * kinetic energy in the grid basis. Real and even for the symmetric mode range.
 */
std::vector<double> kinetic_circulant(const GridSpec& grid, const PhysicalUnits& units);

/**
 * In-place complex DFT of fixed shape backed by FFTW (FFTW_ESTIMATE plans, so
 * results do not depend on planner timing). forward() is unnormalized,
 * backward() divides by the total size.
 */
class Fft {
public:
    explicit Fft(std::vector<int> shape);
    explicit Fft(std::size_t n) : Fft(std::vector<int>{static_cast<int>(n)}) {}
    ~Fft();

    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;
    Fft(Fft&& other) noexcept;
    Fft& operator=(Fft&& other) noexcept;

    std::size_t size() const noexcept { return total_; }

    void forward(std::span<Complex> data);
    void backward(std::span<Complex> data);

private:
    void release() noexcept;

    std::size_t total_ = 0;
    void* buffer_ = nullptr;
    void* forward_plan_ = nullptr;
    void* backward_plan_ = nullptr;
};

}  // namespace pathmub
