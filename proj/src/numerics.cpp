#include "pathmub/numerics.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <sstream>

namespace pathmub {

namespace {

// The FFTW planner is not thread safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

PhysicalUnits::PhysicalUnits(double hbar_, double mass_) : hbar(hbar_), mass(mass_) {
    require(std::isfinite(hbar) && hbar > 0.0, Errc::InvalidArgument, "hbar must be positive");
    require(std::isfinite(mass) && mass > 0.0, Errc::InvalidArgument, "mass must be positive");
}

GridSpec::GridSpec(std::size_t n_points, double x_min, double x_max)
    : n_(n_points), x_min_(x_min), x_max_(x_max) {
    require(n_points >= 8, Errc::InvalidArgument, "grid needs at least 8 points");
    require(std::isfinite(x_min) && std::isfinite(x_max) && x_max > x_min, Errc::InvalidArgument,
            "grid requires finite x_min < x_max");
}

std::vector<double> GridSpec::nodes() const {
    std::vector<double> xs(n_);
    for (std::size_t j = 0; j < n_; ++j) xs[j] = x(j);
    return xs;
}

long GridSpec::mode_number(std::size_t k) const noexcept {
    const auto n = static_cast<long>(n_);
    const auto kk = static_cast<long>(k);
    return kk < (n + 1) / 2 ? kk : kk - n;
}

double GridSpec::momentum(std::size_t k, const PhysicalUnits& units) const noexcept {
    return units.hbar * 2.0 * kPi * static_cast<double>(mode_number(k)) / length();
}

double GridSpec::max_momentum(const PhysicalUnits& units) const noexcept {
    return units.hbar * kPi / spacing();
}

std::size_t GridSpec::nearest_index(double xv) const noexcept {
    const double u = (xv - x_min_) / spacing();
    auto j = static_cast<long>(std::llround(u));
    const auto n = static_cast<long>(n_);
    j %= n;
    if (j < 0) j += n;
    return static_cast<std::size_t>(j);
}

GridSpec self_dual_grid(std::size_t n_points, double t, const PhysicalUnits& units) {
    require(t > 0.0, Errc::NonPositiveTime, "self-dual grid needs t > 0");
    const double L = std::sqrt(2.0 * kPi * units.hbar * t * static_cast<double>(n_points) / units.mass);
    return GridSpec(n_points, -0.5 * L, 0.5 * L);
}

double self_dual_time(const GridSpec& grid, const PhysicalUnits& units) {
    const double L = grid.length();
    return units.mass * L * L / (2.0 * kPi * units.hbar * static_cast<double>(grid.size()));
}

ComplexGridVector::ComplexGridVector(GridSpec grid_, std::vector<Complex> values_)
    : grid(grid_), values(std::move(values_)) {
    require(values.size() == grid.size(), Errc::GridMismatch, "value count does not match grid");
    for (const auto& z : values) {
        require(std::isfinite(z.real()) && std::isfinite(z.imag()), Errc::InvalidArgument,
                "grid vector entries must be finite");
    }
}

ComplexGridVector ComplexGridVector::sample(const GridSpec& grid,
                                            const std::function<Complex(double)>& f) {
    std::vector<Complex> vals(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) vals[j] = f(grid.x(j));
    return ComplexGridVector(grid, std::move(vals));
}

SampledFunction::SampledFunction(double a_, double b_, std::vector<double> samples_)
    : a(a_), b(b_), samples(std::move(samples_)) {
    require(b > a, Errc::InvalidArgument, "sampled interval needs b > a");
    require(samples.size() >= 2, Errc::InvalidArgument, "need at least two samples");
}

SampledFunction SampledFunction::sample(const std::function<double(double)>& f, double a, double b,
                                        std::size_t n_samples) {
    require(n_samples >= 2, Errc::InvalidArgument, "need at least two samples");
    std::vector<double> s(n_samples);
    const double h = (b - a) / static_cast<double>(n_samples - 1);
    for (std::size_t i = 0; i < n_samples; ++i) s[i] = f(a + static_cast<double>(i) * h);
    return SampledFunction(a, b, std::move(s));
}

double trapezoid(std::span<const double> samples, double a, double b) {
    require(samples.size() >= 2, Errc::InvalidArgument, "trapezoid needs two samples");
    const double h = (b - a) / static_cast<double>(samples.size() - 1);
    double sum = 0.5 * (samples.front() + samples.back());
    for (std::size_t i = 1; i + 1 < samples.size(); ++i) sum += samples[i];
    return sum * h;
}

double continuous_product(const SampledFunction& f, std::size_t partitions) {
    const std::size_t panels = f.samples.size() - 1;
    require(partitions >= 1 && partitions <= panels && panels % partitions == 0,
            Errc::InvalidArgument, "partition count must divide the sample panel count");
    const std::size_t stride = panels / partitions;

    std::vector<double> logs;
    logs.reserve(partitions + 1);
    for (std::size_t i = 0; i <= panels; i += stride) {
        const double v = f.samples[i];
        if (!(v > 0.0)) {
            std::ostringstream os;
            os << "sample " << i << " = " << v << " is not strictly positive";
            fail(Errc::NonPositiveSample, os.str());
        }
        logs.push_back(std::log(v));
    }
    // Samples skipped by the stride still have to be admissible.
    for (double v : f.samples) require(v > 0.0, Errc::NonPositiveSample, "non-positive sample");
    return std::exp(trapezoid(logs, f.a, f.b));
}

Complex inner_product(const ComplexGridVector& v, const ComplexGridVector& w) {
    require(v.grid == w.grid, Errc::GridMismatch, "inner product of vectors on different grids");
    Complex sum{0.0, 0.0};
    for (std::size_t j = 0; j < v.values.size(); ++j) sum += std::conj(v.values[j]) * w.values[j];
    return sum * v.grid.spacing();
}

double norm(const ComplexGridVector& v) { return std::sqrt(inner_product(v, v).real()); }

std::vector<Complex> momentum_multipliers(const GridSpec& grid,
                                          const std::function<Complex(double)>& g,
                                          const PhysicalUnits& units) {
    std::vector<Complex> m(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) m[k] = g(grid.momentum(k, units));
    return m;
}

ComplexGridVector apply_momentum_multiplier(const ComplexGridVector& v,
                                            std::span<const Complex> multipliers) {
    require(multipliers.size() == v.grid.size(), Errc::GridMismatch,
            "multiplier count does not match grid");
    std::vector<Complex> data = v.values;
    Fft fft(data.size());
    fft.forward(data);
    for (std::size_t k = 0; k < data.size(); ++k) data[k] *= multipliers[k];
    fft.backward(data);
    return ComplexGridVector(v.grid, std::move(data));
}

ComplexGridVector apply_momentum_function(const ComplexGridVector& v,
                                          const std::function<Complex(double)>& g,
                                          const PhysicalUnits& units) {
    const auto m = momentum_multipliers(v.grid, g, units);
    return apply_momentum_multiplier(v, m);
}

std::vector<double> kinetic_circulant(const GridSpec& grid, const PhysicalUnits& units) {
    const std::size_t n = grid.size();
    std::vector<Complex> spectrum(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double p = grid.momentum(k, units);
        spectrum[k] = p * p / (2.0 * units.mass);
    }
    Fft fft(n);
    fft.backward(spectrum);
    std::vector<double> col(n);
    // Symmetrize so the assembled matrix is exactly symmetric.
    for (std::size_t d = 0; d < n; ++d) {
        const std::size_t mirror = (n - d) % n;
        col[d] = 0.5 * (spectrum[d].real() + spectrum[mirror].real());
    }
    return col;
}

Fft::Fft(std::vector<int> shape) {
    require(!shape.empty(), Errc::InvalidArgument, "FFT shape must be non-empty");
    total_ = 1;
    for (int s : shape) {
        require(s > 0, Errc::InvalidArgument, "FFT extents must be positive");
        total_ *= static_cast<std::size_t>(s);
    }
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto* buf = fftw_alloc_complex(total_);
    buffer_ = buf;
    const int rank = static_cast<int>(shape.size());
    forward_plan_ = fftw_plan_dft(rank, shape.data(), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_plan_ = fftw_plan_dft(rank, shape.data(), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft::~Fft() { release(); }

Fft::Fft(Fft&& other) noexcept
    : total_(other.total_),
      buffer_(other.buffer_),
      forward_plan_(other.forward_plan_),
      backward_plan_(other.backward_plan_) {
    other.buffer_ = nullptr;
    other.forward_plan_ = nullptr;
    other.backward_plan_ = nullptr;
}

Fft& Fft::operator=(Fft&& other) noexcept {
    if (this != &other) {
        release();
        total_ = other.total_;
        buffer_ = other.buffer_;
        forward_plan_ = other.forward_plan_;
        backward_plan_ = other.backward_plan_;
        other.buffer_ = nullptr;
        other.forward_plan_ = nullptr;
        other.backward_plan_ = nullptr;
    }
    return *this;
}

void Fft::release() noexcept {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    if (backward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
    if (buffer_) fftw_free(buffer_);
    buffer_ = forward_plan_ = backward_plan_ = nullptr;
}

void Fft::forward(std::span<Complex> data) {
    require(data.size() == total_, Errc::DimensionMismatch, "FFT size mismatch");
    auto* buf = static_cast<fftw_complex*>(buffer_);
    for (std::size_t i = 0; i < total_; ++i) {
        buf[i][0] = data[i].real();
        buf[i][1] = data[i].imag();
    }
    fftw_execute(static_cast<fftw_plan>(forward_plan_));
    for (std::size_t i = 0; i < total_; ++i) data[i] = {buf[i][0], buf[i][1]};
}

void Fft::backward(std::span<Complex> data) {
    require(data.size() == total_, Errc::DimensionMismatch, "FFT size mismatch");
    auto* buf = static_cast<fftw_complex*>(buffer_);
    for (std::size_t i = 0; i < total_; ++i) {
        buf[i][0] = data[i].real();
        buf[i][1] = data[i].imag();
    }
    fftw_execute(static_cast<fftw_plan>(backward_plan_));
    const double scale = 1.0 / static_cast<double>(total_);
    for (std::size_t i = 0; i < total_; ++i) data[i] = {buf[i][0] * scale, buf[i][1] * scale};
}

}  // namespace pathmub
