#include "pathmub/field_lattice.hpp"

#include <cmath>
#include <sstream>

#include "pathmub/csv.hpp"

namespace pathmub {

namespace {

constexpr double kSmallPhase = 1e-8;

void require_shared_lattice(const FieldConfig& alpha, const FieldConfig& beta) {
    require(alpha.lattice == beta.lattice, Errc::GridMismatch, "field configurations live on different lattices");
}

long axis_mode(std::size_t k, std::size_t n) {
    return k < (n + 1) / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
}

std::vector<Complex> transformed(const FieldConfig& f, Fft& fft) {
    std::vector<Complex> data(f.values.begin(), f.values.end());
    fft.forward(data);
    return data;
}

std::vector<int> fft_shape(const LatticeConfig& lat) {
    return std::vector<int>(static_cast<std::size_t>(lat.dims), static_cast<int>(lat.sites_per_dim));
}

}  // namespace

void LatticeConfig::validate() const {
    require(dims == 1 || dims == 3, Errc::InvalidArgument, "lattice dimension must be 1 or 3");
    require(sites_per_dim >= 2, Errc::InvalidArgument, "need at least 2 sites per dimension");
    double total = 1.0;
    for (int i = 0; i < dims; ++i) total *= static_cast<double>(sites_per_dim);
    require(total <= static_cast<double>(kMaxSites), Errc::InvalidArgument, "lattice exceeds 2^20 sites");
    require(spacing > 0.0 && std::isfinite(spacing), Errc::InvalidArgument, "lattice spacing must be positive");
    require(field_mass >= 0.0 && std::isfinite(field_mass), Errc::InvalidArgument, "field mass must be nonnegative");
}

std::size_t LatticeConfig::total_sites() const noexcept {
    std::size_t n = 1;
    for (int i = 0; i < dims; ++i) n *= sites_per_dim;
    return n;
}

double LatticeConfig::cell_volume() const noexcept { return std::pow(spacing, dims); }

FieldConfig::FieldConfig(LatticeConfig lattice_, std::vector<double> values_)
    : lattice(lattice_), values(std::move(values_)) {
    lattice.validate();
    require(values.size() == lattice.total_sites(), Errc::DimensionMismatch, "field values do not match lattice size");
    for (double v : values) require(std::isfinite(v), Errc::InvalidArgument, "field values must be finite");
}

double dispersion(std::size_t mode_index, const LatticeConfig& lattice) {
    lattice.validate();
    require(mode_index < lattice.total_sites(), Errc::InvalidArgument, "mode index outside the lattice");
    const std::size_t D = lattice.sites_per_dim;
    const double unit = 2.0 * kPi / lattice.extent();
    double p2 = 0.0;
    std::size_t rest = mode_index;
    for (int axis = 0; axis < lattice.dims; ++axis) {
        const double p = unit * static_cast<double>(axis_mode(rest % D, D));
        p2 += p * p;
        rest /= D;
    }
    return std::sqrt(p2 + lattice.field_mass * lattice.field_mass);
}

ModePhaseBreakdown field_transition_phase(const FieldConfig& alpha, const FieldConfig& beta, double t,
                                          double caustic_tol) {
    require_shared_lattice(alpha, beta);
    require(t > 0.0, Errc::NonPositiveTime, "field transition phase needs t > 0");
    const LatticeConfig& lat = alpha.lattice;
    const std::size_t n = lat.total_sites();

    Fft fft(fft_shape(lat));
    const auto a = transformed(alpha, fft);
    const auto b = transformed(beta, fft);
    const double weight = lat.cell_volume() / static_cast<double>(n);

    ModePhaseBreakdown out;
    out.modes.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double omega = dispersion(k, lat);
        const double wt = omega * t;
        double ratio = 1.0 / t;  // omega / sin(omega t) as omega t -> 0
        if (wt > kSmallPhase) {
            const double s = std::sin(wt);
            if (!(std::abs(s) > caustic_tol)) {
                std::ostringstream os;
                os << "mode " << k << " (omega = " << omega << ") hits a caustic at t = " << t;
                throw ModeCausticError(k, omega, os.str());
            }
            ratio = omega / s;
        }
        const double quad = std::cos(wt) * (std::norm(a[k]) + std::norm(b[k])) - 2.0 * std::real(std::conj(a[k]) * b[k]);
        out.modes.push_back({k, omega, weight * ratio * quad});
    }
    for (const auto& m : out.modes) out.total_phase += m.contribution;
    return out;
}

double field_short_time_phase(const FieldConfig& alpha, const FieldConfig& beta, double t) {
    require_shared_lattice(alpha, beta);
    require(t > 0.0, Errc::NonPositiveTime, "short-time phase needs t > 0");
    double sum = 0.0;
    for (std::size_t i = 0; i < alpha.values.size(); ++i) {
        const double d = alpha.values[i] - beta.values[i];
        sum += d * d;
    }
    return alpha.lattice.cell_volume() * sum / t;
}

std::string mode_breakdown_csv(const ModePhaseBreakdown& breakdown) {
    std::ostringstream os;
    os << "mode_index,omega,contribution\n";
    for (const auto& m : breakdown.modes) os << m.mode_index << ',' << sci(m.omega) << ',' << sci(m.contribution) << '\n';
    return os.str();
}

Complex oscillator_kernel(Complex x, Complex y, double t, double omega, double caustic_tol) {
    const PhysicalUnits units(1.0, 1.0);
    const Complex prefactor = harmonic_kernel(0.0, 0.0, t, omega, units, caustic_tol);
    const double s = std::sin(omega * t);
    const double c = std::cos(omega * t);
    const Complex exponent = Complex(0.0, 1.0) * omega * ((x * x + y * y) * c - 2.0 * x * y) / (2.0 * s);
    return prefactor * std::exp(exponent);
}

double mode_composition_check(double omega, double t1, double t2, const CompositionQuadrature& quad) {
    require(omega > 0.0, Errc::InvalidArgument, "mode frequency must be positive");
    require(t1 > 0.0 && t2 > 0.0, Errc::NonPositiveTime, "composition times must be positive");
    require(quad.nodes >= 3 && quad.decay > 0.0 && !quad.samples.empty(), Errc::InvalidArgument,
            "bad composition quadrature");

    const double s1 = std::sin(omega * t1);
    const double s2 = std::sin(omega * t2);
    const double s12 = std::sin(omega * (t1 + t2));
    for (double s : {s1, s2, s12})
        require(std::abs(s) > kDefaultCausticTol, Errc::CausticSingularity, "composition times hit a caustic");

    // exponent in gamma is i c gamma^2 + linear terms
    const double cot_sum = std::cos(omega * t1) / s1 + std::cos(omega * t2) / s2;
    const double c = 0.5 * omega * cot_sum;
    const Complex dir = std::polar(1.0, std::copysign(kPi / 4.0, c));
    const double s_max = std::sqrt(quad.decay / std::abs(c));
    const double h = 2.0 * s_max / static_cast<double>(quad.nodes - 1);

    double worst = 0.0;
    for (const auto& [a, b] : quad.samples) {
        const double g0 = (a / s1 + b / s2) / cot_sum;
        Complex sum = 0.0;
        for (std::size_t i = 0; i < quad.nodes; ++i) {
            const double s = -s_max + static_cast<double>(i) * h;
            const Complex g = g0 + dir * s;
            const double w = (i == 0 || i + 1 == quad.nodes) ? 0.5 : 1.0;
            sum += w * oscillator_kernel(a, g, t1, omega) * oscillator_kernel(g, b, t2, omega);
        }
        const Complex integral = sum * dir * h;
        const Complex exact = oscillator_kernel(a, b, t1 + t2, omega);
        worst = std::max(worst, std::abs(integral - exact) / std::abs(exact));
    }
    return worst;
}

Lagrangian4Form rescale_lagrangian_4form(double s, double grad_coeff, double mass_coeff,
                                         const PotentialSpec& potential) {
    require(s > 0.0 && std::isfinite(s), Errc::InvalidArgument, "rescaling factor must be positive");
    const bool polynomial = potential.is_free() || std::holds_alternative<PotentialSpec::Polynomial>(potential.variant());
    require(polynomial, Errc::UnsupportedPotential, "field potential must be a polynomial in phi");
    auto coeffs = potential.polynomial_coefficients(PhysicalUnits{});
    for (std::size_t k = 0; k < coeffs.size(); ++k) coeffs[k] *= std::pow(s, 1.0 + 0.5 * static_cast<double>(k));
    return {0.5, grad_coeff * s * s, mass_coeff * s * s, PotentialSpec::polynomial(std::move(coeffs))};
}

}  // namespace pathmub
