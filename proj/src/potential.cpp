#include "pathmub/potential.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace pathmub {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string short_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

double evaluate_polynomial(const std::vector<double>& coeffs, double x) noexcept {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

PotentialSpec PotentialSpec::harmonic(double omega) {
    require(std::isfinite(omega) && omega > 0.0, Errc::InvalidArgument, "harmonic omega must be positive");
    return PotentialSpec(Harmonic{omega});
}

PotentialSpec PotentialSpec::polynomial(std::vector<double> coeffs) {
    require(coeffs.size() <= kMaxDegree + 1, Errc::UnsupportedPotential,
            "polynomial potentials are limited to degree 8");
    for (double c : coeffs) require(std::isfinite(c), Errc::InvalidArgument, "non-finite coefficient");
    return PotentialSpec(Polynomial{std::move(coeffs)});
}

PotentialSpec PotentialSpec::tabulated(GridSpec grid, std::vector<double> values) {
    require(values.size() == grid.size(), Errc::GridMismatch, "tabulated values do not match grid");
    for (double v : values) require(std::isfinite(v), Errc::InvalidArgument, "non-finite tabulated value");
    return PotentialSpec(Tabulated{grid, std::move(values)});
}

double PotentialSpec::operator()(double x, const PhysicalUnits& units) const {
    return std::visit(
        Overloaded{
            [](const Free&) { return 0.0; },
            [&](const Harmonic& h) { return 0.5 * units.mass * h.omega * h.omega * x * x; },
            [&](const Polynomial& p) { return evaluate_polynomial(p.coeffs, x); },
            [&](const Tabulated& tab) {
                // periodic linear interpolation
                const double u = (x - tab.grid.x_min()) / tab.grid.spacing();
                const double fl = std::floor(u);
                const double frac = u - fl;
                const auto n = static_cast<long long>(tab.grid.size());
                long long j = static_cast<long long>(fl) % n;
                if (j < 0) j += n;
                const auto j1 = static_cast<std::size_t>((j + 1) % n);
                return (1.0 - frac) * tab.values[static_cast<std::size_t>(j)] + frac * tab.values[j1];
            },
        },
        v_);
}

std::vector<double> PotentialSpec::sample(const GridSpec& grid, const PhysicalUnits& units) const {
    if (const auto* tab = std::get_if<Tabulated>(&v_)) {
        require(tab->grid == grid, Errc::GridMismatch, "tabulated potential lives on another grid");
        return tab->values;
    }
    std::vector<double> out(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) out[j] = (*this)(grid.x(j), units);
    return out;
}

std::vector<double> PotentialSpec::polynomial_coefficients(const PhysicalUnits& units) const {
    return std::visit(
        Overloaded{
            [](const Free&) { return std::vector<double>{}; },
            [&](const Harmonic& h) {
                return std::vector<double>{0.0, 0.0, 0.5 * units.mass * h.omega * h.omega};
            },
            [](const Polynomial& p) { return p.coeffs; },
            [](const Tabulated&) -> std::vector<double> {
                fail(Errc::UnsupportedPotential, "tabulated potential has no polynomial form");
            },
        },
        v_);
}

PotentialSpec PotentialSpec::time_rescaled(double t) const {
    require(t > 0.0, Errc::NonPositiveTime, "rescaling needs t > 0");
    return std::visit(
        Overloaded{
            [](const Free&) { return PotentialSpec::free(); },
            [&](const Harmonic& h) { return PotentialSpec::harmonic(h.omega * t); },
            [&](const Polynomial& p) {
                // t * c_k * (sqrt t)^k
                std::vector<double> c(p.coeffs.size());
                const double root = std::sqrt(t);
                double scale = t;
                for (std::size_t k = 0; k < c.size(); ++k) {
                    c[k] = p.coeffs[k] * scale;
                    scale *= root;
                }
                return PotentialSpec::polynomial(std::move(c));
            },
            [](const Tabulated&) -> PotentialSpec {
                fail(Errc::UnsupportedPotential, "tabulated potential cannot be rescaled analytically");
            },
        },
        v_);
}

std::string PotentialSpec::label() const {
    return std::visit(Overloaded{
                          [](const Free&) { return std::string("free"); },
                          [](const Harmonic& h) { return "harmonic(omega=" + short_number(h.omega) + ")"; },
                          [](const Polynomial& p) {
                              std::ostringstream os;
                              os << "polynomial(";
                              for (std::size_t k = 0; k < p.coeffs.size(); ++k) {
                                  if (k) os << ' ';
                                  os << short_number(p.coeffs[k]);
                              }
                              os << ')';
                              return os.str();
                          },
                          [](const Tabulated& tab) { return "tabulated(n=" + std::to_string(tab.values.size()) + ")"; },
                      },
                      v_);
}

}  // namespace pathmub
