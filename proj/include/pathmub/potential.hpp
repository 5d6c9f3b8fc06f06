#pragma once

#include <string>
#include <variant>
#include <vector>

#include "pathmub/numerics.hpp"

namespace pathmub {

/// V(x) description. Harmonic means m omega^2 x^2 / 2 with the mass taken from PhysicalUnits.
class PotentialSpec {
public:
    struct Free {};
    struct Harmonic {
        double omega;
    };
    struct Polynomial {
        std::vector<double> coeffs;  // ascending degree
    };
    struct Tabulated {
        GridSpec grid;
        std::vector<double> values;
    };

    using Variant = std::variant<Free, Harmonic, Polynomial, Tabulated>;

    static constexpr std::size_t kMaxDegree = 8;

    static PotentialSpec free() { return PotentialSpec(Free{}); }
    static PotentialSpec harmonic(double omega);
    static PotentialSpec polynomial(std::vector<double> coeffs);
    static PotentialSpec tabulated(GridSpec grid, std::vector<double> values);

    const Variant& variant() const noexcept { return v_; }
    bool is_free() const noexcept { return std::holds_alternative<Free>(v_); }
    bool is_tabulated() const noexcept { return std::holds_alternative<Tabulated>(v_); }

    double operator()(double x, const PhysicalUnits& units) const;

    /// Values on every node of `grid`; a tabulated potential must live on that grid.
    std::vector<double> sample(const GridSpec& grid, const PhysicalUnits& units) const;

    /// Ascending polynomial coefficients; UnsupportedPotential for tabulated input.
    std::vector<double> polynomial_coefficients(const PhysicalUnits& units) const;

    /// V_t(x) = t V(sqrt(t) x). Harmonic(omega) maps to Harmonic(omega t).
    PotentialSpec time_rescaled(double t) const;

    /// Short label used in CSV output, e.g. "harmonic(omega=1)".
    std::string label() const;

private:
    explicit PotentialSpec(Variant v) : v_(std::move(v)) {}

    Variant v_;
};

/// Horner evaluation of ascending coefficients.
double evaluate_polynomial(const std::vector<double>& coeffs, double x) noexcept;

}  // namespace pathmub
