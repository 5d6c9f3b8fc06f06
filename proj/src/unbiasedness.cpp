#include "pathmub/unbiasedness.hpp"

#include <cmath>
#include <sstream>

#include "pathmub/closed_kernels.hpp"
#include "pathmub/csv.hpp"

namespace pathmub {

namespace {

void require_window(double window) {
    require(window > 0.0 && window <= 1.0, Errc::InvalidArgument, "window must lie in (0, 1]");
}

void require_descending_times(const std::vector<double>& t_list) {
    require(!t_list.empty(), Errc::InvalidArgument, "t_list is empty");
    for (std::size_t i = 0; i < t_list.size(); ++i) {
        require(t_list[i] > 0.0, Errc::NonPositiveTime, "t_list entries must be positive");
        if (i > 0) require(t_list[i] < t_list[i - 1], Errc::InvalidArgument, "t_list must be strictly descending");
    }
}

}  // namespace

bool DeficitCurve::nonincreasing_with_slack(double slack) const {
    for (std::size_t i = 1; i < points.size(); ++i) {
        const double prev = points[i - 1].deficit;
        if (points[i].deficit > prev * (1.0 + slack)) return false;
    }
    return true;
}

std::string deficit_curve_csv(const DeficitCurve& curve) {
    std::ostringstream os;
    os << "t,deficit,window,potential\n";
    for (const auto& p : curve.points)
        os << sci(p.t) << ',' << sci(p.deficit) << ',' << sci(curve.window) << ',' << curve.potential << '\n';
    return os.str();
}

WindowRange central_window(std::size_t n, double window) {
    require_window(window);
    auto size = static_cast<std::size_t>(std::llround(window * static_cast<double>(n)));
    size = std::max<std::size_t>(1, std::min(size, n));
    return {(n - size) / 2, size};
}

double kernel_flatness_deficit(const KernelMatrix& K, double window, double unitarity_tol) {
    const double err = K.unitarity_error();
    if (!(err <= unitarity_tol)) {
        std::ostringstream os;
        os << "max |U'U - I| = " << err << " exceeds " << unitarity_tol;
        fail(Errc::NonUnitaryKernel, os.str());
    }
    const auto w = central_window(K.grid.size(), window);
    const auto first = static_cast<Eigen::Index>(w.first);
    const auto m = static_cast<Eigen::Index>(w.size);
    const Eigen::ArrayXXd mod2 = K.entries.block(first, first, m, m).cwiseAbs2().array();
    const double mean = mod2.mean();
    if (!(mean > 0.0)) return static_cast<double>(w.size) - 1.0;
    return (mod2 / mean - 1.0).abs().maxCoeff();
}

KernelMatrix translation_kernel_matrix(const GridSpec& grid, double t) {
    const std::size_t n = grid.size();
    const std::size_t k = translation_shift_sites(grid, t);
    const auto ni = static_cast<Eigen::Index>(n);
    Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(ni, ni);
    for (std::size_t j = 0; j < n; ++j)
        P(static_cast<Eigen::Index>((j + k) % n), static_cast<Eigen::Index>(j)) = 1.0;
    return KernelMatrix{grid, t, std::move(P)};
}

DeficitCurve asymptotic_mub_sweep(const PotentialSpec& V, const GridSpec& grid,
                                  const std::vector<double>& t_list, const PhysicalUnits& units,
                                  double window) {
    require_descending_times(t_list);
    require_window(window);
    const SpectralOracle oracle(grid, V, units);
    DeficitCurve curve{V.label(), window, {}};
    for (double t : t_list) curve.points.push_back({t, kernel_flatness_deficit(oracle.kernel(t), window)});
    return curve;
}

DeficitCurve adapted_mub_sweep(const PotentialSpec& V, std::size_t n_points,
                               const std::vector<double>& t_list, const PhysicalUnits& units,
                               double window) {
    require_descending_times(t_list);
    require_window(window);
    require(!V.is_tabulated(), Errc::UnsupportedPotential, "tabulated potentials are tied to one grid");
    DeficitCurve curve{V.label() + " self-dual", window, {}};
    for (double t : t_list) {
        const SpectralOracle oracle(self_dual_grid(n_points, t, units), V, units);
        curve.points.push_back({t, kernel_flatness_deficit(oracle.kernel(t), window)});
    }
    return curve;
}

DeficitCurve translation_deficit_curve(const GridSpec& grid, const std::vector<double>& t_list,
                                       double window) {
    require_descending_times(t_list);
    DeficitCurve curve{"translation", window, {}};
    for (double t : t_list)
        curve.points.push_back({t, kernel_flatness_deficit(translation_kernel_matrix(grid, t), window)});
    return curve;
}

ScalingCheck scaling_check(const PotentialSpec& V, double x, double y, double t,
                           const PhysicalUnits& units, const GridSpec& grid) {
    require(t > 0.0, Errc::NonPositiveTime, "scaling check needs t > 0");
    const PotentialSpec Vt = V.time_rescaled(t);  // UnsupportedPotential for tabulated input
    const double root = std::sqrt(t);

    const Complex lhs = SpectralOracle(grid, V, units).kernel(t).interpolate(x, y);

    const GridSpec scaled(grid.size(), grid.x_min() / root, grid.x_max() / root);
    const Complex rhs = SpectralOracle(scaled, Vt, units).kernel(1.0).interpolate(x / root, y / root) / root;

    return {lhs, rhs, std::abs(lhs - rhs) / std::abs(lhs)};
}

ScalingCheck harmonic_scaling_check(double omega, double x, double y, double t, const PhysicalUnits& units) {
    require(t > 0.0, Errc::NonPositiveTime, "scaling check needs t > 0");
    const double root = std::sqrt(t);
    const Complex lhs = harmonic_kernel(x, y, t, omega, units);
    const Complex rhs = harmonic_kernel(x / root, y / root, 1.0, omega * t, units) / root;
    return {lhs, rhs, std::abs(lhs - rhs) / std::abs(lhs)};
}

QuadraticPhaseFit phase_quadratic_fit(const KernelMatrix& K, std::size_t y_index, double window) {
    const std::size_t n = K.grid.size();
    require(y_index < n, Errc::InvalidArgument, "y_index outside the grid");
    const auto w = central_window(n, window);
    require(w.size >= 3, Errc::InvalidArgument, "window too small for a quadratic fit");

    const auto yi = static_cast<Eigen::Index>(y_index);
    double max_mod = 0.0;
    for (std::size_t i = 0; i < w.size; ++i)
        max_mod = std::max(max_mod, std::abs(K.entries(static_cast<Eigen::Index>(w.first + i), yi)));

    std::vector<double> phase(w.size);
    for (std::size_t i = 0; i < w.size; ++i) {
        const Complex z = K.entries(static_cast<Eigen::Index>(w.first + i), yi);
        if (!(std::abs(z) > 1e-6 * max_mod)) {
            std::ostringstream os;
            os << "column modulus vanishes at x = " << K.grid.x(w.first + i);
            fail(Errc::PhaseUnwrapFailure, os.str());
        }
        phase[i] = std::arg(z);
    }
    // cumulative unwrap, jump threshold pi
    for (std::size_t i = 1; i < w.size; ++i) {
        double d = phase[i] - phase[i - 1];
        d -= 2.0 * kPi * std::round(d / (2.0 * kPi));
        phase[i] = phase[i - 1] + d;
    }
    // Increments that change by more than pi between neighbours mean the chirp is aliased.
    for (std::size_t i = 2; i < w.size; ++i) {
        const double curvature = phase[i] - 2.0 * phase[i - 1] + phase[i - 2];
        if (std::abs(curvature) > kPi) {
            std::ostringstream os;
            os << "phase increments jump by " << curvature << " near x = " << K.grid.x(w.first + i);
            fail(Errc::PhaseUnwrapFailure, os.str());
        }
    }

    const auto m = static_cast<Eigen::Index>(w.size);
    Eigen::MatrixXd A(m, 3);
    Eigen::VectorXd b(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double xv = K.grid.x(w.first + static_cast<std::size_t>(i));
        A(i, 0) = 0.5 * xv * xv;
        A(i, 1) = xv;
        A(i, 2) = 1.0;
        b(i) = phase[static_cast<std::size_t>(i)];
    }
    const Eigen::Vector3d c = A.colPivHouseholderQr().solve(b);
    const Eigen::VectorXd r = A * c - b;
    return {c(0), c(1), c(2), std::sqrt(r.squaredNorm() / static_cast<double>(m))};
}

PotentialSpec RiccatiState::implied_potential() const { return PotentialSpec::polynomial({-k3, -k2, -k1}); }

RiccatiState riccati_solve(double k1, double k2, double k3, double t0, double t_end, std::size_t steps,
                           double y, double overflow_guard) {
    require(t0 > 0.0, Errc::NonPositiveTime, "Riccati start time must be positive");
    require(t_end > t0, Errc::InvalidArgument, "Riccati end time must exceed t0");
    require(steps >= 1, Errc::InvalidArgument, "Riccati solve needs at least one step");

    RiccatiState st{k1, k2, k3, y, {}, {}, {}, {}};
    st.t.reserve(steps + 1);
    st.R.reserve(steps + 1);
    st.S.reserve(steps + 1);
    st.P.reserve(steps + 1);

    // Deviations from the free data, rho = R - 1/(2t), sigma = S + y/(2t), q = P - y^2/(4t), start at 0
    // and obey smooth, damped equations in tau = ln t, so t0 may sit close to 0 without loss.
    using State = Eigen::Vector3d;
    const auto rhs = [&](double tau, const State& s) {
        const double t = std::exp(tau);
        const double rho = s(0), sigma = s(1);
        return State(t * (2.0 * k1 - 2.0 * rho * rho) - 2.0 * rho,
                     t * (k2 - 2.0 * rho * sigma) - sigma + rho * y,
                     t * (k3 - sigma * sigma) + sigma * y);
    };

    State s = State::Zero();
    const double tau0 = std::log(t0);
    const double h = (std::log(t_end) - tau0) / static_cast<double>(steps);
    const auto record = [&](double t) {
        st.t.push_back(t);
        st.R.push_back(0.5 / t + s(0));
        st.S.push_back(s(1) - 0.5 * y / t);
        st.P.push_back(s(2) + 0.25 * y * y / t);
    };
    record(t0);
    for (std::size_t i = 1; i <= steps; ++i) {
        const double tau = tau0 + static_cast<double>(i - 1) * h;
        const State a = rhs(tau, s);
        const State b = rhs(tau + 0.5 * h, s + 0.5 * h * a);
        const State c = rhs(tau + 0.5 * h, s + 0.5 * h * b);
        const State d = rhs(tau + h, s + h * c);
        s += (h / 6.0) * (a + 2.0 * b + 2.0 * c + d);
        const double t = i == steps ? t_end : std::exp(tau0 + static_cast<double>(i) * h);
        if (!s.allFinite() || std::abs(0.5 / t + s(0)) > overflow_guard) {
            std::ostringstream os;
            os << "|R| exceeded " << overflow_guard << " near t = " << t;
            fail(Errc::BlowUp, os.str());
        }
        record(t);
    }
    return st;
}

PhysicalUnits riccati_units() { return PhysicalUnits(1.0, 0.5); }

RiccatiConstants riccati_constants(const PotentialSpec& V) {
    const auto c = V.polynomial_coefficients(riccati_units());
    for (std::size_t k = 3; k < c.size(); ++k)
        require(c[k] == 0.0, Errc::UnsupportedPotential, "Riccati phases exist only for at most quadratic V");
    const auto coeff = [&](std::size_t k) { return k < c.size() ? c[k] : 0.0; };
    return {-coeff(2), -coeff(1), -coeff(0)};
}

}  // namespace pathmub
