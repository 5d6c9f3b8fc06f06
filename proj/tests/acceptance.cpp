// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "pathmub/closed_kernels.hpp"
#include "pathmub/field_lattice.hpp"
#include "pathmub/mub_finite.hpp"
#include "pathmub/trotter.hpp"
#include "pathmub/unbiasedness.hpp"

using namespace pathmub;

namespace {

struct Verdict {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string curve_text(const DeficitCurve& c) {
    std::string s = "[";
    for (std::size_t i = 0; i < c.points.size(); ++i) s += (i ? " " : "") + fmt("%.3g", c.points[i].deficit);
    return s + "]";
}

// relative Frobenius error of K / h against the closed form on the central window
double window_error(const KernelMatrix& K, const std::function<Complex(double, double)>& exact, double window) {
    const auto w = central_window(K.grid.size(), window);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = w.first; i < w.first + w.size; ++i)
        for (std::size_t j = w.first; j < w.first + w.size; ++j) {
            const Complex e = exact(K.grid.x(i), K.grid.x(j));
            num += std::norm(K.continuum(i, j) - e);
            den += std::norm(e);
        }
    return std::sqrt(num / den);
}

Verdict criterion1() {
    const GridSpec g(512, -10.0, 10.0);
    const PhysicalUnits u(1.0, 1.0);
    const auto V = PotentialSpec::harmonic(1.0);
    const double t = 0.5;
    const auto exact = [&](double x, double y) { return harmonic_kernel(x, y, t, 1.0, u); };
    const double e32 = window_error(composed_kernel(g, V, TrotterPlan(t, 32), u), exact, kDefaultWindow);
    const double e256 = window_error(composed_kernel(g, V, TrotterPlan(t, 256), u), exact, kDefaultWindow);
    const bool pass = e256 <= 1e-3 && e32 / e256 >= 4.0;
    return {pass, "err(N=32)=" + fmt("%.3e", e32) + " err(N=256)=" + fmt("%.3e", e256) +
                      " ratio=" + fmt("%.3f", e32 / e256)};
}

Verdict criterion2() {
    const PhysicalUnits u(1.0, 1.0);
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> pos(-10.0, 10.0);
    const double t = 0.7;
    const double free0 = std::abs(free_kernel(0.0, 0.0, t, u));
    const double harm0 = std::abs(harmonic_kernel(0.0, 0.0, t, 1.0, u));
    double free_dev = 0.0;
    double harm_dev = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double x = pos(rng);
        const double y = pos(rng);
        free_dev = std::max(free_dev, std::abs(std::abs(free_kernel(x, y, t, u)) - free0) / free0);
        harm_dev = std::max(harm_dev, std::abs(std::abs(harmonic_kernel(x, y, t, 1.0, u)) - harm0) / harm0);
    }
    return {free_dev <= 1e-14 && harm_dev <= 1e-14,
            "max relative modulus spread free=" + fmt("%.2e", free_dev) + " harmonic=" + fmt("%.2e", harm_dev)};
}

Verdict criterion3() {
    const GridSpec g(512, -8.0, 8.0);
    const PhysicalUnits u(1.0, 1.0);
    const std::vector<double> ts{0.8, 0.4, 0.2, 0.1, 0.05};
    const auto quartic = asymptotic_mub_sweep(PotentialSpec::polynomial({0, 0, 0, 0, 1}), g, ts, u);
    const auto free = asymptotic_mub_sweep(PotentialSpec::free(), g, ts, u);
    const auto harm = asymptotic_mub_sweep(PotentialSpec::harmonic(1.0), g, ts, u);
    const auto trans = translation_deficit_curve(g, ts);
    const double mw = static_cast<double>(central_window(g.size(), kDefaultWindow).size);

    const bool mono = quartic.nonincreasing_with_slack(0.02);
    bool flat = true;
    for (const auto* c : {&free, &harm})
        for (const auto& p : c->points) flat = flat && p.deficit <= 0.05;
    bool control = true;
    for (const auto& p : trans.points) control = control && p.deficit >= mw - 1.0;
    return {mono && flat && control, std::string("quartic nonincreasing=") + (mono ? "yes " : "no ") + curve_text(quartic) +
                                         "; free " + curve_text(free) + "; harmonic " + curve_text(harm) +
                                         "; translation>=M_w-1: " + (control ? "yes" : "no")};
}

Verdict criterion4() {
    const PhysicalUnits u(1.0, 1.0);
    double closed = 0.0;
    for (double t : {0.05, 0.3, 0.5, 1.0, 2.0})
        for (double x : {-1.5, 0.3, 2.0}) closed = std::max(closed, harmonic_scaling_check(1.0, x, -0.4, t, u).rel_error);

    const auto V = PotentialSpec::polynomial({0, 0, 0, 0, 1});
    const double coarse = scaling_check(V, 0.3, -0.2, 0.5, u, GridSpec(256, -8.0, 8.0)).rel_error;
    const double fine = scaling_check(V, 0.3, -0.2, 0.5, u, GridSpec(512, -8.0, 8.0)).rel_error;
    const double ratio = fine > 0.0 ? coarse / fine : INFINITY;
    const bool pass = closed <= 1e-10 && fine <= 1e-2 && coarse <= 1e-2 && ratio >= 2.0;
    return {pass, "closed form max rel=" + fmt("%.2e", closed) + " quartic rel n=256:" + fmt("%.2e", coarse) +
                      " n=512:" + fmt("%.2e", fine) + " refinement ratio=" + fmt("%.3g", ratio)};
}

Verdict criterion5() {
    const PhysicalUnits u(1.0, 1.0);
    const double t = 0.5;
    const auto g = self_dual_grid(2048, t, u);
    const std::size_t y = g.size() / 2;
    const double window = 0.25;
    const auto harm = phase_quadratic_fit(spectral_oracle_kernel(g, PotentialSpec::harmonic(1.0), t, u), y, window);
    double quartic_res = INFINITY;
    std::string quartic_note;
    try {
        quartic_res =
            phase_quadratic_fit(spectral_oracle_kernel(g, PotentialSpec::polynomial({0, 0, 0, 0, 1}), t, u), y, window)
                .residual;
        quartic_note = fmt("%.3e", quartic_res);
    } catch (const Error& e) {
        quartic_note = std::string("unwrap failed (") + e.what() + ")";
    }

    const auto st = riccati_solve(-1.0, 0.0, 0.0, 1e-7, 0.7, 6000);
    double ric = 0.0;
    for (std::size_t i = 0; i < st.t.size(); ++i)
        if (st.t[i] >= 0.05) ric = std::max(ric, std::abs(st.R[i] - 1.0 / std::tan(2.0 * st.t[i])));

    const bool pass = harm.residual <= 1e-3 && quartic_res >= 10.0 * harm.residual && ric <= 1e-6;
    return {pass, "harmonic residual=" + fmt("%.3e", harm.residual) + " (R=" + fmt("%.7f", harm.R) +
                      ") quartic residual=" + quartic_note + " riccati max|R-cot 2t|=" + fmt("%.2e", ric)};
}

Verdict criterion6() {
    double fourier = 0.0;
    for (std::size_t m = 2; m <= 64; ++m)
        fourier = std::max(fourier, mub_deficit(Basis::identity(m), fourier_basis(m)));

    const Eigen::VectorXcd phi = random_unitary(8, 9001).col(0);
    const Eigen::VectorXcd psi = random_unitary(8, 9002).col(0);
    std::vector<Basis> bases;
    for (std::uint64_t s = 0; s < 5; ++s) bases.push_back(Basis::random(8, 100 + s));
    const double insertion = std::abs(insertion_identity(phi, psi, bases) - phi.dot(psi));

    const double tol = 1e-8;
    int counterexamples = 0;
    int unbiased = 0;
    for (std::uint64_t i = 0; i < 100; ++i) {
        const std::size_t m = 2 + i % 9;
        Basis a = Basis::identity(m);
        Basis b = fourier_basis(m);
        if (i % 2 == 0) {
            const auto U = random_unitary(m, 500 + i);
            a = a.transformed(U);
            b = b.transformed(U);
        } else {
            a = Basis::random(m, 700 + i);
            b = Basis::random(m, 900 + i);
        }
        const bool had = is_hadamard(overlap_matrix(a, b), tol);
        const bool mub = mub_deficit(a, b) <= tol;
        unbiased += mub;
        counterexamples += had != mub;
    }
    const bool pass = fourier <= 1e-12 && insertion <= 1e-10 && counterexamples == 0;
    return {pass, "Fourier deficit max=" + fmt("%.2e", fourier) + " insertion error=" + fmt("%.2e", insertion) +
                      " pairs unbiased=" + std::to_string(unbiased) + "/100 counterexamples=" +
                      std::to_string(counterexamples)};
}

Verdict criterion7() {
    const double comp = std::max(mode_composition_check(1.0, 0.4, 0.4), mode_composition_check(2.0, 0.2, 0.3));

    LatticeConfig lat;
    lat.dims = 1;
    lat.sites_per_dim = 16;
    lat.spacing = 0.5;
    lat.field_mass = 1.0;
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    const auto smooth = [&] {
        std::vector<double> v(16);
        const double a0 = amp(rng), a1 = amp(rng), b1 = amp(rng), a2 = amp(rng);
        for (std::size_t j = 0; j < 16; ++j) {
            const double th = 2 * kPi * static_cast<double>(j) / 16.0;
            v[j] = a0 + a1 * std::cos(th) + b1 * std::sin(th) + a2 * std::cos(2 * th);
        }
        return FieldConfig(lat, v);
    };
    const auto alpha = smooth();
    const auto beta = smooth();
    const double t = 1e-3;
    const double full = field_transition_phase(alpha, beta, t).total_phase;
    const double st = field_short_time_phase(alpha, beta, t);
    const double short_rel = std::abs(full - st) / std::abs(st);

    const auto V = PotentialSpec::polynomial({0.2, -0.5, 1.0, 0.3, 2.0});
    const auto one = rescale_lagrangian_4form(1.0, 0.5, 0.5, V);
    const auto direct = rescale_lagrangian_4form(0.35, 0.5, 0.5, V);
    const auto first = rescale_lagrangian_4form(0.7, 0.5, 0.5, V);
    const auto twice = rescale_lagrangian_4form(0.5, first.grad_coeff, first.mass_coeff, first.potential);
    const auto cd = direct.potential.polynomial_coefficients(PhysicalUnits{});
    const auto ct = twice.potential.polynomial_coefficients(PhysicalUnits{});
    double law = std::max({std::abs(direct.grad_coeff - twice.grad_coeff), std::abs(direct.mass_coeff - twice.mass_coeff),
                           std::abs(direct.kinetic_coeff - twice.kinetic_coeff)});
    for (std::size_t k = 0; k < cd.size(); ++k) law = std::max(law, std::abs(cd[k] - ct[k]));

    const double s = 1e-3;
    const auto small = rescale_lagrangian_4form(s, 0.5, 0.5, V);
    const auto c1 = one.potential.polynomial_coefficients(PhysicalUnits{});
    const auto cs = small.potential.polynomial_coefficients(PhysicalUnits{});
    bool decay = small.kinetic_coeff == 0.5 && small.grad_coeff <= 1e-5 * one.grad_coeff &&
                 small.mass_coeff <= 1e-5 * one.mass_coeff;
    for (std::size_t k = 0; k < c1.size(); ++k) {
        const double expected = c1[k] * std::pow(s, 1.0 + 0.5 * static_cast<double>(k));
        decay = decay && std::abs(cs[k] - expected) <= 1e-12 * std::abs(c1[k]) && std::abs(cs[k]) <= s * std::abs(c1[k]);
    }

    const bool pass = comp <= 1e-6 && short_rel <= 1e-2 && law <= 1e-12 && decay;
    return {pass, "composition dev=" + fmt("%.2e", comp) + " short-time rel=" + fmt("%.2e", short_rel) +
                      " rescale law dev=" + fmt("%.1e", law) + " s->0 decay: " + (decay ? "yes" : "no")};
}

Verdict criterion8() {
    const std::size_t n = 1024;
    const auto f = SampledFunction::sample([](double t) { return std::exp(std::sin(t)); }, 0.0, 1.0, n + 1);
    // trapezoid sum of g = sin written out here
    const double h = 1.0 / static_cast<double>(n);
    double integral = 0.5 * (std::sin(0.0) + std::sin(1.0));
    for (std::size_t i = 1; i < n; ++i) integral += std::sin(static_cast<double>(i) * h);
    integral *= h;
    const double diff = std::abs(continuous_product(f, n) - std::exp(integral));
    return {diff <= 1e-8, "|product - exp(int g)|=" + fmt("%.2e", diff)};
}

Verdict criterion9() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "pathmub_acceptance";
    fs::create_directories(dir);
    const double L = std::sqrt(2 * kPi * 0.4 * 128);
    const nlohmann::json kernel = {{"units", {{"hbar", 1.0}, {"mass", 1.0}}},
                                   {"grid", {{"n_points", 128}, {"x_min", -L / 2}, {"x_max", L / 2}}},
                                   {"potential", {{"type", "polynomial"}, {"coeffs", {0, 0, 0.5, 0, 0.1}}}},
                                   {"sweep", {{"t_list", {0.4, 0.2}}}},
                                   {"method", "trotter"},
                                   {"slices", 32},
                                   {"seed", 12345}};
    const nlohmann::json insertion = {{"dim", 8}, {"bases", 5}, {"seed", 12345}};
    bool same = true;
    std::string detail;
    for (const auto& [name, cfg] : {std::pair<std::string, nlohmann::json>{"kernel", kernel}, {"insertion", insertion}}) {
        const fs::path config = dir / (name + ".json");
        std::ofstream(config) << cfg.dump(2);
        std::string outputs[2];
        for (int run = 0; run < 2; ++run) {
            const fs::path out = dir / (name + std::to_string(run) + ".out");
            fs::remove(out);
            const std::string cmd = std::string(PATHMUB_CLI_PATH) + " " + name + " --config " + config.string() +
                                    " --seed 12345 --output " + out.string();
            if (std::system(cmd.c_str()) != 0) return {false, name + " run failed"};
            std::ifstream in(out, std::ios::binary);
            std::ostringstream ss;
            ss << in.rdbuf();
            outputs[run] = ss.str();
        }
        same = same && !outputs[0].empty() && outputs[0] == outputs[1];
        detail += name + ": " + std::to_string(outputs[0].size()) + " bytes " +
                  (outputs[0] == outputs[1] ? "identical" : "DIFFER") + "; ";
    }
    return {same, detail};
}

}  // namespace

int main() {
    const std::vector<std::pair<int, std::function<Verdict()>>> criteria = {
        {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4}, {5, criterion5},
        {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9}};
    int failures = 0;
    for (const auto& [id, run] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v{false, ""};
        try {
            v = run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %d: %s (%.1f s) %s\n", id, v.pass ? "PASS" : "FAIL", secs, v.detail.c_str());
        std::fflush(stdout);
        failures += !v.pass;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
