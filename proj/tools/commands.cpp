#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pathmub/closed_kernels.hpp"
#include "pathmub/csv.hpp"
#include "pathmub/trotter.hpp"
#include "pathmub/unbiasedness.hpp"

#ifndef PATHMUB_VERSION
#define PATHMUB_VERSION "0.0.0"
#endif

namespace pathmub::cli {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& msg) {
    throw ConfigError("schema: " + (path.empty() ? std::string("/") : path) + ": " + msg);
}

const json& member(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) bad(path, "must be an object");
    const auto it = obj.find(key);
    if (it == obj.end()) bad(path + "/" + key, "required field is missing");
    return *it;
}

double number(const json& node, const std::string& path) {
    if (!node.is_number()) bad(path, "must be a number");
    const double v = node.get<double>();
    if (!std::isfinite(v)) bad(path, "must be finite");
    return v;
}

double number(const json& obj, const std::string& key, const std::string& path) {
    return number(member(obj, key, path), path + "/" + key);
}

double number_or(const json& obj, const std::string& key, const std::string& path, double fallback) {
    return obj.contains(key) ? number(obj, key, path) : fallback;
}

double positive(const json& obj, const std::string& key, const std::string& path) {
    const double v = number(obj, key, path);
    if (!(v > 0.0)) bad(path + "/" + key, "must be positive");
    return v;
}

std::size_t count(const json& obj, const std::string& key, const std::string& path, std::size_t min) {
    const json& node = member(obj, key, path);
    if (!node.is_number_unsigned() && !(node.is_number_integer() && node.get<long long>() >= 0))
        bad(path + "/" + key, "must be a nonnegative integer");
    const auto v = node.get<std::size_t>();
    if (v < min) bad(path + "/" + key, "must be at least " + std::to_string(min));
    return v;
}

std::size_t count_or(const json& obj, const std::string& key, const std::string& path, std::size_t min,
                     std::size_t fallback) {
    return obj.contains(key) ? count(obj, key, path, min) : fallback;
}

std::vector<double> number_array(const json& node, const std::string& path) {
    if (!node.is_array()) bad(path, "must be an array");
    std::vector<double> out;
    out.reserve(node.size());
    for (std::size_t i = 0; i < node.size(); ++i) out.push_back(number(node[i], path + "/" + std::to_string(i)));
    return out;
}

std::string string_or(const json& obj, const std::string& key, const std::string& path, const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_string()) bad(path + "/" + key, "must be a string");
    return obj[key].get<std::string>();
}

std::optional<std::uint64_t> effective_seed(const json& config, const GlobalOptions& opts) {
    if (opts.seed) return opts.seed;
    if (config.is_object() && config.contains("seed")) {
        const json& s = config["seed"];
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
            bad("/seed", "must be a 64-bit unsigned integer");
        return s.get<std::uint64_t>();
    }
    return std::nullopt;
}

double effective_window(const json& config, const GlobalOptions& opts) {
    const double w = opts.window ? *opts.window : number_or(config, "window", "", kDefaultWindow);
    if (!(w > 0.0 && w <= 1.0)) bad("/window", "must lie in (0, 1]");
    return w;
}

double effective_tol(const json& config, const GlobalOptions& opts, double fallback) {
    const double tol = opts.tol ? *opts.tol : number_or(config, "tol", "", fallback);
    if (!(tol > 0.0)) bad("/tol", "must be positive");
    return tol;
}

json header_object(const json& config, std::optional<std::uint64_t> seed) {
    json h = {{"tool", "pathmub"}, {"version", PATHMUB_VERSION}, {"config_hash", config_hash(config)}};
    h["seed"] = seed ? json(*seed) : json(nullptr);
    return h;
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

// -- commands ---------------------------------------------------------------

std::string cmd_kernel(const json& config, const GlobalOptions& opts) {
    const auto units = parse_units(config);
    const auto grid = parse_grid(config);
    const auto V = parse_potential(member(config, "potential", ""), "/potential", grid);
    const auto t_list = parse_t_list(config);
    const double window = effective_window(config, opts);
    const std::string method = string_or(config, "method", "", "oracle");
    if (method != "oracle" && method != "trotter" && method != "closed_form")
        bad("/method", "must be one of oracle, trotter, closed_form");
    const std::size_t slices = count_or(config, "slices", "", 1, 256);
    const std::size_t stride = count_or(config, "stride", "", 1, 1);

    // The harmonic kernel is undefined on caustics whichever way it is computed.
    if (const auto* h = std::get_if<PotentialSpec::Harmonic>(&V.variant())) {
        for (double t : t_list)
            if (!(std::abs(std::sin(h->omega * t)) > kDefaultCausticTol)) {
                std::ostringstream os;
                os << "t = " << t << " is a caustic of omega = " << h->omega;
                fail(Errc::CausticSingularity, os.str());
            }
    }
    if (method == "closed_form" && !V.is_free() && !std::holds_alternative<PotentialSpec::Harmonic>(V.variant()))
        bad("/method", "closed_form needs a free or harmonic potential");

    const auto w = central_window(grid.size(), window);
    std::optional<SpectralOracle> oracle;
    if (method == "oracle") oracle.emplace(grid, V, units);

    std::ostringstream os;
    os << "x,y,t,abs,phase,method\n";
    for (double t : t_list) {
        std::optional<KernelMatrix> K;
        if (method == "oracle") K = oracle->kernel(t);
        if (method == "trotter") K = composed_kernel(grid, V, TrotterPlan(t, slices), units);
        for (std::size_t i = 0; i < w.size; i += stride) {
            for (std::size_t j = 0; j < w.size; j += stride) {
                const std::size_t xi = w.first + i;
                const std::size_t yj = w.first + j;
                const double x = grid.x(xi);
                const double y = grid.x(yj);
                Complex value;
                if (K) {
                    value = K->continuum(xi, yj);
                } else if (V.is_free()) {
                    value = free_kernel(x, y, t, units);
                } else {
                    value = harmonic_kernel(x, y, t, std::get<PotentialSpec::Harmonic>(V.variant()).omega, units);
                }
                os << sci(x) << ',' << sci(y) << ',' << sci(t) << ',' << sci(std::abs(value)) << ','
                   << sci(std::arg(value)) << ',' << method << '\n';
            }
        }
    }
    return os.str();
}

std::string cmd_deficit_sweep(const json& config, const GlobalOptions& opts) {
    const auto t_list = parse_t_list(config);
    const double window = effective_window(config, opts);
    const json& pot = member(config, "potential", "");
    if (pot.is_object() && pot.value("type", "") == "translation")
        return deficit_curve_csv(translation_deficit_curve(parse_grid(config), t_list, window));

    const auto units = parse_units(config);
    const auto grid = parse_grid(config);
    const auto V = parse_potential(pot, "/potential", grid);
    const json adapted = config.value("adapted", json(false));
    if (!adapted.is_boolean()) bad("/adapted", "must be a boolean");
    if (adapted.get<bool>()) return deficit_curve_csv(adapted_mub_sweep(V, grid.size(), t_list, units, window));
    return deficit_curve_csv(asymptotic_mub_sweep(V, grid, t_list, units, window));
}

std::string cmd_scaling_check(const json& config, const GlobalOptions&) {
    const auto units = parse_units(config);
    const auto grid = parse_grid(config);
    const auto V = parse_potential(member(config, "potential", ""), "/potential", grid);
    const double x = number(config, "x", "");
    const double y = number(config, "y", "");
    const double t = positive(config, "t", "");
    const json refine = config.value("refine", json(false));
    if (!refine.is_boolean()) bad("/refine", "must be a boolean");

    std::ostringstream os;
    os << "method,n_points,x,y,t,lhs_re,lhs_im,rhs_re,rhs_im,rel_error\n";
    const auto row = [&](const std::string& method, std::size_t n, const ScalingCheck& c) {
        os << method << ',' << n << ',' << sci(x) << ',' << sci(y) << ',' << sci(t) << ',' << sci(c.lhs.real()) << ','
           << sci(c.lhs.imag()) << ',' << sci(c.rhs.real()) << ',' << sci(c.rhs.imag()) << ',' << sci(c.rel_error)
           << '\n';
    };
    if (const auto* h = std::get_if<PotentialSpec::Harmonic>(&V.variant()))
        row("closed_form", 0, harmonic_scaling_check(h->omega, x, y, t, units));
    row("oracle", grid.size(), scaling_check(V, x, y, t, units, grid));
    if (refine.get<bool>()) {
        const GridSpec fine(2 * grid.size(), grid.x_min(), grid.x_max());
        row("oracle", fine.size(), scaling_check(V, x, y, t, units, fine));
    }
    return os.str();
}

json cmd_mub_check(const json& config, const GlobalOptions& opts) {
    const Eigen::MatrixXcd m = parse_matrix(config);
    const double tol = effective_tol(config, opts, 1e-8);
    const double unit_err = unitarity_error(m);
    const double target = 1.0 / std::sqrt(static_cast<double>(m.rows()));
    const double modulus_err = (m.cwiseAbs().array() - target).abs().maxCoeff();
    const double deficit = overlap_deficit(m);
    const bool unitary = unit_err <= tol;
    const bool unimodular = modulus_err <= tol;
    return {{"dim", m.rows()},
            {"unitary", unitary},
            {"unimodular", unimodular},
            {"unitarity_error", unit_err},
            {"deficit", deficit},
            {"tol", tol},
            {"verdict", unitary && deficit <= tol ? "MUB" : "not-MUB"}};
}

json cmd_insertion(const json& config, std::optional<std::uint64_t> seed) {
    if (!seed) bad("/seed", "insertion is randomized; a seed is required");
    const std::size_t dim = count(config, "dim", "", 1);
    const std::size_t n_bases = count(config, "bases", "", 0);
    const Eigen::VectorXcd phi = random_unitary(dim, *seed).col(0);
    const Eigen::VectorXcd psi = random_unitary(dim, *seed + 1).col(0);
    std::vector<Basis> bases;
    for (std::size_t k = 0; k < n_bases; ++k) bases.push_back(Basis::random(dim, *seed + 2 + k));
    const Complex direct = phi.dot(psi);
    const Complex inserted = insertion_identity(phi, psi, bases);
    return {{"dim", dim},
            {"bases", n_bases},
            {"direct", complex_json(direct)},
            {"inserted", complex_json(inserted)},
            {"abs_error", std::abs(direct - inserted)}};
}

std::string cmd_riccati(const json& config, const GlobalOptions&) {
    RiccatiConstants k{};
    if (config.contains("potential")) {
        k = riccati_constants(parse_potential(config["potential"], "/potential", std::nullopt));
    } else {
        k = {number(config, "k1", ""), number(config, "k2", ""), number(config, "k3", "")};
    }
    const double t0 = positive(config, "t0", "");
    const double t_end = number(config, "t_end", "");
    const std::size_t steps = count(config, "steps", "", 1);
    const double y = number_or(config, "y", "", 0.0);
    const auto st = riccati_solve(k.k1, k.k2, k.k3, t0, t_end, steps, y);

    std::ostringstream os;
    os << "t,R,S,P\n";
    for (std::size_t i = 0; i < st.t.size(); ++i)
        os << sci(st.t[i]) << ',' << sci(st.R[i]) << ',' << sci(st.S[i]) << ',' << sci(st.P[i]) << '\n';
    return os.str();
}

std::string cmd_field_phase(const json& config, const GlobalOptions&) {
    const double t = positive(config, "t", "");
    const auto alpha = parse_field_config(member(config, "alpha", ""), "/alpha");
    const auto beta = parse_field_config(member(config, "beta", ""), "/beta");
    if (!(alpha.lattice == beta.lattice)) bad("/beta", "lattice differs from /alpha");
    const auto br = field_transition_phase(alpha, beta, t);

    double max_omega = 0.0;
    for (const auto& m : br.modes) max_omega = std::max(max_omega, m.omega);
    const bool short_time = max_omega * t <= 0.1;

    // Per-mode short-time terms (a^d / N) |a_k - b_k|^2 / t sum to the site-space expression.
    std::vector<double> st_terms;
    if (short_time) {
        const auto& lat = alpha.lattice;
        std::vector<Complex> diff(alpha.values.size());
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = alpha.values[i] - beta.values[i];
        Fft fft(std::vector<int>(static_cast<std::size_t>(lat.dims), static_cast<int>(lat.sites_per_dim)));
        fft.forward(diff);
        const double weight = lat.cell_volume() / static_cast<double>(diff.size()) / t;
        for (const auto& d : diff) st_terms.push_back(weight * std::norm(d));
    }

    std::ostringstream os;
    os << "mode_index,omega,contribution" << (short_time ? ",short_time_contribution" : "") << '\n';
    for (std::size_t k = 0; k < br.modes.size(); ++k) {
        const auto& m = br.modes[k];
        os << m.mode_index << ',' << sci(m.omega) << ',' << sci(m.contribution);
        if (short_time) os << ',' << sci(st_terms[k]);
        os << '\n';
    }
    os << "# total_phase=" << sci(br.total_phase);
    if (short_time) os << " short_time_phase=" << sci(field_short_time_phase(alpha, beta, t));
    os << '\n';
    return os.str();
}

json cmd_rescale_4form(const json& config, const GlobalOptions&) {
    const double s = positive(config, "s", "");
    const double grad = number_or(config, "grad_coeff", "", 0.5);
    const double mass = number_or(config, "mass_coeff", "", 0.5);
    const auto V = config.contains("potential") ? parse_potential(config["potential"], "/potential", std::nullopt)
                                                : PotentialSpec::free();
    const auto r = rescale_lagrangian_4form(s, grad, mass, V);
    return {{"s", s},
            {"kinetic_coeff", r.kinetic_coeff},
            {"grad_coeff", r.grad_coeff},
            {"mass_coeff", r.mass_coeff},
            {"potential_coeffs", r.potential.polynomial_coefficients(PhysicalUnits{})}};
}

std::string dispatch(const std::string& name, const json& config, const GlobalOptions& opts) {
    if (!config.is_object()) bad("", "config must be a JSON object");
    const auto seed = effective_seed(config, opts);
    const std::string csv_header = header_line(config, seed) + "\n";
    const auto with_header = [&](json body) {
        body["header"] = header_object(config, seed);
        return dump_json(body);
    };

    if (name == "kernel") return csv_header + cmd_kernel(config, opts);
    if (name == "deficit-sweep") return csv_header + cmd_deficit_sweep(config, opts);
    if (name == "scaling-check") return csv_header + cmd_scaling_check(config, opts);
    if (name == "mub-check") return with_header(cmd_mub_check(config, opts));
    if (name == "insertion") return with_header(cmd_insertion(config, seed));
    if (name == "riccati") return csv_header + cmd_riccati(config, opts);
    if (name == "field-phase") return csv_header + cmd_field_phase(config, opts);
    if (name == "rescale-4form") return with_header(cmd_rescale_4form(config, opts));
    throw ConfigError("unknown command '" + name + "'");
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string config_hash(const json& config) { return hex64(fnv1a64(config.dump())); }

std::string header_line(const json& config, std::optional<std::uint64_t> seed) {
    return std::string("# pathmub ") + PATHMUB_VERSION + " config_hash=" + config_hash(config) +
           " seed=" + (seed ? std::to_string(*seed) : std::string("none"));
}

PhysicalUnits parse_units(const json& config) {
    if (!config.contains("units")) return PhysicalUnits{};
    const json& u = config["units"];
    const double hbar = number_or(u, "hbar", "/units", 1.0);
    const double mass = number_or(u, "mass", "/units", 1.0);
    if (!(hbar > 0.0)) bad("/units/hbar", "must be positive");
    if (!(mass > 0.0)) bad("/units/mass", "must be positive");
    return PhysicalUnits(hbar, mass);
}

GridSpec parse_grid(const json& config) {
    const json& g = member(config, "grid", "");
    const std::size_t n = count(g, "n_points", "/grid", 8);
    const double lo = number(g, "x_min", "/grid");
    const double hi = number(g, "x_max", "/grid");
    if (!(hi > lo)) bad("/grid/x_max", "must exceed x_min");
    return GridSpec(n, lo, hi);
}

PotentialSpec parse_potential(const json& node, const std::string& path, const std::optional<GridSpec>& grid) {
    if (!node.is_object()) bad(path, "must be an object");
    const std::string type = string_or(node, "type", path, "");
    if (type == "free") return PotentialSpec::free();
    if (type == "harmonic") return PotentialSpec::harmonic(positive(node, "omega", path));
    if (type == "polynomial") return PotentialSpec::polynomial(number_array(member(node, "coeffs", path), path + "/coeffs"));
    if (type == "tabulated") {
        if (!grid) bad(path, "tabulated potentials need a grid");
        return PotentialSpec::tabulated(*grid, number_array(member(node, "values", path), path + "/values"));
    }
    bad(path + "/type", "must be one of free, harmonic, polynomial, tabulated");
}

std::vector<double> parse_t_list(const json& config) {
    const json& sweep = member(config, "sweep", "");
    const auto t = number_array(member(sweep, "t_list", "/sweep"), "/sweep/t_list");
    if (t.empty()) bad("/sweep/t_list", "must be a non-empty array");
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!(t[i] > 0.0)) bad("/sweep/t_list/" + std::to_string(i), "must be positive");
        if (i > 0 && !(t[i] < t[i - 1])) bad("/sweep/t_list/" + std::to_string(i), "t_list must be strictly descending");
    }
    return t;
}

FieldConfig parse_field_config(const json& node, const std::string& path) {
    LatticeConfig lat;
    const std::size_t dims = count(node, "dims", path, 1);
    if (dims != 1 && dims != 3) bad(path + "/dims", "must be 1 or 3");
    lat.dims = static_cast<int>(dims);
    lat.sites_per_dim = count(node, "sites", path, 2);
    lat.spacing = positive(node, "spacing", path);
    lat.field_mass = number_or(node, "mass", path, 0.0);
    if (lat.field_mass < 0.0) bad(path + "/mass", "must be nonnegative");
    auto values = number_array(member(node, "values", path), path + "/values");
    try {
        return FieldConfig(lat, std::move(values));
    } catch (const Error& e) {
        bad(path, e.what());
    }
}

json field_config_json(const FieldConfig& field) {
    return {{"dims", field.lattice.dims},
            {"sites", field.lattice.sites_per_dim},
            {"spacing", field.lattice.spacing},
            {"mass", field.lattice.field_mass},
            {"values", field.values}};
}

Eigen::MatrixXcd parse_matrix(const json& node) {
    const std::size_t dim = count(node, "dim", "", 1);
    const json& re = member(node, "re", "");
    const json& im = node.contains("im") ? node["im"] : json();
    if (!re.is_array() || re.size() != dim) bad("/re", "must hold dim rows");
    if (!im.is_null() && (!im.is_array() || im.size() != dim)) bad("/im", "must hold dim rows");
    const auto d = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXcd m(d, d);
    for (std::size_t a = 0; a < dim; ++a) {
        const auto row_re = number_array(re[a], "/re/" + std::to_string(a));
        if (row_re.size() != dim) bad("/re/" + std::to_string(a), "must hold dim entries");
        std::vector<double> row_im(dim, 0.0);
        if (!im.is_null()) {
            row_im = number_array(im[a], "/im/" + std::to_string(a));
            if (row_im.size() != dim) bad("/im/" + std::to_string(a), "must hold dim entries");
        }
        for (std::size_t b = 0; b < dim; ++b)
            m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = {row_re[b], row_im[b]};
    }
    return m;
}

json matrix_json(const Eigen::MatrixXcd& m) {
    json re = json::array();
    json im = json::array();
    for (Eigen::Index a = 0; a < m.rows(); ++a) {
        json r = json::array();
        json i = json::array();
        for (Eigen::Index b = 0; b < m.cols(); ++b) {
            r.push_back(m(a, b).real());
            i.push_back(m(a, b).imag());
        }
        re.push_back(std::move(r));
        im.push_back(std::move(i));
    }
    return {{"dim", m.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {"kernel",   "deficit-sweep", "scaling-check", "mub-check",
                                                   "insertion", "riccati",       "field-phase",   "rescale-4form"};
    return names;
}

CommandResult run_command(const std::string& name, const json& config, const GlobalOptions& opts) {
    CommandResult r;
    try {
        r.output = dispatch(name, config, opts);
    } catch (const ConfigError& e) {
        r = {kExitConfig, {}, e.what()};
    } catch (const ModeCausticError& e) {
        r = {kExitNumeric, {}, e.what()};
    } catch (const Error& e) {
        r = {is_numeric_domain(e.code()) ? kExitNumeric : kExitConfig, {}, e.what()};
    } catch (const json::exception& e) {
        r = {kExitConfig, {}, std::string("schema: ") + e.what()};
    } catch (const std::exception& e) {
        r = {kExitNumeric, {}, e.what()};
    }
    return r;
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Propagator kernels, mutual unbiasedness checks and lattice field phases"};
    app.set_version_flag("--version", std::string(PATHMUB_VERSION));
    GlobalOptions opts;
    std::string config_path;
    std::string output_path;
    std::uint64_t seed = 0;
    double window = 0.0;
    double tol = 0.0;
    auto* o_config = app.add_option("--config", config_path, "JSON config (for mub-check: the matrix file)");
    auto* o_output = app.add_option("--output", output_path, "write the result here instead of stdout");
    auto* o_seed = app.add_option("--seed", seed, "64-bit seed, overrides the config");
    auto* o_window = app.add_option("--window", window, "central window fraction in (0, 1]");
    auto* o_tol = app.add_option("--tol", tol, "tolerance for mub-check");
    app.require_subcommand(1);
    for (const auto& name : command_names()) app.add_subcommand(name)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }
    if (*o_output) opts.output = output_path;
    if (*o_seed) opts.seed = seed;
    if (*o_window) opts.window = window;
    if (*o_tol) opts.tol = tol;
    const std::string name = app.get_subcommands().front()->get_name();

    if (!*o_config) {
        err << "schema: --config is required\n";
        return kExitConfig;
    }
    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
        err << "cannot open config " << config_path << "\n";
        return kExitConfig;
    }
    json config;
    try {
        config = json::parse(in);
    } catch (const json::parse_error& e) {
        err << "malformed JSON in " << config_path << ": " << e.what() << "\n";
        return kExitConfig;
    }

    const CommandResult r = run_command(name, config, opts);
    if (r.exit_code != kExitOk) {
        err << "pathmub " << name << ": " << r.diagnostic << "\n";
        return r.exit_code;
    }

    std::optional<std::string> target = opts.output;
    if (!target && config.is_object() && config.contains("output_path") && config["output_path"].is_string())
        target = config["output_path"].get<std::string>();
    if (!target) {
        out << r.output;
        return kExitOk;
    }
    std::ofstream file(*target, std::ios::binary | std::ios::trunc);
    file << r.output;
    if (!file) {
        err << "cannot write " << *target << "\n";
        return kExitConfig;
    }
    return kExitOk;
}

}  // namespace pathmub::cli
