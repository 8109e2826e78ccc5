#include "ncover/cli.hpp"

#include "ncover/competitors.hpp"
#include "ncover/energy.hpp"
#include "ncover/errors.hpp"
#include "ncover/fourier.hpp"
#include "ncover/geometry.hpp"
#include "ncover/integrand.hpp"
#include "ncover/io.hpp"
#include "ncover/maps.hpp"
#include "ncover/parallel.hpp"
#include "ncover/pressure.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace ncover::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

PolarGrid resolve_grid(const RunConfig& cfg, const std::string& fallback) {
    const auto [nr, nt] = parse_grid_spec(cfg.grid.empty() ? fallback : cfg.grid);
    return make_grid(nr, nt);
}

int require_n(const RunConfig& cfg) {
    if (!cfg.N) throw UsageError(cfg.command + ": --N is required");
    return *cfg.N;
}

double require_a(const RunConfig& cfg) {
    if (!cfg.a) throw UsageError(cfg.command + ": --a is required");
    return *cfg.a;
}

void write_output(const RunConfig& cfg, const std::string& name, const std::string& body) {
    if (cfg.out.empty()) return;
    std::filesystem::create_directories(cfg.out);
    const std::filesystem::path path = std::filesystem::path(cfg.out) / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ParameterError("cannot write " + path.string());
    os << body;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void emit(const RunConfig& cfg, std::ostream& out, const json& report, const std::string& table) {
    if (cfg.format == "csv" && !table.empty())
        out << table;
    else
        out << dump(report);
}

json interval_json(const OpenInterval& r) { return json::array({r.lo, r.hi}); }

json pressure_json(const PressureSolution& p) {
    if (const auto* closed = std::get_if<ClosedFormPressure>(&p))
        return {{"type", "closed_form"}, {"c", closed->c}, {"k", closed->k}};
    const auto& sampled = std::get<SampledPressure>(p);
    return {{"type", "sampled"}, {"c", sampled.c()}, {"k", sampled.k()}};
}

// Pressure of u_N from the pointwise solve on a single-ring-pair grid; the
// N-cover gradient is R-independent so the radial resolution is irrelevant.
PressureSolution ncover_pressure(const QuadraticIntegrand& m, int winding, int angular_count) {
    const PolarGrid grid = make_grid(2, angular_count);
    return reconstruct_lambda(compute_pressure_gradient(m, OneHomogeneousMap::ncover(winding), grid));
}

int cmd_certify(const RunConfig& cfg, std::ostream& out) {
    const int n = require_n(cfg);
    const double a = require_a(cfg);
    const QuadraticIntegrand m = QuadraticIntegrand::constant_case(a, cfg.nu);
    const PolarGrid grid = resolve_grid(cfg, "2x64");
    const Certificate cert = certify(ncover_pressure_gradient(m, n, grid), cfg.nu, parse_certificate_mode(cfg.mode));
    const json report = {{"N", n},
                         {"a", a},
                         {"nu", cfg.nu},
                         {"mode", to_string(cert.mode)},
                         {"bound", cert.bound},
                         {"measured", cert.measured},
                         {"verdict", to_string(cert.verdict)},
                         {"admissible_range", interval_json(admissible_a_range(n))}};
    std::ostringstream table;
    table << "N,a,nu,mode,bound,measured,verdict\n"
          << n << ',' << format_double(a) << ',' << format_double(cfg.nu) << ',' << to_string(cert.mode) << ','
          << format_double(cert.bound) << ',' << format_double(cert.measured) << ',' << to_string(cert.verdict)
          << '\n';
    write_output(cfg, "certificate.json", dump(report));
    emit(cfg, out, report, table.str());
    return cert.verdict == Verdict::fail ? kExitVerification : kExitOk;
}

int cmd_energy(const RunConfig& cfg, std::ostream& out) {
    const int n = require_n(cfg);
    const double a = require_a(cfg);
    const EnergyReport r = min_energy_report(n, a, cfg.nu, resolve_grid(cfg, "128x256"));
    json report = {{"N", r.N},
                   {"a", r.a},
                   {"nu", r.nu},
                   {"grid", r.grid},
                   {"E_quadrature", r.E_quadrature},
                   {"E_direct_form", r.E_direct_form},
                   {"E_paper_form", r.E_paper_form},
                   {"rel_err_direct", r.rel_err_direct},
                   {"rel_err_paper", r.rel_err_paper},
                   {"admissible", r.admissible},
                   {"forms_disagree", r.forms_disagree}};
    if (r.forms_disagree)
        report["note"] = "closed forms nu*pi*(N+a/N) and nu*pi/2*(1+a)*(1/N+N) differ for a != 1; both are reported";
    write_output(cfg, "energy.json", dump(report));
    emit(cfg, out, report, "");
    return r.rel_err_direct <= 1e-8 ? kExitOk : kExitVerification;
}

int cmd_pressure(const RunConfig& cfg, std::ostream& out) {
    const int n = require_n(cfg);
    const PolarGrid grid = resolve_grid(cfg, "4x64");
    std::optional<QuadraticIntegrand> m;
    double nu = cfg.nu;
    json report = {{"N", n}, {"grid", grid.descriptor()}};
    if (!cfg.table.empty()) {
        if (!cfg.nu_given) {
            // Coercivity constant defaults to the smallest tabulated coefficient.
            const CsvTable t = read_csv(cfg.table, {"theta", "alpha", "beta", "gamma", "delta"});
            nu = INFINITY;
            for (const char* col : {"alpha", "beta", "gamma", "delta"})
                for (double v : t.values(col)) nu = std::min(nu, v);
        }
        m = load_coefficient_table(cfg.table, nu);
        report["table"] = cfg.table;
    } else {
        const double a = require_a(cfg);
        m = QuadraticIntegrand::constant_case(a, nu);
        report["a"] = a;
    }
    report["nu"] = nu;
    const OneHomogeneousMap u = OneHomogeneousMap::ncover(n);
    const PressureGradient pg = compute_pressure_gradient(*m, u, grid);
    const PressureGradient explicit_pg = ncover_pressure_gradient(*m, n, grid);
    double diff = 0.0;
    for (std::size_t k = 0; k < pg.s_values().size(); ++k) {
        diff = std::max(diff, std::abs(pg.s_values()[k] - explicit_pg.s_values()[k]));
        diff = std::max(diff, std::abs(pg.t_values()[k] - explicit_pg.t_values()[k]));
    }
    report["solver_vs_closed_form_max_diff"] = diff;
    report["max_abs_s"] = pg.max_abs_s();
    report["max_abs_t"] = pg.max_abs_t();
    try {
        const PressureSolution lambda = reconstruct_lambda(pg);
        report["lambda"] = pressure_json(lambda);
        report["sobolev"] = {{"q", cfg.q},
                             {"quadrature", sobolev_norm_pressure_quadrature(lambda, cfg.q, grid)}};
        if (const auto* closed = std::get_if<ClosedFormPressure>(&lambda))
            report["sobolev"]["closed_form"] = sobolev_norm_pressure(*closed, cfg.q);
    } catch (const CompatibilityError& e) {
        report["lambda"] = nullptr;
        report["compatibility"] = e.what();
    }
    std::ostringstream table;
    write_pressure_gradient_csv(table, pg);
    write_output(cfg, "pressure_gradient.csv", table.str());
    write_output(cfg, "pressure.json", dump(report));
    emit(cfg, out, report, table.str());
    return diff <= 1e-10 ? kExitOk : kExitVerification;
}

int cmd_stationarity(const RunConfig& cfg, std::ostream& out) {
    const int n = require_n(cfg);
    const double a = require_a(cfg);
    const PolarGrid grid = resolve_grid(cfg, "256x512");
    const QuadraticIntegrand m = QuadraticIntegrand::constant_case(a, cfg.nu);
    const PressureSolution lambda =
        scale_log_coefficient(ncover_pressure(m, n, grid.angular_count()), cfg.perturb);
    const StationarityResult r = stationarity_residual(m, OneHomogeneousMap::ncover(n), lambda,
                                                       bump_test_fields(grid, cfg.tests, cfg.seed));
    const bool pass = r.max_residual <= cfg.tolerance;
    const json report = {{"N", n},           {"a", a},
                         {"nu", cfg.nu},     {"grid", grid.descriptor()},
                         {"tests", cfg.tests}, {"seed", cfg.seed},
                         {"perturb", cfg.perturb}, {"lambda", pressure_json(lambda)},
                         {"max_residual", r.max_residual}, {"tolerance", cfg.tolerance},
                         {"pass", pass}};
    std::ostringstream table;
    table << "test_id,residual\n";
    for (std::size_t k = 0; k < r.residuals.size(); ++k) table << k << ',' << format_double(r.residuals[k]) << '\n';
    write_output(cfg, "stationarity.json", dump(report));
    write_output(cfg, "stationarity.csv", table.str());
    emit(cfg, out, report, table.str());
    return pass ? kExitOk : kExitVerification;
}

int cmd_probe(const RunConfig& cfg, std::ostream& out) {
    const int n = require_n(cfg);
    const double a = require_a(cfg);
    const PolarGrid grid = resolve_grid(cfg, "128x256");
    const ProbeReport r = probe_minimality(n, a, cfg.nu, cfg.samples, cfg.amplitude, cfg.seed, grid);
    const bool pass = r.min_gap_ok && r.max_residual <= cfg.tolerance;
    json report = {{"N", r.N},
                   {"a", r.a},
                   {"nu", r.nu},
                   {"grid", r.grid},
                   {"samples", r.count},
                   {"amplitude", r.amplitude},
                   {"amplitude_distribution", "uniform[-amplitude, amplitude]"},
                   {"seed", r.seed},
                   {"certified", r.certified},
                   {"E_base", r.energy_base},
                   {"min_gap", r.min_gap},
                   {"max_gap", r.max_gap},
                   {"gap_tolerance", r.gap_tolerance},
                   {"max_residual", r.max_residual},
                   {"max_det_err", r.max_det_err},
                   {"min_gap_ok", r.min_gap_ok},
                   {"note", "twist probes are evidence of minimality, not a proof"}};
    if (!r.certified) report["note"] = "a outside the admissible range: report only";
    std::ostringstream table;
    write_probe_csv(table, r);
    write_output(cfg, "probe.json", dump(report));
    write_output(cfg, "probe.csv", table.str());
    emit(cfg, out, report, table.str());
    return (!r.certified || pass) ? kExitOk : kExitVerification;
}

int cmd_fourier(const RunConfig& cfg, std::ostream& out) {
    const int n = cfg.N.value_or(2);
    const double a = cfg.a.value_or(3.0);
    const PolarGrid grid = resolve_grid(cfg, "128x256");
    constexpr int kBand = 8;
    if (max_resolved_mode(grid) < kBand)
        throw AliasingError("fourier: the angular grid must resolve modes up to 8 (>= 18 nodes)");
    const QuadraticIntegrand m = QuadraticIntegrand::constant_case(a, cfg.nu);
    const PressureSolution lambda = ncover_pressure(m, n, 64);

    const std::vector<VectorField> mixed = bump_test_fields(grid, cfg.tests, cfg.seed);
    const std::vector<VectorField> tilde = bump_test_fields(grid, cfg.tests, cfg.seed + 1, {1, kBand, 3});
    const std::vector<VectorField> first = bump_test_fields(grid, cfg.tests, cfg.seed + 2, {1, 1, 3});

    std::vector<double> parseval(mixed.size()), det0(mixed.size()), id_v(mixed.size()), id_vi(mixed.size());
    std::vector<double> margin(tilde.size()), first_gap(first.size());
    parallel_for(mixed.size(), [&](std::size_t k) {
        const auto [lhs, rhs] = parseval_gradient(mixed[k], kBand);
        parseval[k] = std::abs(lhs - rhs) / lhs;
        det0[k] = zero_mode_det(mixed[k]);
        id_v[k] = identity_v_check(mixed[k], lambda);
        id_vi[k] = identity_vi_check(mixed[k], lambda);
        const auto [bl, br] = buckling_check(tilde[k]);
        margin[k] = (bl - br) / br;
        const auto [fl, fr] = buckling_check(first[k]);
        first_gap[k] = std::abs(fl - fr) / fr;
    });
    const auto max_of = [](const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); };
    const auto min_of = [](const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); };
    const bool pass = max_of(parseval) <= 1e-8 && max_of(det0) <= 1e-12 && max_of(id_v) <= cfg.tolerance &&
                      max_of(id_vi) <= cfg.tolerance && min_of(margin) >= -1e-10 && max_of(first_gap) <= 1e-10;
    const json report = {{"grid", grid.descriptor()},
                         {"seed", cfg.seed},
                         {"tests", cfg.tests},
                         {"lambda", pressure_json(lambda)},
                         {"parseval_max_rel_gap", max_of(parseval)},
                         {"zero_mode_det_max", max_of(det0)},
                         {"identity_v_max_residual", max_of(id_v)},
                         {"identity_vi_max_residual", max_of(id_vi)},
                         {"buckling_min_rel_margin", min_of(margin)},
                         {"first_mode_max_rel_gap", max_of(first_gap)},
                         {"tolerance", cfg.tolerance},
                         {"pass", pass}};
    std::ostringstream table;
    write_modes_csv(table, decompose(mixed.front(), kBand));
    write_output(cfg, "fourier.json", dump(report));
    write_output(cfg, "fourier_modes.csv", table.str());
    emit(cfg, out, report, table.str());
    return pass ? kExitOk : kExitVerification;
}

std::vector<std::pair<int, int>> parse_ladder(const std::string& text) {
    std::vector<std::pair<int, int>> rungs;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) rungs.push_back(parse_grid_spec(item));
    if (rungs.size() < 2) throw ParameterError("convergence: the ladder needs at least two grids");
    return rungs;
}

int cmd_convergence(const RunConfig& cfg, std::ostream& out) {
    const int n = require_n(cfg);
    const double a = require_a(cfg);
    const QuadraticIntegrand m = QuadraticIntegrand::constant_case(a, cfg.nu);
    const OneHomogeneousMap u = OneHomogeneousMap::ncover(n);
    const PressureSolution lambda = scale_log_coefficient(ncover_pressure(m, n, 64), cfg.perturb);
    std::vector<ResidualSweepRow> rows;
    for (const auto& [nr, nt] : parse_ladder(cfg.ladder.empty() ? "24x48,64x128,256x512" : cfg.ladder)) {
        const PolarGrid grid = make_grid(nr, nt);
        const StationarityResult r = stationarity_residual(m, u, lambda, bump_test_fields(grid, cfg.tests, cfg.seed));
        rows.push_back({nr, nt, r.max_residual});
    }
    bool decreasing = true;
    for (std::size_t k = 1; k < rows.size(); ++k) decreasing = decreasing && rows[k].max_residual < rows[k - 1].max_residual;
    json ladder = json::array();
    for (const auto& row : rows)
        ladder.push_back({{"grid_nr", row.grid_nr}, {"grid_nth", row.grid_nth}, {"max_residual", row.max_residual}});
    const json report = {{"N", n},       {"a", a},         {"nu", cfg.nu},           {"tests", cfg.tests},
                         {"seed", cfg.seed}, {"rows", ladder}, {"decreasing", decreasing}};
    std::ostringstream table;
    write_residual_sweep_csv(table, rows);
    write_output(cfg, "convergence.csv", table.str());
    write_output(cfg, "convergence.json", dump(report));
    emit(cfg, out, report, table.str());
    return decreasing ? kExitOk : kExitVerification;
}

// Flat `key=value` lines; keys mirror long flag names without the dashes.
std::map<std::string, std::string> read_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ParameterError("cannot open config file " + path);
    std::map<std::string, std::string> entries;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParameterError(path + ":" + std::to_string(lineno) + ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        if (key.rfind("--", 0) == 0) key = key.substr(2);
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        entries[key] = value;
    }
    return entries;
}

bool flag_present(const std::vector<std::string>& args, const std::string& key) {
    const std::string flag = "--" + key;
    return std::any_of(args.begin(), args.end(),
                       [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

std::string find_config_path(const std::vector<std::string>& args) {
    for (std::size_t k = 0; k < args.size(); ++k) {
        if (args[k] == "--config" && k + 1 < args.size()) return args[k + 1];
        if (args[k].rfind("--config=", 0) == 0) return args[k].substr(9);
    }
    return {};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    int n_value = 0;
    double a_value = 0.0;
    std::string config_path;

    CLI::App app{"Numerical checks for the N-covering map of an incompressible planar energy", "ncover"};
    app.require_subcommand(1);

    struct Spec {
        const char* name;
        const char* help;
        std::function<int(const RunConfig&, std::ostream&)> fn;
    };
    const std::vector<Spec> specs = {
        {"certify", "small-pressure certificate for u_N", cmd_certify},
        {"energy", "quadrature energy of u_N against both closed forms", cmd_energy},
        {"pressure", "pressure gradient, reconstructed lambda and Sobolev norms", cmd_pressure},
        {"stationarity", "weak-form residual over a seeded test-field battery", cmd_stationarity},
        {"probe", "energy gaps of random twist competitors", cmd_probe},
        {"fourier", "angular Fourier identities and the buckling inequality", cmd_fourier},
        {"convergence", "stationarity residual over a grid ladder", cmd_convergence},
    };
    std::map<std::string, CLI::App*> subs;
    std::map<CLI::App*, std::pair<CLI::Option*, CLI::Option*>> na_opts;
    std::map<CLI::App*, CLI::Option*> nu_opts;
    for (const Spec& spec : specs) {
        CLI::App* sub = app.add_subcommand(spec.name, spec.help);
        CLI::Option* n_opt = sub->add_option("--N", n_value, "winding number N >= 2");
        CLI::Option* a_opt = sub->add_option("--a", a_value, "anisotropy a in M = (a,1,a,1) nu");
        nu_opts[sub] = sub->add_option("--nu", cfg.nu, "coercivity constant nu > 0");
        na_opts[sub] = {n_opt, a_opt};
        sub->add_option("--grid", cfg.grid, "quadrature grid NRxNT");
        sub->add_option("--out", cfg.out, "output directory");
        sub->add_option("--format", cfg.format, "stdout format")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--threads", cfg.threads, "worker thread cap (0 = hardware)");
        sub->add_option("--config", config_path, "flat key=value file mirroring flags; flags win");
        subs[spec.name] = sub;
    }
    for (const char* name : {"stationarity", "probe", "fourier", "convergence"})
        subs[name]->add_option("--seed", cfg.seed, "battery or probe seed");
    for (const char* name : {"stationarity", "fourier", "convergence"})
        subs[name]->add_option("--tests", cfg.tests, "number of test fields")->check(CLI::PositiveNumber);
    for (const char* name : {"stationarity", "probe", "fourier"})
        subs[name]->add_option("--tolerance", cfg.tolerance, "pass threshold for residuals");
    for (const char* name : {"stationarity", "convergence"})
        subs[name]->add_option("--perturb", cfg.perturb, "factor applied to the log coefficient of lambda");
    subs["probe"]->add_option("--samples", cfg.samples, "number of competitors")->check(CLI::PositiveNumber);
    subs["probe"]->add_option("--amplitude", cfg.amplitude, "twist amplitude bound");
    subs["certify"]->add_option("--mode", cfg.mode, "certificate mode")
        ->check(CLI::IsMember({"general", "single_variable"}));
    subs["pressure"]->add_option("--q", cfg.q, "Sobolev exponent in [1, 2)");
    subs["pressure"]->add_option("--table", cfg.table, "coefficient table CSV theta,alpha,beta,gamma,delta");
    subs["convergence"]->add_option("--ladder", cfg.ladder, "comma-separated grids, coarse to fine");

    try {
        std::vector<std::string> full = args;
        const std::string cfg_file = find_config_path(args);
        if (!cfg_file.empty()) {
            const auto it = std::find_if(full.begin(), full.end(), [&](const std::string& s) { return subs.count(s); });
            if (it == full.end()) throw UsageError("a subcommand is required");
            CLI::App* sub = subs[*it];
            for (const auto& [key, value] : read_config(cfg_file)) {
                if (key == "config" || flag_present(args, key)) continue;
                if (!sub->get_option_no_throw("--" + key)) continue;  // belongs to another subcommand
                full.push_back("--" + key);
                full.push_back(value);
            }
        }
        std::vector<const char*> argv = {"ncover"};
        for (const std::string& s : full) argv.push_back(s.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    const Spec* chosen = nullptr;
    for (const Spec& spec : specs)
        if (subs[spec.name]->parsed()) chosen = &spec;
    CLI::App* sub = subs[chosen->name];
    cfg.command = chosen->name;
    if (na_opts[sub].first->count()) cfg.N = n_value;
    if (na_opts[sub].second->count()) cfg.a = a_value;
    cfg.nu_given = nu_opts[sub]->count() > 0;
    set_max_threads(cfg.threads);

    try {
        if (cfg.N && *cfg.N < 2) throw ParameterError("--N must be >= 2");
        if (!(cfg.nu > 0.0)) throw ParameterError("--nu must be positive");
        return chosen->fn(cfg, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ModeError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const AliasingError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "verification failed: " << e.what() << "\n";
        return kExitVerification;
    }
}

}  // namespace ncover::cli
