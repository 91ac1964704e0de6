// Command-line front end: four verbs (skorohod, stats, simulate, converge)
// over the reflected-SDE toolkit. Exit codes: 0 ok, 2 I/O, 3 domain
// violation, 4 configuration, 5 numeric failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "rsde/config.hpp"
#include "rsde/csv.hpp"
#include "rsde/errors.hpp"
#include "rsde/parallel.hpp"
#include "rsde/rng.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace rsde;

int parse_threads(const std::string& spec) {
    if (spec == "auto") return 0;
    try {
        const int n = std::stoi(spec);
        if (n < 1) throw ConfigError("--threads must be >= 1 or 'auto'");
        return n;
    } catch (const std::invalid_argument&) {
        throw ConfigError("--threads must be an integer or 'auto'");
    }
}

json matrix_json(const Matrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    os << text;
    if (!os) throw IoError("write failed for '" + path + "'");
}

struct CommonOpts {
    std::string config_path;
    std::string out = "";
    std::string in = "";
    std::string format = "csv";
    std::optional<std::uint64_t> seed;
    std::string threads = "auto";
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool needs_in) {
    cmd->add_option("--config", opts.config_path, "declarative config file")->required();
    cmd->add_option("--out", opts.out, "output path (directory for converge)");
    if (needs_in) cmd->add_option("--in", opts.in, "input path CSV");
    cmd->add_option("--format", opts.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--seed", opts.seed, "seed override");
    cmd->add_option("--threads", opts.threads, "worker threads or 'auto'");
}

int cmd_skorohod(const CommonOpts& opts) {
    const ConfigFile cfg = ConfigFile::parse_file(opts.config_path);
    const DomainShape domain = build_domain(cfg);
    const std::string in = !opts.in.empty() ? opts.in : cfg.get_string("skorohod", "input");
    const std::string out = !opts.out.empty() ? opts.out : cfg.get_string_or("skorohod", "output", "skorohod-out.csv");
    const SampledPath h = read_path_csv(in);
    ReflectedPair rp = [&] {
        switch (domain.kind()) {
            case DomainShape::Kind::half_line: return skorohod_halfline(h, domain.origin());
            case DomainShape::Kind::interval: return skorohod_interval(h, domain.lower(), domain.upper());
            default: return skorohod_reflect(domain, h);
        }
    }();
    if (opts.format == "json") {
        json j;
        j["domain"] = domain.kind_name();
        j["t"] = json::array();
        j["x"] = json::array();
        j["k"] = json::array();
        j["ktv"] = json::array();
        for (std::int64_t n = 0; n < rp.x.n_nodes(); ++n) {
            j["t"].push_back(rp.x.grid().node_time(n));
            j["x"].push_back(std::vector<double>(rp.x.node(n).begin(), rp.x.node(n).end()));
            j["k"].push_back(std::vector<double>(rp.k.node(n).begin(), rp.k.node(n).end()));
            j["ktv"].push_back(rp.k_tv[n]);
        }
        write_text(out, j.dump(2) + "\n");
    } else {
        write_reflected_csv(out, rp);
    }
    return 0;
}

json estimate_block(const MatrixEstimate& est) {
    json j;
    j["value"] = matrix_json(est.value);
    j["stderr"] = matrix_json(est.stderr_);
    return j;
}

int cmd_stats(const CommonOpts& opts) {
    const ConfigFile cfg = ConfigFile::parse_file(opts.config_path);
    const ApproxDriver driver = build_driver(cfg);
    const double delta = driver.delta();
    const int r = driver.required_r() != 0
                      ? driver.required_r()
                      : static_cast<int>(cfg.get_int_or("stats", "r", 2));
    const double t = cfg.get_double_or("stats", "t", delta);
    const std::int64_t n = cfg.get_int_or("stats", "n_samples", 10000);
    const auto substeps = static_cast<int>(cfg.get_int_or("stats", "substeps", kDefaultSubsteps));
    const int k_max = static_cast<int>(cfg.get_int_or("stats", "k_max", 0));
    const std::uint64_t seed =
        opts.seed ? *opts.seed : static_cast<std::uint64_t>(cfg.get_int_or("stats", "seed", 0));
    const int threads = parse_threads(opts.threads);

    const CorrectionMatrix s_hat = estimate_s(driver, r, t, n, derive_seed(seed, 1), substeps, threads);
    const CEstimate c_hat = estimate_c(driver, r, t, n, derive_seed(seed, 2), substeps, threads);
    const MatrixEstimate cs_hat =
        estimate_c_star(driver, r, t, n, derive_seed(seed, 3), substeps, threads);
    const CorrectionMatrix limit = limit_correction(driver, r);

    json j;
    j["driver"] = {{"kind", driver.kind_name()}, {"delta", delta}, {"r", r}};
    j["t"] = t;
    j["n_samples"] = n;
    j["seed"] = seed;
    j["s"] = {{"value", matrix_json(s_hat.s)}, {"stderr", matrix_json(s_hat.stderr_s)}};
    j["c"] = estimate_block(c_hat.raw);
    j["c_induced"] = matrix_json(c_hat.induced.c);
    j["c_star"] = estimate_block(cs_hat);
    j["limit"] = {{"s", matrix_json(limit.s)}, {"c", matrix_json(limit.c)}};
    if (k_max >= 2) {
        const RecursionReport rec =
            verify_recursion(driver, r, k_max, n, derive_seed(seed, 4), substeps, threads);
        json rows = json::array();
        for (const auto& row : rec.rows) {
            rows.push_back({{"k", row.k},
                            {"residual", matrix_json(row.residual)},
                            {"band", matrix_json(row.band)},
                            {"pass", row.pass}});
        }
        j["recursion"] = std::move(rows);
        j["recursion_all_pass"] = rec.all_pass;
    }
    const std::string out = !opts.out.empty() ? opts.out : "stats.json";
    write_text(out, j.dump(2) + "\n");
    return 0;
}

int cmd_simulate(const CommonOpts& opts) {
    const ConfigFile cfg = ConfigFile::parse_file(opts.config_path);
    const DomainShape domain = build_domain(cfg);
    const Coefficients coeffs = build_coefficients(cfg);
    const ApproxDriver driver = build_driver(cfg);
    const double T = cfg.get_double_or("simulate", "T", 1.0);
    const std::int64_t n_fine = cfg.get_int_or("simulate", "n_fine", 4096);
    const std::uint64_t seed =
        opts.seed ? *opts.seed : static_cast<std::uint64_t>(cfg.get_int_or("simulate", "seed", 0));
    Vec x0 = cfg.has("simulate", "x0") ? cfg.get_double_array("simulate", "x0")
                                       : Vec(static_cast<std::size_t>(coeffs.d), 0.0);
    const TimeGrid grid(T, n_fine);
    const double m = T / driver.delta();
    if (std::abs(m - std::round(m)) > 1e-9 * std::max(1.0, m)) {
        throw ConfigError("simulate: driver delta must divide the horizon T");
    }
    driver.validate_grid(grid); // delta must sit on the fine grid

    const BrownianPath w = sample_brownian(grid, coeffs.r, seed);
    const CorrectionMatrix limit = limit_correction(driver, coeffs.r);
    const ReflectedSolution ito = integrate_ito_reflected(coeffs, domain, w, limit.c, x0);
    const ReflectedSolution driven = integrate_driven_reflected(coeffs, domain, driver, w, x0);
    const std::string out = !opts.out.empty() ? opts.out : "simulate-out.csv";
    if (opts.format == "json") {
        json j;
        j["t"] = json::array();
        j["x"] = json::array();
        j["xdelta"] = json::array();
        for (std::int64_t k = 0; k < ito.x.n_nodes(); ++k) {
            j["t"].push_back(grid.node_time(k));
            j["x"].push_back(std::vector<double>(ito.x.node(k).begin(), ito.x.node(k).end()));
            j["xdelta"].push_back(
                std::vector<double>(driven.x.node(k).begin(), driven.x.node(k).end()));
        }
        write_text(out, j.dump(2) + "\n");
    } else {
        write_coupled_csv(out, ito, driven);
    }
    return 0;
}

int cmd_converge(const CommonOpts& opts) {
    const ConfigFile cfg = ConfigFile::parse_file(opts.config_path);
    StudyConfig sc = build_study(cfg);
    if (opts.seed) sc.base_seed = *opts.seed;
    sc.threads = parse_threads(opts.threads);
    const ConvergenceReport report = run_convergence_study(sc);

    const std::string hash = config_hash(cfg);
    const std::filesystem::path dir = opts.out.empty() ? "." : opts.out;
    std::filesystem::create_directories(dir);
    const std::string stem = sc.name + "-" + hash;
    write_report_csv((dir / (stem + ".csv")).string(), report);

    json j;
    j["name"] = sc.name;
    j["config_hash"] = hash;
    j["config"] = cfg.canonical();
    j["base_seed"] = sc.base_seed;
    json rows = json::array();
    for (const auto& row : report.rows) {
        rows.push_back({{"delta", row.delta},
                        {"n_delta", row.n_delta},
                        {"p", row.p},
                        {"error", row.error},
                        {"stderr", row.stderr_},
                        {"n_paths", row.n_paths}});
    }
    j["rows"] = std::move(rows);
    json slopes = json::array();
    for (const auto& [p, fit] : report.slopes) {
        slopes.push_back({{"p", p},
                          {"slope", fit.slope},
                          {"intercept", fit.intercept},
                          {"slope_stderr", fit.slope_stderr},
                          {"n_used", fit.n_used}});
    }
    j["slopes"] = std::move(slopes);
    j["diagnostics"] = {{"proxy_bias", report.diagnostics.proxy_bias},
                        {"correction_deviation", report.diagnostics.correction_deviation},
                        {"correction_deviation_stderr",
                         report.diagnostics.correction_deviation_stderr}};
    write_text((dir / (stem + ".json")).string(), j.dump(2) + "\n");

    std::cout << "p slope slope_stderr\n";
    for (const auto& [p, fit] : report.slopes) {
        std::cout << format_double(p) << " " << format_double(fit.slope) << " "
                  << format_double(fit.slope_stderr) << "\n";
    }
    std::cout << "report: " << (dir / (stem + ".csv")).string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"reflected SDE simulation and convergence toolkit"};
    app.require_subcommand(1);

    CommonOpts sk_opts, st_opts, si_opts, cv_opts;
    CLI::App* sk = app.add_subcommand("skorohod", "apply the reflection map to a path CSV");
    add_common(sk, sk_opts, true);
    CLI::App* st = app.add_subcommand("stats", "estimate the s/c/c* correction statistics");
    add_common(st, st_opts, false);
    CLI::App* si = app.add_subcommand("simulate", "dump one coupled path pair (X, X^delta)");
    add_common(si, si_opts, false);
    CLI::App* cv = app.add_subcommand("converge", "run a strong-convergence study");
    add_common(cv, cv_opts, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 4;
    }

    try {
        if (sk->parsed()) return cmd_skorohod(sk_opts);
        if (st->parsed()) return cmd_stats(st_opts);
        if (si->parsed()) return cmd_simulate(si_opts);
        if (cv->parsed()) return cmd_converge(cv_opts);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    }
    return 4;
}
