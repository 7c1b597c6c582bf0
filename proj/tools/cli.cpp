#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "vesd/csv.hpp"
#include "vesd/empirical.hpp"
#include "vesd/harness.hpp"
#include "vesd/semicircle.hpp"

namespace vesd::cli {

namespace {

namespace fs = std::filesystem;

struct CommonOptions {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::vector<std::size_t> n_values;
    std::optional<std::size_t> reps;
    std::vector<std::string> vector_laws;
    std::string ensemble;
    std::vector<std::string> overrides;
    bool timing = false;
};

void add_common(CLI::App& cmd, CommonOptions& o) {
    cmd.add_option("--config", o.config_path, "Experiment config file");
    cmd.add_option("--out", o.out_dir, "Output directory");
    cmd.add_option("--seed", o.seed, "Master seed");
    cmd.add_option("--threads", o.threads, "Worker threads (results do not depend on it)");
    cmd.add_option("--n", o.n_values, "Dimension; repeat for a sweep");
    cmd.add_option("--reps", o.reps, "Replicates per dimension");
    cmd.add_option("--vector-law", o.vector_laws, "Unit-vector law; repeat for several");
    cmd.add_option("--ensemble", o.ensemble, "goe, gue, real-<law> or complex-<law>");
    cmd.add_option("--set", o.overrides, "Config override section.key=value");
    cmd.add_flag("--timing", o.timing, "Write wall_time_ms to the records CSV");
}

ExperimentConfig build_config(const CommonOptions& o) {
    Config config = o.config_path.empty() ? Config{} : Config::load(o.config_path);
    for (const auto& assignment : o.overrides) config.apply_override(assignment, experiment_keys());
    ExperimentConfig cfg = experiment_from_config(config);

    try {
        if (!o.n_values.empty()) cfg.n_values = o.n_values;
        if (o.reps) cfg.replicates = *o.reps;
        if (o.seed) cfg.master_seed = *o.seed;
        if (o.threads) cfg.threads = std::max(*o.threads, 1u);
        if (!o.vector_laws.empty()) {
            cfg.vector_specs.clear();
            for (const auto& law : o.vector_laws) cfg.vector_specs.push_back(UnitVectorSpec::parse(law));
        }
        if (!o.ensemble.empty()) {
            const auto shorthand = parse_ensemble_shorthand(o.ensemble);
            cfg.ensemble.symmetry = shorthand.symmetry;
            cfg.ensemble.construction = shorthand.construction;
            cfg.ensemble.entry_law = shorthand.entry_law;
        }
        if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
        if (o.timing) cfg.record_timing = true;
        cfg.validate();
        EnsembleSpec probe = cfg.ensemble;
        probe.n = cfg.n_values.front();
        probe.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

std::ofstream open_output(const fs::path& path) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

int cmd_simulate(const CommonOptions& o, bool export_cdfs, std::ostream& out, std::ostream& err) {
    const auto cfg = build_config(o);
    const auto records = run_experiment(cfg);
    {
        auto csv = open_output(cfg.out_dir / "records.csv");
        write_records_csv(csv, records, cfg.record_timing);
    }
    const auto summary = aggregate_and_fit(records, /*require_fit=*/false);
    if (summary.failures > 0) {
        auto csv = open_output(cfg.out_dir / "errors.csv");
        write_errors_csv(csv, records);
        err << summary.failures << " failed records, see " << (cfg.out_dir / "errors.csv").string() << '\n';
    }
    const auto json = summary.to_json();
    {
        auto file = open_output(cfg.out_dir / "summary.json");
        file << json.dump(2) << '\n';
    }
    if (export_cdfs) export_step_cdfs(cfg, cfg.out_dir / "cdf");
    out << json.dump(2) << '\n';
    return kExitOk;
}

int cmd_rates(const std::string& input, const std::string& out_dir, std::ostream& out) {
    std::ifstream in(input);
    if (!in) throw Error("cannot open records CSV " + input);
    const auto records = read_records_csv(in);
    const auto json = aggregate_and_fit(records).to_json();
    if (!out_dir.empty()) {
        auto file = open_output(fs::path(out_dir) / "summary.json");
        file << json.dump(2) << '\n';
    }
    out << json.dump(2) << '\n';
    return kExitOk;
}

int cmd_bias_scan(const CommonOptions& o, const std::vector<double>& us, std::optional<double> c0, std::ostream& out) {
    const auto cfg = build_config(o);
    BiasScanSettings scan = cfg.bias_scan.value_or(BiasScanSettings{});
    if (c0) scan.domain.c0 = *c0;
    if (!us.empty()) scan.u_values = us;
    const auto rows = bias_scan(cfg, scan.domain, scan.u_values);
    {
        auto csv = open_output(cfg.out_dir / "bias_scan.csv");
        write_bias_csv(csv, rows);
    }
    write_bias_csv(out, rows);
    return kExitOk;
}

int cmd_bridge(const CommonOptions& o, std::ostream& out) {
    const auto cfg = build_config(o);
    nlohmann::json result = nlohmann::json::object();
    for (std::size_t n : cfg.n_values) {
        EnsembleSpec spec = cfg.ensemble;
        spec.n = n;
        const PreparedEnsemble ensemble(spec);
        std::vector<BridgePath> paths(cfg.replicates);
        std::vector<double> relation(cfg.replicates);
        parallel_for(cfg.replicates, cfg.threads, [&](std::size_t rep) {
            const auto w = ensemble.sample(cfg.master_seed, rep);
            const auto x = sample_unit_vector(cfg.vector_specs.front(), n, cfg.master_seed, rep);
            const auto sd = decompose(w, x);
            paths[rep] = bridge_path(sd);
            relation[rep] = bridge_relation_check(sd);
        });

        auto csv = open_output(cfg.out_dir / ("bridge_n" + std::to_string(n) + ".csv"));
        csv << "replicate,t,q\n";
        double endpoint = 0.0, worst_relation = 0.0, sum = 0.0, sum_sq = 0.0;
        for (std::size_t rep = 0; rep < paths.size(); ++rep) {
            const auto& p = paths[rep];
            for (std::size_t i = 0; i < p.values.size(); ++i)
                csv << rep << ',' << format_double(p.times[i]) << ',' << format_double(p.values[i]) << '\n';
            endpoint = std::max({endpoint, std::fabs(p.values.front()), std::fabs(p.values.back())});
            worst_relation = std::max(worst_relation, relation[rep]);
            const double mid = p.values[n / 2];
            sum += mid;
            sum_sq += mid * mid;
        }
        const double reps = static_cast<double>(paths.size());
        const double mean = sum / reps;
        const double variance = paths.size() > 1 ? (sum_sq - reps * mean * mean) / (reps - 1.0) : 0.0;
        result[std::to_string(n)] = {{"variance_at_half", variance},
                                     {"max_endpoint_abs", endpoint},
                                     {"max_relation_error", worst_relation},
                                     {"replicates", cfg.replicates}};
    }
    out << result.dump(2) << '\n';
    return kExitOk;
}

int cmd_check_be(const CommonOptions& o, std::ostream& out) {
    auto cfg = build_config(o);
    if (!cfg.berry_esseen) cfg.berry_esseen = BerryEsseenSettings{};
    const auto records = run_experiment(cfg);
    std::size_t checks = 0, holds = 0;
    double worst = 0.0;
    for (const auto& r : records) {
        if (!r.ok()) continue;
        ++checks;
        if (r.be_lhs <= r.be_rhs * (1.0 + 1e-6)) ++holds;
        worst = std::max(worst, r.be_lhs / r.be_rhs);
    }
    {
        auto csv = open_output(cfg.out_dir / "check_be.csv");
        write_records_csv(csv, records, cfg.record_timing);
    }
    const nlohmann::json result = {{"checks", checks},
                                   {"holds", holds},
                                   {"violations", checks - holds},
                                   {"max_lhs_over_rhs", worst}};
    out << result.dump(2) << '\n';
    return holds == checks ? kExitOk : kExitRuntime;
}

int cmd_cdf(const std::vector<double>& xs, const std::vector<std::string>& zs, std::ostream& out) {
    if (xs.empty() && zs.empty()) throw ConfigError("cdf needs --x or --z");
    for (double x : xs) out << format_double(semicircle::cdf(x)) << '\n';
    for (const auto& text : zs) {
        const auto parts = split_csv_line(text);
        if (parts.size() != 2) throw ConfigError("--z expects re,im");
        std::complex<double> z;
        try {
            z = {parse_double(parts[0]), parse_double(parts[1])};
        } catch (const DomainError& e) {
            throw ConfigError(std::string("--z: ") + e.what());
        }
        if (!(z.imag() > 0.0)) throw ConfigError("--z needs a positive imaginary part");
        const auto s = semicircle::stieltjes(z);
        out << format_double(s.real()) << ',' << format_double(s.imag()) << '\n';
    }
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Eigenvector empirical spectral distributions of Wigner matrices", "vesd"};
    app.require_subcommand(1);

    CommonOptions simulate_opts, bias_opts, bridge_opts, be_opts;
    bool export_cdfs = false;
    auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo sweep and write records.csv + summary.json");
    add_common(*simulate, simulate_opts);
    simulate->add_flag("--export-cdfs", export_cdfs, "Also write step-CDF CSVs for replicate 0");

    std::string rates_input, rates_out;
    auto* rates = app.add_subcommand("rates", "Aggregate and fit an existing records CSV");
    rates->add_option("--input", rates_input, "records.csv")->required();
    rates->add_option("--out", rates_out, "Directory for summary.json");

    std::vector<double> bias_us;
    std::optional<double> bias_c0;
    auto* bias = app.add_subcommand("bias-scan", "Average x*(W - z)^-1 x against the semicircle transform");
    add_common(*bias, bias_opts);
    bias->add_option("--u", bias_us, "Real part of z; repeatable");
    bias->add_option("--c0", bias_c0, "v = c0 / sqrt(n)");

    auto* bridge = app.add_subcommand("bridge", "Write Q_n paths and report Var Q_n(1/2)");
    add_common(*bridge, bridge_opts);

    auto* check_be = app.add_subcommand("check-be", "Verify the smoothing inequality on every replicate");
    add_common(*check_be, be_opts);

    std::vector<double> cdf_xs;
    std::vector<std::string> cdf_zs;
    auto* cdf = app.add_subcommand("cdf", "Semicircle CDF at --x and Stieltjes transform at --z re,im");
    cdf->add_option("--x", cdf_xs, "Abscissa; repeatable");
    cdf->add_option("--z", cdf_zs, "Spectral parameter re,im; repeatable");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "vesd: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(simulate_opts, export_cdfs, out, err);
        if (rates->parsed()) return cmd_rates(rates_input, rates_out, out);
        if (bias->parsed()) return cmd_bias_scan(bias_opts, bias_us, bias_c0, out);
        if (bridge->parsed()) return cmd_bridge(bridge_opts, out);
        if (check_be->parsed()) return cmd_check_be(be_opts, out);
        if (cdf->parsed()) return cmd_cdf(cdf_xs, cdf_zs, out);
    } catch (const ConfigError& e) {
        err << "vesd: config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "vesd: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitConfig;
}

}  // namespace vesd::cli
