#include "vesd/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>

#include "vesd/csv.hpp"
#include "vesd/empirical.hpp"

namespace vesd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct ReplicateResult {
    std::vector<ExperimentRecord> per_law;
};

ReplicateResult run_replicate(const ExperimentConfig& cfg, const PreparedEnsemble& ensemble,
                              const std::vector<std::string>& law_names, std::size_t replicate) {
    const auto start = std::chrono::steady_clock::now();
    const std::size_t n = ensemble.spec().n;

    ReplicateResult result;
    result.per_law.resize(cfg.vector_specs.size());
    for (std::size_t k = 0; k < cfg.vector_specs.size(); ++k) {
        auto& rec = result.per_law[k];
        rec.n = n;
        rec.replicate = replicate;
        rec.vector_law = law_names[k];
        rec.ensemble = ensemble.spec().tag();
        rec.seed = cfg.master_seed;
    }

    try {
        const auto w = ensemble.sample(cfg.master_seed, replicate);
        std::vector<UnitVector> xs;
        xs.reserve(cfg.vector_specs.size());
        for (const auto& spec : cfg.vector_specs) xs.push_back(sample_unit_vector(spec, n, cfg.master_seed, replicate));
        const auto spectra = decompose(w, xs, law_names);

        const double delta_esd = kolmogorov_to_semicircle(build_esd(spectra.front())).distance;
        for (std::size_t k = 0; k < spectra.size(); ++k) {
            auto& rec = result.per_law[k];
            const auto vesd = build_vesd(spectra[k]);
            rec.delta_vesd = kolmogorov_to_semicircle(vesd).distance;
            rec.delta_esd = delta_esd;
            if (cfg.berry_esseen) {
                const auto params = cfg.berry_esseen->params.at_dimension(n, cfg.berry_esseen->c0);
                const auto check = verify_inequality(vesd, params);
                rec.be_lhs = check.lhs;
                rec.be_rhs = check.rhs;
            } else {
                rec.be_lhs = kNaN;
                rec.be_rhs = kNaN;
            }
        }
    } catch (const SolverError& e) {
        for (auto& rec : result.per_law) {
            rec.delta_vesd = rec.delta_esd = rec.be_lhs = rec.be_rhs = kNaN;
            rec.error = e.what();
        }
    }

    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    for (auto& rec : result.per_law) rec.wall_time_ms = ms;
    return result;
}

std::string csv_value(double x) { return format_double(x); }

}  // namespace

void ExperimentConfig::validate() const {
    if (n_values.empty()) throw DomainError("n_values must not be empty");
    if (!std::is_sorted(n_values.begin(), n_values.end()) ||
        std::adjacent_find(n_values.begin(), n_values.end()) != n_values.end())
        throw DomainError("n_values must be strictly ascending");
    if (n_values.front() < 2) throw DomainError("n_values must be at least 2");
    if (replicates < 1) throw DomainError("replicates must be at least 1");
    if (vector_specs.empty()) throw DomainError("at least one unit-vector law is required");
    if (replicates > std::numeric_limits<std::uint32_t>::max()) throw DomainError("too many replicates");
    if (bias_scan) bias_scan->domain.validate();
}

const std::set<std::string>& experiment_keys() {
    static const std::set<std::string> keys = [] {
        std::set<std::string> k = ensemble_keys();
        k.insert({"experiment.n_values", "experiment.replicates", "experiment.seed", "experiment.vector_laws",
                  "experiment.threads", "experiment.record_timing", "berry_esseen.enabled", "berry_esseen.A",
                  "berry_esseen.B", "berry_esseen.tau", "berry_esseen.c0", "bias_scan.enabled", "bias_scan.u_min",
                  "bias_scan.u_max", "bias_scan.u_step", "bias_scan.c0", "bias_scan.u_values", "output.dir"});
        return k;
    }();
    return keys;
}

ExperimentConfig experiment_from_config(const Config& config) {
    config.reject_unknown(experiment_keys());
    ExperimentConfig cfg;
    cfg.ensemble = ensemble_from_config(config);

    const auto line_of = [&](const std::string& key) {
        const auto it = config.entries().find(key);
        return it == config.entries().end() ? std::size_t{0} : it->second.line;
    };
    const auto guard = [&](const std::string& key, auto&& body) {
        try {
            body();
        } catch (const DomainError& e) {
            throw ConfigError(key + ": " + e.what(), line_of(key), key);
        }
    };

    if (const auto list = config.get_list("experiment.n_values")) {
        cfg.n_values.clear();
        for (const auto& item : *list) {
            guard("experiment.n_values", [&] {
                const double v = parse_double(item);
                if (!(v >= 2.0) || v != std::floor(v)) throw DomainError("bad dimension '" + item + "'");
                cfg.n_values.push_back(static_cast<std::size_t>(v));
            });
        }
    }
    if (const auto r = config.get_uint("experiment.replicates")) cfg.replicates = static_cast<std::size_t>(*r);
    if (const auto s = config.get_uint("experiment.seed")) cfg.master_seed = *s;
    if (const auto t = config.get_uint("experiment.threads")) cfg.threads = static_cast<unsigned>(std::max<std::uint64_t>(*t, 1));
    if (const auto b = config.get_bool("experiment.record_timing")) cfg.record_timing = *b;
    if (const auto laws = config.get_list("experiment.vector_laws")) {
        cfg.vector_specs.clear();
        for (const auto& item : *laws)
            guard("experiment.vector_laws", [&] { cfg.vector_specs.push_back(UnitVectorSpec::parse(item)); });
    }

    if (config.get_bool("berry_esseen.enabled").value_or(false)) {
        BerryEsseenSettings be;
        std::string blamed = "berry_esseen.A";
        for (const char* key : {"berry_esseen.A", "berry_esseen.B", "berry_esseen.tau"})
            if (config.has(key)) blamed = key;
        guard(blamed, [&] {
            be.params = derive_constants(config.get_double("berry_esseen.A").value_or(16.0),
                                         config.get_double("berry_esseen.B").value_or(3.0),
                                         config.get_double("berry_esseen.tau").value_or(2.0));
        });
        be.c0 = config.get_double("berry_esseen.c0").value_or(2.0);
        if (!(be.c0 > 0.0)) throw ConfigError("berry_esseen.c0 must be positive", line_of("berry_esseen.c0"));
        cfg.berry_esseen = be;
    }

    if (config.get_bool("bias_scan.enabled").value_or(false)) {
        BiasScanSettings scan;
        if (const auto v = config.get_double("bias_scan.u_min")) scan.domain.u_min = *v;
        if (const auto v = config.get_double("bias_scan.u_max")) scan.domain.u_max = *v;
        if (const auto v = config.get_double("bias_scan.u_step")) scan.domain.u_step = *v;
        if (const auto v = config.get_double("bias_scan.c0")) scan.domain.c0 = *v;
        if (const auto list = config.get_list("bias_scan.u_values"))
            for (const auto& item : *list)
                guard("bias_scan.u_values", [&] { scan.u_values.push_back(parse_double(item)); });
        guard("bias_scan.u_min", [&] { scan.domain.validate(); });
        cfg.bias_scan = scan;
    }

    if (const auto dir = config.get_string("output.dir")) cfg.out_dir = *dir;

    guard("experiment.n_values", [&] { cfg.validate(); });
    return cfg;
}

// ---------------------------------------------------------------------------

void run_experiment(const ExperimentConfig& cfg, const RecordSink& sink) {
    cfg.validate();
    std::vector<std::string> law_names;
    for (const auto& spec : cfg.vector_specs) law_names.push_back(spec.name());

    for (std::size_t n : cfg.n_values) {
        EnsembleSpec spec = cfg.ensemble;
        spec.n = n;
        const PreparedEnsemble ensemble(spec);

        std::vector<ReplicateResult> results(cfg.replicates);
        parallel_for(cfg.replicates, cfg.threads,
                     [&](std::size_t rep) { results[rep] = run_replicate(cfg, ensemble, law_names, rep); });

        for (std::size_t k = 0; k < cfg.vector_specs.size(); ++k)
            for (const auto& r : results) sink(r.per_law[k]);
    }
}

std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg) {
    std::vector<ExperimentRecord> out;
    run_experiment(cfg, [&](const ExperimentRecord& r) { out.push_back(r); });
    return out;
}

void write_records_csv(std::ostream& out, std::span<const ExperimentRecord> records, bool with_timing) {
    out << kRecordsHeader << '\n';
    for (const auto& r : records) {
        out << r.n << ',' << r.replicate << ',' << r.vector_law << ',' << r.ensemble << ',' << r.seed << ','
            << csv_value(r.delta_vesd) << ',' << csv_value(r.delta_esd) << ',' << csv_value(r.be_lhs) << ','
            << csv_value(r.be_rhs) << ',';
        if (with_timing) out << csv_value(r.wall_time_ms);
        out << '\n';
    }
}

void write_errors_csv(std::ostream& out, std::span<const ExperimentRecord> records) {
    out << "n,replicate,vector_law,seed,error\n";
    for (const auto& r : records) {
        if (r.ok()) continue;
        std::string message = r.error;
        std::replace(message.begin(), message.end(), ',', ';');
        std::replace(message.begin(), message.end(), '\n', ' ');
        out << r.n << ',' << r.replicate << ',' << r.vector_law << ',' << r.seed << ',' << message << '\n';
    }
}

std::vector<ExperimentRecord> read_records_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DomainError("records CSV is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kRecordsHeader) throw DomainError("unexpected records CSV header: " + line);

    std::vector<ExperimentRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 10)
            throw DomainError("records CSV line " + std::to_string(line_no) + ": expected 10 fields");
        try {
            ExperimentRecord r;
            r.n = static_cast<std::size_t>(std::stoull(fields[0]));
            r.replicate = static_cast<std::size_t>(std::stoull(fields[1]));
            r.vector_law = fields[2];
            r.ensemble = fields[3];
            r.seed = std::stoull(fields[4]);
            r.delta_vesd = parse_double(fields[5]);
            r.delta_esd = parse_double(fields[6]);
            r.be_lhs = parse_double(fields[7]);
            r.be_rhs = parse_double(fields[8]);
            r.wall_time_ms = fields[9].empty() ? 0.0 : parse_double(fields[9]);
            if (std::isnan(r.delta_vesd)) r.error = "failed replicate";
            records.push_back(std::move(r));
        } catch (const std::logic_error&) {
            throw DomainError("records CSV line " + std::to_string(line_no) + ": malformed field");
        } catch (const DomainError& e) {
            throw DomainError("records CSV line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return records;
}

// ---------------------------------------------------------------------------

namespace {

struct MeanAccumulator {
    std::map<std::size_t, std::pair<double, std::size_t>> by_n;

    void add(std::size_t n, double x) {
        auto& [sum, count] = by_n[n];
        sum += x;
        ++count;
    }

    LawSummary finish(std::string law, bool require_fit) const {
        LawSummary s;
        s.law = std::move(law);
        for (const auto& [n, acc] : by_n) {
            s.ns.push_back(n);
            s.mean_distance.push_back(acc.first / static_cast<double>(acc.second));
            s.samples.push_back(acc.second);
        }
        if (s.ns.size() >= 3 || require_fit) {
            const std::vector<double> ns(s.ns.begin(), s.ns.end());
            s.fit = fit_rate(ns, s.mean_distance);
        }
        return s;
    }
};

nlohmann::ordered_json law_json(const LawSummary& s) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json means = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < s.ns.size(); ++i) means[std::to_string(s.ns[i])] = s.mean_distance[i];
    j["mean_distance"] = means;
    if (s.fit) {
        j["slope"] = s.fit->slope;
        j["log_coefficient"] = s.fit->log_coefficient;
        j["fixed_exponent_coefficient"] = s.fit->fixed_exponent_coefficient;
        j["r_squared"] = s.fit->r_squared;
    }
    return j;
}

}  // namespace

ExperimentSummary aggregate_and_fit(std::span<const ExperimentRecord> records, bool require_fit) {
    ExperimentSummary summary;
    std::vector<std::string> order;
    std::map<std::string, MeanAccumulator> per_law;
    MeanAccumulator esd;
    std::set<std::pair<std::size_t, std::size_t>> esd_seen;

    for (const auto& r : records) {
        if (!r.ok()) {
            ++summary.failures;
            continue;
        }
        if (!per_law.contains(r.vector_law)) order.push_back(r.vector_law);
        per_law[r.vector_law].add(r.n, r.delta_vesd);
        // The ESD does not depend on the unit vector; count each matrix once.
        if (esd_seen.insert({r.n, r.replicate}).second) esd.add(r.n, r.delta_esd);
        if (!std::isnan(r.be_rhs)) {
            ++summary.be_checks;
            if (!(r.be_lhs <= r.be_rhs * (1.0 + 1e-6))) ++summary.be_violations;
        }
    }
    if (order.empty()) throw DomainError("no successful records to aggregate");
    for (const auto& law : order) summary.laws.push_back(per_law.at(law).finish(law, require_fit));
    summary.esd = esd.finish("esd", require_fit);
    return summary;
}

nlohmann::ordered_json ExperimentSummary::to_json() const {
    nlohmann::ordered_json j;
    nlohmann::ordered_json laws_json = nlohmann::ordered_json::object();
    for (const auto& law : laws) laws_json[law.law] = law_json(law);
    j["vesd"] = laws_json;
    j["esd"] = law_json(esd);
    j["failures"] = failures;
    j["berry_esseen"] = {{"checks", be_checks}, {"violations", be_violations}};
    return j;
}

// ---------------------------------------------------------------------------

std::vector<BiasRow> summarize_bias(std::size_t n, double v, std::span<const double> us,
                                    std::span<const std::vector<std::complex<double>>> per_replicate) {
    if (us.empty()) throw DomainError("bias scan needs a nonempty u grid");
    if (per_replicate.empty()) throw DomainError("bias scan needs at least one replicate");
    const double reps = static_cast<double>(per_replicate.size());
    std::vector<BiasRow> rows;
    for (std::size_t k = 0; k < us.size(); ++k) {
        BiasRow row;
        row.n = n;
        row.u = us[k];
        row.v = v;
        row.replicates = per_replicate.size();
        std::complex<double> sum{};
        for (const auto& values : per_replicate) sum += values.at(k);
        row.mean_transform = sum / reps;
        double spread = 0.0;
        for (const auto& values : per_replicate) spread += std::norm(values[k] - row.mean_transform);
        row.std_error = per_replicate.size() > 1 ? std::sqrt(spread / (reps - 1.0) / reps) : 0.0;
        row.limit = semicircle::stieltjes({row.u, v});
        row.abs_bias = std::abs(row.mean_transform - row.limit);
        row.bound = 1.0 / (static_cast<double>(n) * v);
        row.ratio = row.abs_bias / row.bound;
        rows.push_back(row);
    }
    return rows;
}

std::vector<BiasRow> bias_scan(const ExperimentConfig& cfg, const EvaluationDomain& domain,
                               std::span<const double> u_values) {
    cfg.validate();
    const std::vector<double> us = u_values.empty() ? domain.u_grid() : std::vector<double>(u_values.begin(), u_values.end());
    if (us.empty()) throw DomainError("bias scan needs a nonempty u grid");

    std::vector<BiasRow> rows;
    for (std::size_t n : cfg.n_values) {
        EnsembleSpec spec = cfg.ensemble;
        spec.n = n;
        const PreparedEnsemble ensemble(spec);
        const double v = domain.v(n);

        std::vector<std::vector<std::complex<double>>> values(cfg.replicates);
        parallel_for(cfg.replicates, cfg.threads, [&](std::size_t rep) {
            const auto w = ensemble.sample(cfg.master_seed, rep);
            const auto x = sample_unit_vector(cfg.vector_specs.front(), n, cfg.master_seed, rep);
            const ResolventSolver resolvent(w, x);
            auto& out = values[rep];
            out.reserve(us.size());
            for (double u : us) out.push_back(resolvent({u, v}));
        });
        auto block = summarize_bias(n, v, us, values);
        rows.insert(rows.end(), block.begin(), block.end());
    }
    return rows;
}

void write_bias_csv(std::ostream& out, std::span<const BiasRow> rows) {
    out << "n,u,v,mean_re,mean_im,limit_re,limit_im,abs_bias,bound,ratio,std_error,replicates\n";
    for (const auto& r : rows) {
        out << r.n << ',' << csv_value(r.u) << ',' << csv_value(r.v) << ',' << csv_value(r.mean_transform.real())
            << ',' << csv_value(r.mean_transform.imag()) << ',' << csv_value(r.limit.real()) << ','
            << csv_value(r.limit.imag()) << ',' << csv_value(r.abs_bias) << ',' << csv_value(r.bound) << ','
            << csv_value(r.ratio) << ',' << csv_value(r.std_error) << ',' << r.replicates << '\n';
    }
}

std::vector<std::filesystem::path> export_step_cdfs(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
    cfg.validate();
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    const auto open = [&](const std::string& name) {
        written.push_back(dir / name);
        std::ofstream out(written.back());
        if (!out) throw Error("cannot write " + written.back().string());
        return out;
    };

    {
        auto out = open("semicircle.csv");
        out << "x,cdf\n";
        for (int k = 0; k <= 800; ++k) {
            const double x = -2.5 + 5.0 * k / 800.0;
            out << format_double(x) << ',' << format_double(semicircle::cdf(x)) << '\n';
        }
    }
    std::vector<std::string> law_names;
    for (const auto& spec : cfg.vector_specs) law_names.push_back(spec.name());
    for (std::size_t n : cfg.n_values) {
        EnsembleSpec spec = cfg.ensemble;
        spec.n = n;
        const auto w = sample_wigner(spec, cfg.master_seed, 0);
        std::vector<UnitVector> xs;
        for (const auto& vs : cfg.vector_specs) xs.push_back(sample_unit_vector(vs, n, cfg.master_seed, 0));
        const auto spectra = decompose(w, xs, law_names);
        {
            auto out = open("esd_n" + std::to_string(n) + ".csv");
            build_esd(spectra.front()).write_csv(out);
        }
        for (const auto& sd : spectra) {
            auto out = open("vesd_n" + std::to_string(n) + "_" + sd.vector_id + ".csv");
            build_vesd(sd).write_csv(out);
        }
    }
    return written;
}

}  // namespace vesd
