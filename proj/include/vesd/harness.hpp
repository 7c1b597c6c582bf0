#pragma once

#include <atomic>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "vesd/berry_esseen.hpp"
#include "vesd/config.hpp"
#include "vesd/ensemble.hpp"
#include "vesd/metrics.hpp"
#include "vesd/semicircle.hpp"
#include "vesd/spectral.hpp"

namespace vesd {

struct BerryEsseenSettings {
    SmoothingInequalityParams params = derive_constants();
    double c0 = 2.0;  ///< v = c0 / sqrt(n)
};

struct BiasScanSettings {
    EvaluationDomain domain{};
    std::vector<double> u_values;  ///< overrides the domain grid when nonempty
};

struct ExperimentConfig {
    EnsembleSpec ensemble{};  ///< template; n is replaced per sweep point
    std::vector<UnitVectorSpec> vector_specs{UnitVectorSpec{}};
    std::vector<std::size_t> n_values{50, 100, 200, 400, 800};
    std::size_t replicates = 200;
    std::uint64_t master_seed = 20240917;
    std::filesystem::path out_dir = "out";
    std::optional<BerryEsseenSettings> berry_esseen;
    std::optional<BiasScanSettings> bias_scan;
    unsigned threads = 1;
    bool record_timing = false;  ///< write wall_time_ms to CSV (breaks byte-identity)

    /// Throws DomainError on an empty or unsorted sweep or zero replicates.
    void validate() const;
};

/// Every key accepted by experiment_from_config.
const std::set<std::string>& experiment_keys();

/// Builds an ExperimentConfig from the [ensemble], [experiment],
/// [berry_esseen], [bias_scan] and [output] sections.
ExperimentConfig experiment_from_config(const Config& config);

/// One replicate and unit-vector law. A failed replicate keeps its
/// coordinates, NaN statistics and a nonempty `error`.
struct ExperimentRecord {
    std::size_t n = 0;
    std::size_t replicate = 0;
    std::string vector_law;
    std::string ensemble;
    std::uint64_t seed = 0;
    double delta_vesd = 0.0;
    double delta_esd = 0.0;
    double be_lhs = 0.0;
    double be_rhs = 0.0;
    double wall_time_ms = 0.0;
    std::string error;

    bool ok() const { return error.empty(); }
};

using RecordSink = std::function<void(const ExperimentRecord&)>;

/// Runs the sweep, emitting records ordered by (n, vector law, replicate)
/// whatever the thread count.
void run_experiment(const ExperimentConfig& cfg, const RecordSink& sink);
std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg);

inline constexpr std::string_view kRecordsHeader =
    "n,replicate,vector_law,ensemble,seed,delta_vesd,delta_esd,be_lhs,be_rhs,wall_time_ms";

/// Writes the fixed-header CSV. wall_time_ms is left empty unless
/// `with_timing`, so untimed output depends only on the configuration.
void write_records_csv(std::ostream& out, std::span<const ExperimentRecord> records, bool with_timing);
/// Failed rows as n,replicate,vector_law,seed,error.
void write_errors_csv(std::ostream& out, std::span<const ExperimentRecord> records);
/// Throws DomainError on a bad header or malformed row.
std::vector<ExperimentRecord> read_records_csv(std::istream& in);

struct LawSummary {
    std::string law;
    std::vector<std::size_t> ns;
    std::vector<double> mean_distance;
    std::vector<std::size_t> samples;
    std::optional<RateFit> fit;
};

struct ExperimentSummary {
    std::vector<LawSummary> laws;  ///< VESD, in first-seen order
    LawSummary esd;
    std::size_t failures = 0;
    std::size_t be_checks = 0;
    std::size_t be_violations = 0;

    nlohmann::ordered_json to_json() const;
};

/// Per-law mean VESD distance per n and its rate fit, plus the same for the
/// ESD. With `require_fit` fewer than three distinct n throws DomainError;
/// otherwise fits are skipped.
ExperimentSummary aggregate_and_fit(std::span<const ExperimentRecord> records, bool require_fit = true);

struct BiasRow {
    std::size_t n = 0;
    double u = 0.0;
    double v = 0.0;
    std::complex<double> mean_transform{};
    std::complex<double> limit{};
    double abs_bias = 0.0;   ///< |mean s_n^H(z) - s(z)|
    double bound = 0.0;      ///< 1 / (n v)
    double ratio = 0.0;      ///< abs_bias / bound
    double std_error = 0.0;  ///< standard error of the mean transform
    std::size_t replicates = 0;
};

/// Aggregates per-replicate transforms (outer index replicate, inner index u)
/// into one row per u.
std::vector<BiasRow> summarize_bias(std::size_t n, double v, std::span<const double> us,
                                    std::span<const std::vector<std::complex<double>>> per_replicate);

/// For each n: averages x^*(W - zI)^{-1} x over replicates at z = u + i v(n)
/// and compares with the semicircle transform. Uses the first unit-vector
/// law. Throws DomainError for an empty u grid.
std::vector<BiasRow> bias_scan(const ExperimentConfig& cfg, const EvaluationDomain& domain,
                               std::span<const double> u_values = {});

void write_bias_csv(std::ostream& out, std::span<const BiasRow> rows);

/// Step-CDF export for plotting, replicate 0 of each (n, law):
/// esd_n<N>.csv, vesd_n<N>_<law>.csv, and semicircle.csv on a fine grid.
/// Returns the files written.
std::vector<std::filesystem::path> export_step_cdfs(const ExperimentConfig& cfg, const std::filesystem::path& dir);

/// Runs fn(i) for i in [0, count) on up to `threads` workers. The first
/// exception thrown by any call is rethrown after all workers finish.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(threads, 1u), count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned t = 0; t < workers; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        next = count;
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace vesd
