#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "vesd/error.hpp"
#include "vesd/harness.hpp"
#include "vesd/semicircle.hpp"

using namespace vesd;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.n_values = {20, 40, 80};
    cfg.replicates = 6;
    cfg.master_seed = 77;
    cfg.vector_specs = {UnitVectorSpec{}, UnitVectorSpec{VectorLaw::Binomial10_06}, UnitVectorSpec::basis(1)};
    cfg.berry_esseen = BerryEsseenSettings{};
    return cfg;
}

std::string to_csv(const std::vector<ExperimentRecord>& recs) {
    std::ostringstream out;
    write_records_csv(out, recs, false);
    return out.str();
}

}  // namespace

TEST(RunExperiment, TwoRecordsForTwoReplicates) {
    ExperimentConfig cfg;
    cfg.n_values = {50};
    cfg.replicates = 2;
    cfg.vector_specs = {UnitVectorSpec::basis(1)};
    const auto a = run_experiment(cfg);
    const auto b = run_experiment(cfg);
    ASSERT_EQ(a.size(), 2u);
    EXPECT_EQ(to_csv(a), to_csv(b));
    EXPECT_EQ(a[0].vector_law, "basis1");
    EXPECT_EQ(a[1].replicate, 1u);
}

TEST(RunExperiment, OrderAndRanges) {
    const auto cfg = small_config();
    const auto recs = run_experiment(cfg);
    ASSERT_EQ(recs.size(), 3u * 3u * 6u);
    std::size_t i = 0;
    for (std::size_t n : cfg.n_values)
        for (const auto& law : cfg.vector_specs)
            for (std::size_t rep = 0; rep < cfg.replicates; ++rep, ++i) {
                const auto& r = recs[i];
                EXPECT_EQ(r.n, n);
                EXPECT_EQ(r.vector_law, law.name());
                EXPECT_EQ(r.replicate, rep);
                EXPECT_TRUE(r.ok());
                EXPECT_GE(r.delta_vesd, 0.0);
                EXPECT_LE(r.delta_vesd, 1.0);
                EXPECT_GE(r.delta_esd, 0.0);
                EXPECT_LE(r.delta_esd, 1.0);
                EXPECT_LE(r.be_lhs, r.be_rhs * (1 + 1e-6));
                EXPECT_EQ(r.be_lhs, r.delta_vesd);
            }
}

TEST(RunExperiment, ThreadCountDoesNotMatter) {
    auto cfg = small_config();
    const auto serial = to_csv(run_experiment(cfg));
    for (unsigned t : {2u, 3u, 8u}) {
        cfg.threads = t;
        EXPECT_EQ(to_csv(run_experiment(cfg)), serial) << t;
    }
}

TEST(RunExperiment, EsdSharedAcrossLaws) {
    const auto recs = run_experiment(small_config());
    for (std::size_t i = 0; i + 6 < 18; ++i) EXPECT_EQ(recs[i].delta_esd, recs[i + 6].delta_esd);
}

TEST(Records, CsvRoundTripReproducesSummary) {
    const auto recs = run_experiment(small_config());
    std::stringstream io;
    write_records_csv(io, recs, true);
    const auto back = read_records_csv(io);
    ASSERT_EQ(back.size(), recs.size());
    EXPECT_EQ(aggregate_and_fit(back).to_json().dump(), aggregate_and_fit(recs).to_json().dump());
    EXPECT_EQ(back[5].wall_time_ms, recs[5].wall_time_ms);
}

TEST(Records, HeaderFixedAndValidated) {
    std::ostringstream out;
    write_records_csv(out, {}, false);
    EXPECT_EQ(out.str(), std::string(kRecordsHeader) + "\n");
    std::istringstream bad("n,replicate\n1,2\n");
    EXPECT_THROW(read_records_csv(bad), DomainError);
    std::istringstream short_row(std::string(kRecordsHeader) + "\n50,0,x\n");
    EXPECT_THROW(read_records_csv(short_row), DomainError);
}

TEST(Aggregate, SyntheticPowerLaw) {
    std::vector<ExperimentRecord> recs;
    for (std::size_t n : {50u, 100u, 200u, 400u})
        for (std::size_t rep = 0; rep < 3; ++rep) {
            ExperimentRecord r;
            r.n = n;
            r.replicate = rep;
            r.vector_law = "uniform01";
            r.ensemble = "GOE";
            r.delta_vesd = 1.15 / std::sqrt(static_cast<double>(n));
            r.delta_esd = 2.0 / static_cast<double>(n);
            r.be_lhs = r.be_rhs = std::nan("");
            recs.push_back(r);
        }
    const auto s = aggregate_and_fit(recs);
    ASSERT_EQ(s.laws.size(), 1u);
    EXPECT_NEAR(s.laws[0].fit->slope, -0.5, 1e-12);
    EXPECT_NEAR(s.laws[0].fit->fixed_exponent_coefficient, 1.15, 1e-12);
    EXPECT_NEAR(s.esd.fit->slope, -1.0, 1e-12);
    EXPECT_EQ(s.be_checks, 0u);
    EXPECT_EQ(s.esd.samples.front(), 3u);

    recs.resize(6);
    EXPECT_THROW(aggregate_and_fit(recs), DomainError);
    EXPECT_FALSE(aggregate_and_fit(recs, false).laws[0].fit.has_value());
}

TEST(Aggregate, FailuresCountedNotAveraged) {
    auto recs = run_experiment(small_config());
    const auto clean = aggregate_and_fit(recs);
    recs[0].error = "eigensolver did not converge";
    recs[0].delta_vesd = std::nan("");
    const auto s = aggregate_and_fit(recs);
    EXPECT_EQ(s.failures, 1u);
    EXPECT_EQ(s.laws[0].samples[0], 5u);
    EXPECT_TRUE(std::isfinite(s.laws[0].mean_distance[0]));
    EXPECT_NE(s.laws[0].mean_distance[0], clean.laws[0].mean_distance[0]);
}

TEST(Bias, ZeroMatrixTransformIsMinusInverseZ) {
    const std::vector<double> us{-1.0, 0.0, 2.5};
    const double v = 0.3;
    std::vector<std::vector<std::complex<double>>> per(4);
    for (auto& row : per)
        for (double u : us) row.push_back(-1.0 / std::complex<double>(u, v));
    const auto rows = summarize_bias(10, v, us, per);
    ASSERT_EQ(rows.size(), 3u);
    for (std::size_t k = 0; k < 3; ++k) {
        const std::complex<double> z(us[k], v);
        EXPECT_NEAR(rows[k].abs_bias, std::abs(-1.0 / z - semicircle::stieltjes(z)), 1e-15);
        EXPECT_NEAR(rows[k].bound, 1.0 / (10 * v), 1e-15);
        EXPECT_EQ(rows[k].std_error, 0.0);
        EXPECT_EQ(rows[k].replicates, 4u);
    }
}

TEST(Bias, LargeImaginaryPart) {
    ExperimentConfig cfg;
    cfg.n_values = {50};
    cfg.replicates = 100;
    EvaluationDomain d;
    d.c0 = 10.0 * std::sqrt(50.0);
    const std::vector<double> us{-1.0, 0.0, 1.0};
    for (const auto& row : bias_scan(cfg, d, us)) {
        EXPECT_NEAR(row.v, 10.0, 1e-12);
        EXPECT_LE(row.abs_bias, 0.05);
    }
}

TEST(Bias, ShrinksWithDimensionNearEdge) {
    // Near the spectral edge the bias is large enough to resolve above the
    // Monte Carlo error at small n.
    ExperimentConfig cfg;
    cfg.n_values = {10, 80};
    cfg.replicates = 4000;
    const std::vector<double> us{2.2};
    const auto rows = bias_scan(cfg, EvaluationDomain{}, us);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_LT(rows[1].abs_bias + 2.0 * rows[1].std_error, rows[0].abs_bias - 2.0 * rows[0].std_error);
}

TEST(Bias, Deterministic) {
    ExperimentConfig cfg;
    cfg.n_values = {30};
    cfg.replicates = 20;
    const std::vector<double> us{0.5};
    const auto a = bias_scan(cfg, EvaluationDomain{}, us);
    cfg.threads = 4;
    const auto b = bias_scan(cfg, EvaluationDomain{}, us);
    EXPECT_EQ(a[0].mean_transform, b[0].mean_transform);
}

TEST(Bias, RejectsEmptyGrid) {
    EvaluationDomain d;
    d.u_min = 1.0;
    d.u_max = 0.0;
    EXPECT_THROW(bias_scan(ExperimentConfig{}, d), DomainError);
}

TEST(ParallelFor, PropagatesFirstException) {
    std::vector<int> hit(100, 0);
    parallel_for(100, 4, [&](std::size_t i) { hit[i] = 1; });
    EXPECT_EQ(std::accumulate(hit.begin(), hit.end(), 0), 100);
    EXPECT_THROW(parallel_for(100, 4, [](std::size_t i) {
                     if (i == 37) throw DomainError("boom");
                 }),
                 DomainError);
}
