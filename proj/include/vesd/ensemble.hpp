#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "vesd/error.hpp"
#include "vesd/rng.hpp"

namespace vesd {

// ---------------------------------------------------------------------------
// Entry laws

enum class EntryKind { StdNormal, Rademacher, StandardizedUniform, StandardizedExponential, Custom };

/// Law of the standardized (mean 0, variance 1) Wigner entries.
struct EntryLaw {
    EntryKind kind = EntryKind::StdNormal;
    std::string custom_id;  ///< sampler registry key when kind == Custom

    static EntryLaw normal() { return {EntryKind::StdNormal, {}}; }
    static EntryLaw rademacher() { return {EntryKind::Rademacher, {}}; }
    static EntryLaw uniform() { return {EntryKind::StandardizedUniform, {}}; }
    static EntryLaw exponential() { return {EntryKind::StandardizedExponential, {}}; }
    static EntryLaw custom(std::string id) { return {EntryKind::Custom, std::move(id)}; }

    /// Symmetric about zero, so the truncated mean vanishes.
    bool symmetric() const;
    std::string name() const;
    static EntryLaw parse(std::string_view text);

    friend bool operator==(const EntryLaw&, const EntryLaw&) = default;
};

using EntrySampler = std::function<double(StreamEngine&)>;

/// `count` real draws from `law` on the calibration stream keyed by `seed`.
std::vector<double> draw_entries(const EntryLaw& law, std::size_t count, std::uint64_t seed);

/// Registers a custom standardized law under `id`. Must happen before sampling
/// starts; the registry is not synchronized against concurrent registration.
void register_entry_sampler(const std::string& id, EntrySampler sampler);
bool has_entry_sampler(const std::string& id);

// ---------------------------------------------------------------------------
// Ensemble recipe

enum class Symmetry { RealSymmetric, ComplexHermitian };
enum class Construction { DirectEntries, GaussianSymmetrized };

struct TruncationPolicy {
    bool enabled = false;
    double epsilon_exponent = 0.05;  ///< eps_n = n^{-epsilon_exponent}
    bool remove_diagonal = false;

    double epsilon(std::size_t n) const;
    /// eps_n * n^{1/4}, the truncation threshold on unscaled entries.
    double threshold(std::size_t n) const;
};

struct EnsembleSpec {
    std::size_t n = 2;
    Symmetry symmetry = Symmetry::RealSymmetric;
    EntryLaw entry_law = EntryLaw::normal();
    TruncationPolicy preprocessing{};
    Construction construction = Construction::GaussianSymmetrized;

    /// Throws DomainError for n < 2, an out-of-range exponent, or
    /// GaussianSymmetrized with a non-normal law.
    void validate() const;

    /// Short label: "GOE", "GUE", or "real-<law>" / "complex-<law>".
    std::string tag() const;

    static EnsembleSpec goe(std::size_t n);
    static EnsembleSpec gue(std::size_t n);
};

std::string to_string(Symmetry s);
std::string to_string(Construction c);
Symmetry parse_symmetry(std::string_view text);
Construction parse_construction(std::string_view text);

// ---------------------------------------------------------------------------
// Samples

using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

/// A sampled Wigner matrix W = X / sqrt(n).
struct MatrixSample {
    std::variant<RealMatrix, ComplexMatrix> entries;
    SeedRecord seed{};
    EntryLaw entry_law = EntryLaw::normal();

    std::size_t n() const;
    bool is_complex() const { return entries.index() == 1; }
    const RealMatrix& real() const { return std::get<RealMatrix>(entries); }
    const ComplexMatrix& complex() const { return std::get<ComplexMatrix>(entries); }

    static MatrixSample zero(std::size_t n, Symmetry symmetry = Symmetry::RealSymmetric);
};

/// Population constants of the truncated-centered entry.
struct TruncationConstants {
    double threshold = 0.0;          ///< eps_n n^{1/4}
    std::complex<double> mean{};     ///< m = E[X 1(|X| <= threshold)]
    double sigma = 1.0;              ///< sigma_1
    bool analytic = true;            ///< false when estimated by Monte Carlo
};

/// Computes m and sigma_1 for `law` at dimension n. Normal and Rademacher are
/// exact; other laws use a fixed-seed 10^6-draw Monte Carlo estimate.
/// Throws DomainError when sigma_1 <= 1e-6.
TruncationConstants truncation_constants(const EntryLaw& law, Symmetry symmetry,
                                         const TruncationPolicy& policy, std::size_t n);

/// Applies truncation, centralization and rescaling to a raw sample. Entries
/// are mapped X -> (X 1(|X| <= t) - m) / sigma_1 on the sqrt(n) scale.
MatrixSample preprocess_entries(const MatrixSample& raw, const TruncationPolicy& policy);

/// Same as above with precomputed constants (the sampler hoists them out of
/// the replicate loop).
MatrixSample preprocess_entries(const MatrixSample& raw, const TruncationPolicy& policy,
                                const TruncationConstants& constants);

/// Validated spec with its preprocessing constants computed once.
class PreparedEnsemble {
public:
    explicit PreparedEnsemble(EnsembleSpec spec);

    const EnsembleSpec& spec() const { return spec_; }
    const std::optional<TruncationConstants>& constants() const { return constants_; }

    MatrixSample sample(std::uint64_t seed, std::uint64_t replicate) const;

private:
    EnsembleSpec spec_;
    std::optional<TruncationConstants> constants_;
};

/// Draws one Wigner matrix; a pure function of (spec, seed, replicate).
MatrixSample sample_wigner(const EnsembleSpec& spec, std::uint64_t seed, std::uint64_t replicate);

// ---------------------------------------------------------------------------
// Unit vectors

enum class VectorLaw { Uniform01, StdNormal, Poisson1, Binomial10_06, CanonicalBasis, Constant };

/// x = z / |z| with z_i drawn i.i.d. from `law`.
struct UnitVectorSpec {
    VectorLaw law = VectorLaw::Uniform01;
    std::size_t basis_index = 1;  ///< 1-based, CanonicalBasis only

    static UnitVectorSpec basis(std::size_t k) { return {VectorLaw::CanonicalBasis, k}; }

    std::string name() const;
    static UnitVectorSpec parse(std::string_view text);
    /// Stream sub-tag separating the laws' random streams.
    std::uint32_t stream_code() const;

    friend bool operator==(const UnitVectorSpec&, const UnitVectorSpec&) = default;
};

using UnitVector = Eigen::VectorXd;

UnitVector sample_unit_vector(const UnitVectorSpec& spec, std::size_t n, std::uint64_t seed,
                              std::uint64_t replicate);

}  // namespace vesd
