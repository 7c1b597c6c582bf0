#include "vesd/ensemble.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <random>

namespace vesd {

namespace {

constexpr std::uint64_t kCalibrationSeed = 0x7E57'CA11'B4A7'E001ull;
constexpr std::size_t kCalibrationDraws = 1'000'000;
constexpr int kMaxZeroResamples = 100;

std::map<std::string, EntrySampler>& sampler_registry() {
    static std::map<std::string, EntrySampler> registry = [] {
        std::map<std::string, EntrySampler> r;
        // Student t with 12 degrees of freedom: finite moments up to order 11.
        r.emplace("student_t12", [](StreamEngine& engine) {
            constexpr double dof = 12.0;
            std::student_t_distribution<double> t(dof);
            return t(engine) * std::sqrt((dof - 2.0) / dof);
        });
        return r;
    }();
    return registry;
}

/// Stateful draw source for one law; keeps distribution caches between draws.
class LawSampler {
public:
    explicit LawSampler(const EntryLaw& law) : law_(law) {
        if (law.kind == EntryKind::Custom) {
            auto it = sampler_registry().find(law.custom_id);
            if (it == sampler_registry().end())
                throw DomainError("unknown custom entry sampler '" + law.custom_id + "'");
            custom_ = it->second;
        }
    }

    double operator()(StreamEngine& engine) {
        switch (law_.kind) {
            case EntryKind::StdNormal:
                return normal_(engine);
            case EntryKind::Rademacher:
                return (engine() & 1u) ? 1.0 : -1.0;
            case EntryKind::StandardizedUniform:
                return std::numbers::sqrt3 * (2.0 * engine.uniform() - 1.0);
            case EntryKind::StandardizedExponential:
                return -std::log(engine.uniform_open()) - 1.0;
            case EntryKind::Custom:
                return custom_(engine);
        }
        return 0.0;
    }

    /// Off-diagonal draw for the requested symmetry class; complex entries
    /// have i.i.d. real and imaginary parts of variance 1/2.
    std::complex<double> offdiag(StreamEngine& engine, bool complex) {
        if (!complex) return {(*this)(engine), 0.0};
        const double re = (*this)(engine);
        const double im = (*this)(engine);
        return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
    }

private:
    EntryLaw law_;
    std::normal_distribution<double> normal_;
    EntrySampler custom_;
};

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// Applies the truncation map to one unscaled entry.
std::complex<double> truncate_entry(std::complex<double> x, const TruncationConstants& c) {
    const std::complex<double> kept = std::abs(x) <= c.threshold ? x : std::complex<double>{};
    return (kept - c.mean) / c.sigma;
}

}  // namespace

// ---------------------------------------------------------------------------

bool EntryLaw::symmetric() const {
    switch (kind) {
        case EntryKind::StdNormal:
        case EntryKind::Rademacher:
        case EntryKind::StandardizedUniform:
            return true;
        case EntryKind::Custom:
            return custom_id == "student_t12";
        default:
            return false;
    }
}

std::string EntryLaw::name() const {
    switch (kind) {
        case EntryKind::StdNormal: return "normal";
        case EntryKind::Rademacher: return "rademacher";
        case EntryKind::StandardizedUniform: return "uniform";
        case EntryKind::StandardizedExponential: return "exponential";
        case EntryKind::Custom: return "custom:" + custom_id;
    }
    return "?";
}

EntryLaw EntryLaw::parse(std::string_view text) {
    if (text == "normal" || text == "std_normal") return normal();
    if (text == "rademacher") return rademacher();
    if (text == "uniform") return uniform();
    if (text == "exponential") return exponential();
    if (text.starts_with("custom:")) {
        std::string id(text.substr(7));
        if (!has_entry_sampler(id)) throw DomainError("unknown custom entry sampler '" + id + "'");
        return custom(std::move(id));
    }
    throw DomainError("unknown entry law '" + std::string(text) + "'");
}

void register_entry_sampler(const std::string& id, EntrySampler sampler) {
    if (id.empty() || !sampler) throw DomainError("custom sampler needs an id and a callable");
    sampler_registry()[id] = std::move(sampler);
}

bool has_entry_sampler(const std::string& id) { return sampler_registry().contains(id); }

std::vector<double> draw_entries(const EntryLaw& law, std::size_t count, std::uint64_t seed) {
    LawSampler draw(law);
    StreamEngine engine(seed, 0, 0, role_tag(StreamRole::Calibration, 1));
    std::vector<double> out(count);
    for (auto& v : out) v = draw(engine);
    return out;
}

// ---------------------------------------------------------------------------

double TruncationPolicy::epsilon(std::size_t n) const {
    return std::pow(static_cast<double>(n), -epsilon_exponent);
}

double TruncationPolicy::threshold(std::size_t n) const {
    return epsilon(n) * std::pow(static_cast<double>(n), 0.25);
}

void EnsembleSpec::validate() const {
    if (n < 2) throw DomainError("ensemble dimension must be at least 2, got " + std::to_string(n));
    if (construction == Construction::GaussianSymmetrized && entry_law.kind != EntryKind::StdNormal)
        throw DomainError("gaussian_symmetrized construction requires normal entries, got "
                          + entry_law.name());
    if (preprocessing.enabled
        && !(preprocessing.epsilon_exponent > 0.0 && preprocessing.epsilon_exponent < 0.25))
        throw DomainError("epsilon_exponent must lie in (0, 1/4)");
    if (entry_law.kind == EntryKind::Custom && !has_entry_sampler(entry_law.custom_id))
        throw DomainError("unknown custom entry sampler '" + entry_law.custom_id + "'");
}

std::string EnsembleSpec::tag() const {
    if (construction == Construction::GaussianSymmetrized)
        return symmetry == Symmetry::RealSymmetric ? "GOE" : "GUE";
    return (symmetry == Symmetry::RealSymmetric ? "real-" : "complex-") + entry_law.name();
}

EnsembleSpec EnsembleSpec::goe(std::size_t n) {
    EnsembleSpec s;
    s.n = n;
    return s;
}

EnsembleSpec EnsembleSpec::gue(std::size_t n) {
    EnsembleSpec s = goe(n);
    s.symmetry = Symmetry::ComplexHermitian;
    return s;
}

std::string to_string(Symmetry s) {
    return s == Symmetry::RealSymmetric ? "real" : "complex";
}

std::string to_string(Construction c) {
    return c == Construction::DirectEntries ? "direct" : "gaussian_symmetrized";
}

Symmetry parse_symmetry(std::string_view text) {
    if (text == "real" || text == "real_symmetric") return Symmetry::RealSymmetric;
    if (text == "complex" || text == "complex_hermitian") return Symmetry::ComplexHermitian;
    throw DomainError("unknown symmetry '" + std::string(text) + "'");
}

Construction parse_construction(std::string_view text) {
    if (text == "direct" || text == "direct_entries") return Construction::DirectEntries;
    if (text == "gaussian_symmetrized") return Construction::GaussianSymmetrized;
    throw DomainError("unknown construction '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------

std::size_t MatrixSample::n() const {
    return std::visit([](const auto& m) { return static_cast<std::size_t>(m.rows()); }, entries);
}

MatrixSample MatrixSample::zero(std::size_t n, Symmetry symmetry) {
    MatrixSample s;
    const auto dim = static_cast<Eigen::Index>(n);
    if (symmetry == Symmetry::RealSymmetric)
        s.entries = RealMatrix(RealMatrix::Zero(dim, dim));
    else
        s.entries = ComplexMatrix(ComplexMatrix::Zero(dim, dim));
    return s;
}

TruncationConstants truncation_constants(const EntryLaw& law, Symmetry symmetry,
                                         const TruncationPolicy& policy, std::size_t n) {
    TruncationConstants c;
    c.threshold = policy.threshold(n);
    const double t = c.threshold;
    const bool complex = symmetry == Symmetry::ComplexHermitian;

    if (law.kind == EntryKind::StdNormal) {
        double second;
        if (complex) {
            // |X|^2 ~ Exp(1) when Re X, Im X ~ N(0, 1/2).
            second = 1.0 - (1.0 + t * t) * std::exp(-t * t);
        } else {
            const double density = std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi);
            second = (2.0 * std_normal_cdf(t) - 1.0) - 2.0 * t * density;
        }
        c.sigma = std::sqrt(std::max(second, 0.0));
    } else if (law.kind == EntryKind::Rademacher) {
        // |X| = 1 in both symmetry classes.
        c.sigma = t >= 1.0 ? 1.0 : 0.0;
    } else {
        c.analytic = false;
        LawSampler draw(law);
        StreamEngine engine(kCalibrationSeed, static_cast<std::uint64_t>(law.kind), 0,
                            role_tag(StreamRole::Calibration, complex ? 2 : 3));
        std::complex<double> sum{};
        double sum_sq = 0.0;
        for (std::size_t i = 0; i < kCalibrationDraws; ++i) {
            const auto x = draw.offdiag(engine, complex);
            if (std::abs(x) <= t) {
                sum += x;
                sum_sq += std::norm(x);
            }
        }
        const double count = static_cast<double>(kCalibrationDraws);
        const std::complex<double> mean = sum / count;
        c.mean = law.symmetric() ? std::complex<double>{} : mean;
        c.sigma = std::sqrt(std::max(sum_sq / count - std::norm(c.mean), 0.0));
    }

    if (!(c.sigma > 1e-6))
        throw DomainError("degenerate truncation: sigma_1 = " + std::to_string(c.sigma)
                          + " at threshold " + std::to_string(t));
    return c;
}

MatrixSample preprocess_entries(const MatrixSample& raw, const TruncationPolicy& policy) {
    if (!policy.enabled) throw DomainError("preprocess_entries called with a disabled policy");
    const auto symmetry = raw.is_complex() ? Symmetry::ComplexHermitian : Symmetry::RealSymmetric;
    return preprocess_entries(raw, policy, truncation_constants(raw.entry_law, symmetry, policy, raw.n()));
}

MatrixSample preprocess_entries(const MatrixSample& raw, const TruncationPolicy& policy,
                                const TruncationConstants& constants) {
    if (!policy.enabled) throw DomainError("preprocess_entries called with a disabled policy");
    MatrixSample out = raw;
    const auto n = static_cast<Eigen::Index>(raw.n());
    const double root_n = std::sqrt(static_cast<double>(n));

    std::visit(
        [&](auto& w) {
            using Scalar = typename std::decay_t<decltype(w)>::Scalar;
            for (Eigen::Index j = 0; j < n; ++j) {
                for (Eigen::Index i = 0; i < j; ++i) {
                    const auto mapped = truncate_entry(std::complex<double>(w(i, j)) * root_n, constants) / root_n;
                    if constexpr (std::is_same_v<Scalar, double>) {
                        w(i, j) = mapped.real();
                        w(j, i) = mapped.real();
                    } else {
                        w(i, j) = mapped;
                        w(j, i) = std::conj(mapped);
                    }
                }
                if (policy.remove_diagonal) {
                    w(j, j) = Scalar{0};
                } else {
                    const double x = std::real(w(j, j)) * root_n;
                    const double kept = std::abs(x) <= constants.threshold ? x : 0.0;
                    w(j, j) = Scalar((kept - constants.mean.real()) / constants.sigma / root_n);
                }
            }
        },
        out.entries);
    return out;
}

// ---------------------------------------------------------------------------

PreparedEnsemble::PreparedEnsemble(EnsembleSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    if (spec_.preprocessing.enabled)
        constants_ = truncation_constants(spec_.entry_law, spec_.symmetry, spec_.preprocessing, spec_.n);
}

MatrixSample PreparedEnsemble::sample(std::uint64_t seed, std::uint64_t replicate) const {
    const auto n = static_cast<Eigen::Index>(spec_.n);
    StreamEngine engine(seed, spec_.n, static_cast<std::uint32_t>(replicate), role_tag(StreamRole::Matrix));
    const bool complex = spec_.symmetry == Symmetry::ComplexHermitian;

    MatrixSample out;
    out.seed = {seed, replicate};
    out.entry_law = spec_.entry_law;

    if (spec_.construction == Construction::GaussianSymmetrized) {
        // W = (M + M*) / sqrt(2n), M with i.i.d. standard (complex) normal entries.
        LawSampler draw(EntryLaw::normal());
        ComplexMatrix m(n, n);
        for (Eigen::Index k = 0; k < n * n; ++k) m.data()[k] = draw.offdiag(engine, complex);
        const double scale = 1.0 / std::sqrt(2.0 * static_cast<double>(n));
        if (complex) {
            ComplexMatrix w(n, n);
            for (Eigen::Index j = 0; j < n; ++j) {
                for (Eigen::Index i = 0; i < j; ++i) {
                    w(i, j) = (m(i, j) + std::conj(m(j, i))) * scale;
                    w(j, i) = std::conj(w(i, j));
                }
                w(j, j) = 2.0 * m(j, j).real() * scale;
            }
            out.entries = std::move(w);
        } else {
            RealMatrix w(n, n);
            for (Eigen::Index j = 0; j < n; ++j) {
                for (Eigen::Index i = 0; i < j; ++i) {
                    w(i, j) = (m(i, j).real() + m(j, i).real()) * scale;
                    w(j, i) = w(i, j);
                }
                w(j, j) = 2.0 * m(j, j).real() * scale;
            }
            out.entries = std::move(w);
        }
    } else {
        // W = X / sqrt(n), X drawn on and above the diagonal and mirrored.
        LawSampler draw(spec_.entry_law);
        const double scale = 1.0 / std::sqrt(static_cast<double>(n));
        if (complex) {
            ComplexMatrix w(n, n);
            for (Eigen::Index j = 0; j < n; ++j) {
                for (Eigen::Index i = 0; i < j; ++i) {
                    w(i, j) = draw.offdiag(engine, true) * scale;
                    w(j, i) = std::conj(w(i, j));
                }
                w(j, j) = draw(engine) * scale;
            }
            out.entries = std::move(w);
        } else {
            RealMatrix w(n, n);
            for (Eigen::Index j = 0; j < n; ++j) {
                for (Eigen::Index i = 0; i < j; ++i) {
                    w(i, j) = draw(engine) * scale;
                    w(j, i) = w(i, j);
                }
                w(j, j) = draw(engine) * scale;
            }
            out.entries = std::move(w);
        }
    }

    if (constants_) return preprocess_entries(out, spec_.preprocessing, *constants_);
    if (spec_.preprocessing.remove_diagonal)
        std::visit([](auto& w) { w.diagonal().setZero(); }, out.entries);
    return out;
}

MatrixSample sample_wigner(const EnsembleSpec& spec, std::uint64_t seed, std::uint64_t replicate) {
    return PreparedEnsemble(spec).sample(seed, replicate);
}

// ---------------------------------------------------------------------------

std::string UnitVectorSpec::name() const {
    switch (law) {
        case VectorLaw::Uniform01: return "uniform01";
        case VectorLaw::StdNormal: return "normal";
        case VectorLaw::Poisson1: return "poisson1";
        case VectorLaw::Binomial10_06: return "binomial10_06";
        case VectorLaw::CanonicalBasis: return "basis" + std::to_string(basis_index);
        case VectorLaw::Constant: return "constant";
    }
    return "?";
}

UnitVectorSpec UnitVectorSpec::parse(std::string_view text) {
    if (text == "uniform01" || text == "uniform") return {VectorLaw::Uniform01, 1};
    if (text == "normal") return {VectorLaw::StdNormal, 1};
    if (text == "poisson1" || text == "poisson") return {VectorLaw::Poisson1, 1};
    if (text == "binomial10_06" || text == "binomial") return {VectorLaw::Binomial10_06, 1};
    if (text == "constant") return {VectorLaw::Constant, 1};
    if (text.starts_with("basis")) {
        const std::string digits(text.substr(5));
        std::size_t used = 0;
        unsigned long k = 0;
        try {
            k = std::stoul(digits, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != digits.size() || k == 0)
            throw DomainError("bad canonical basis vector '" + std::string(text) + "'");
        return basis(k);
    }
    throw DomainError("unknown unit-vector law '" + std::string(text) + "'");
}

std::uint32_t UnitVectorSpec::stream_code() const {
    return static_cast<std::uint32_t>(law) + 1;
}

UnitVector sample_unit_vector(const UnitVectorSpec& spec, std::size_t n, std::uint64_t seed,
                              std::uint64_t replicate) {
    if (n == 0) throw DomainError("unit vector dimension must be positive");
    const auto dim = static_cast<Eigen::Index>(n);

    if (spec.law == VectorLaw::CanonicalBasis) {
        if (spec.basis_index < 1 || spec.basis_index > n)
            throw DomainError("canonical basis index " + std::to_string(spec.basis_index)
                              + " outside 1.." + std::to_string(n));
        UnitVector e = UnitVector::Zero(dim);
        e(static_cast<Eigen::Index>(spec.basis_index - 1)) = 1.0;
        return e;
    }
    if (spec.law == VectorLaw::Constant)
        return UnitVector::Constant(dim, 1.0 / std::sqrt(static_cast<double>(n)));

    StreamEngine engine(seed, n, static_cast<std::uint32_t>(replicate),
                        role_tag(StreamRole::Vector, spec.stream_code()));
    std::normal_distribution<double> normal;
    std::poisson_distribution<int> poisson(1.0);
    std::binomial_distribution<int> binomial(10, 0.6);

    UnitVector z(dim);
    for (int attempt = 0; attempt < kMaxZeroResamples; ++attempt) {
        for (Eigen::Index i = 0; i < dim; ++i) {
            switch (spec.law) {
                case VectorLaw::Uniform01: z(i) = engine.uniform_open(); break;
                case VectorLaw::StdNormal: z(i) = normal(engine); break;
                case VectorLaw::Poisson1: z(i) = poisson(engine); break;
                case VectorLaw::Binomial10_06: z(i) = binomial(engine); break;
                default: break;
            }
        }
        const double norm = z.norm();
        if (norm > 0.0) return z / norm;
    }
    throw DomainError("unit vector law " + spec.name() + " produced " + std::to_string(kMaxZeroResamples)
                      + " consecutive all-zero draws");
}

}  // namespace vesd
