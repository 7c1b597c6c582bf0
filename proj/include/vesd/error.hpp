#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace vesd {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Precondition violations: bad parameters, out-of-domain arguments.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed configuration. Carries the offending line (0 when unknown) and key.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, std::size_t line = 0, std::string key = {})
        : Error(line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line), key_(std::move(key)) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& key() const noexcept { return key_; }

private:
    std::size_t line_;
    std::string key_;
};

/// Identifies the random stream a sample was drawn from.
struct SeedRecord {
    std::uint64_t master_seed = 0;
    std::uint64_t replicate = 0;
};

/// Numerical failure inside a solver, tagged with the sample's seed record.
class SolverError : public Error {
public:
    SolverError(const std::string& what, SeedRecord seed)
        : Error(what + " (seed " + std::to_string(seed.master_seed) + ", replicate "
                + std::to_string(seed.replicate) + ")"),
          seed_(seed) {}

    SeedRecord seed() const noexcept { return seed_; }

private:
    SeedRecord seed_;
};

}  // namespace vesd
