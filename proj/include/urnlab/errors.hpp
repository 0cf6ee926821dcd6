#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace urnlab {

// Base class for every error raised by the library. Each subclass carries the
// fields needed to report the failure without re-parsing the message.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonStochasticRow : public Error {
public:
    NonStochasticRow(std::uint64_t row, double sum)
        : Error("row " + std::to_string(row) + " sums to " + std::to_string(sum) + ", expected 1"),
          row_(row), sum_(sum) {}
    std::uint64_t row() const noexcept { return row_; }
    double sum() const noexcept { return sum_; }

private:
    std::uint64_t row_;
    double sum_;
};

class NegativeEntry : public Error {
public:
    NegativeEntry(std::uint64_t row, std::uint64_t col)
        : Error("negative entry at (" + std::to_string(row) + ", " + std::to_string(col) + ")"),
          row_(row), col_(col) {}
    std::uint64_t row() const noexcept { return row_; }
    std::uint64_t col() const noexcept { return col_; }

private:
    std::uint64_t row_;
    std::uint64_t col_;
};

class TruncationOverflow : public Error {
public:
    TruncationOverflow(std::size_t support, std::size_t cap)
        : Error("support of size " + std::to_string(support) + " exceeds cap " + std::to_string(cap)),
          support_(support), cap_(cap) {}
    std::size_t support() const noexcept { return support_; }
    std::size_t cap() const noexcept { return cap_; }

private:
    std::size_t support_;
    std::size_t cap_;
};

class NoConvergence : public Error {
public:
    NoConvergence(std::size_t iterations, double residual)
        : Error("no convergence after " + std::to_string(iterations) +
                " iterations (residual " + std::to_string(residual) + ")"),
          iterations_(iterations), residual_(residual) {}
    std::size_t iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

private:
    std::size_t iterations_;
    double residual_;
};

class NoDecay : public Error {
public:
    NoDecay(double first, double last)
        : Error("deviation did not halve: e_1 = " + std::to_string(first) +
                ", e_max = " + std::to_string(last)),
          first_(first), last_(last) {}
    double first() const noexcept { return first_; }
    double last() const noexcept { return last_; }

private:
    double first_;
    double last_;
};

class ZeroMass : public Error {
public:
    ZeroMass() : Error("initial measure has zero total mass") {}
};

class HorizonTooLarge : public Error {
public:
    HorizonTooLarge(int horizon, int cap)
        : Error("horizon " + std::to_string(horizon) + " exceeds enumeration cap " + std::to_string(cap)) {}
};

class InfiniteSupportReachable : public Error {
public:
    InfiniteSupportReachable() : Error("kernel rows have infinite support; exact enumeration refused") {}
};

class UnknownVertex : public Error {
public:
    explicit UnknownVertex(std::int64_t v)
        : Error("unknown vertex " + std::to_string(v)), vertex_(v) {}
    std::int64_t vertex() const noexcept { return vertex_; }

private:
    std::int64_t vertex_;
};

class UnknownColor : public Error {
public:
    explicit UnknownColor(std::uint64_t c) : Error("color " + std::to_string(c) + " is outside the kernel") {}
};

class RegimeMismatch : public Error {
public:
    using Error::Error;
};

class MissingCertificate : public Error {
public:
    MissingCertificate() : Error("an ergodicity certificate is required") {}
};

class HorizonMismatch : public Error {
public:
    HorizonMismatch(int a, int b)
        : Error("horizons differ: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

class ParseError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& message)
        : Error(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace urnlab
