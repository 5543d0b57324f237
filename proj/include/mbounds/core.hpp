#pragma once

// Domain types shared by the whole library: dense non-negative matrices,
// exponent regimes, vectors on the monotone cone, and bound results.

#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mbounds/errors.hpp"
#include "mbounds/util.hpp"

namespace mbounds {

enum class Regime { LowerBound, UpperBound };

inline const char* regime_name(Regime r) {
    return r == Regime::LowerBound ? "lower" : "upper";
}

// Lower regime: p >= 1 and 0 < q <= p (sharp lower bound, min over r).
// Upper regime: 0 < p <= 1 and q >= p (sharp upper bound, max over r).
inline void validate_regime(double p, double q, Regime regime) {
    if (!std::isfinite(p) || !std::isfinite(q))
        throw RegimeViolation("exponents must be finite");
    if (regime == Regime::LowerBound) {
        if (!(p >= 1.0)) throw RegimeViolation("lower regime requires p >= 1");
        if (!(q > 0.0)) throw RegimeViolation("lower regime requires q > 0");
        if (!(q <= p)) throw RegimeViolation("lower regime requires q <= p");
    } else {
        if (!(p > 0.0)) throw RegimeViolation("upper regime requires p > 0");
        if (!(p <= 1.0)) throw RegimeViolation("upper regime requires p <= 1");
        if (!(q >= p)) throw RegimeViolation("upper regime requires q >= p");
    }
}

struct ExponentPair {
    double p;
    double q;
    Regime regime;

    ExponentPair(double p_, double q_, Regime regime_) : p(p_), q(q_), regime(regime_) {
        validate_regime(p, q, regime);
    }

    static ExponentPair lower(double p, double q) { return {p, q, Regime::LowerBound}; }
    static ExponentPair upper(double p, double q) { return {p, q, Regime::UpperBound}; }
};

// Dense m x n matrix with entries >= 0, stored row-major.
class NonNegativeMatrix {
  public:
    NonNegativeMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
        : rows_(rows), cols_(cols), entries_(std::move(entries)) {
        if (rows_ < 1 || cols_ < 1) throw SizeError("matrix must have at least one row and column");
        if (entries_.size() != rows_ * cols_) throw SizeError("entry count does not match dimensions");
        for (double v : entries_) {
            if (!std::isfinite(v)) throw DomainError("matrix entries must be finite");
            if (v < 0.0) throw DomainError("matrix entries must be non-negative");
        }
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
    std::span<const double> row(std::size_t i) const {
        return {entries_.data() + i * cols_, cols_};
    }
    const std::vector<double>& entries() const { return entries_; }

    NonNegativeMatrix scaled(double c) const {
        std::vector<double> e(entries_);
        for (double& v : e) v *= c;
        return {rows_, cols_, std::move(e)};
    }

    // CSV ingestion: one row per line, comma-separated decimal entries, no
    // header. Ragged rows, negatives and non-finite values are rejected.
    static NonNegativeMatrix from_csv(std::istream& in) {
        std::vector<double> entries;
        std::size_t rows = 0, cols = 0;
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
            std::size_t row_cols = 0;
            std::stringstream ls(line);
            std::string cell;
            while (std::getline(ls, cell, ',')) {
                const char* b = cell.c_str();
                char* end = nullptr;
                const double v = std::strtod(b, &end);
                while (end && *end == ' ') ++end;
                if (end == b || (end && *end != '\0'))
                    throw InputError("csv: cannot parse entry '" + cell + "'");
                if (!std::isfinite(v)) throw InputError("csv: non-finite entry");
                if (v < 0.0) throw InputError("csv: negative entry");
                entries.push_back(v);
                ++row_cols;
            }
            if (row_cols == 0) throw InputError("csv: empty row");
            if (rows == 0) {
                cols = row_cols;
            } else if (row_cols != cols) {
                throw InputError("csv: ragged rows");
            }
            ++rows;
        }
        if (rows == 0) throw InputError("csv: empty file");
        return {rows, cols, std::move(entries)};
    }

    static NonNegativeMatrix from_csv_file(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw InputError("cannot open matrix file: " + path);
        return from_csv(f);
    }

  private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> entries_;
};

// Non-increasing non-negative sequence; the cone element of the bound problem.
class MonotoneVector {
  public:
    explicit MonotoneVector(std::vector<double> values) : values_(std::move(values)) {
        if (values_.empty()) throw SizeError("monotone vector must be non-empty");
        double prev = std::numeric_limits<double>::infinity();
        for (double v : values_) {
            if (!std::isfinite(v)) throw DomainError("monotone vector entries must be finite");
            if (v < 0.0) throw DomainError("monotone vector entries must be non-negative");
            if (v > prev) throw DomainError("monotone vector must be non-increasing");
            prev = v;
        }
    }

    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    const std::vector<double>& values() const { return values_; }
    bool is_zero() const {
        return values_.front() == 0.0; // non-increasing, so the head dominates
    }

  private:
    std::vector<double> values_;
};

// (1,...,1,0,...,0) with r leading ones; the equality case of the sharp bound.
inline MonotoneVector step_vector(std::size_t r, std::size_t n) {
    if (r < 1 || r > n) throw IndexOutOfRange("step vector requires 1 <= r <= n");
    std::vector<double> v(n, 0.0);
    for (std::size_t i = 0; i < r; ++i) v[i] = 1.0;
    return MonotoneVector(std::move(v));
}

// (sum x_i^p)^{1/p}; for 0 < p < 1 this is the quasi-norm, same formula.
inline double pnorm(std::span<const double> x, double p) {
    if (!(p > 0.0)) throw DomainError("pnorm requires p > 0");
    KahanSum s;
    for (double v : x) {
        if (v > 0.0) s.add(std::pow(v, p));
    }
    const double total = s.value();
    return total > 0.0 ? std::pow(total, 1.0 / p) : 0.0;
}

inline double pnorm(const MonotoneVector& x, double p) {
    return pnorm(std::span<const double>(x.values()), p);
}

inline double pnorm(const std::vector<double>& x, double p) {
    return pnorm(std::span<const double>(x), p);
}

// Result of the sharp-bound computation: lambda^q is the min (lower regime)
// or max (upper regime) of the s_r values; optimal_r is the smallest
// attaining index and extremal the corresponding step vector.
struct BoundResult {
    double lambda = 0.0;
    double lambda_pow_q = 0.0;
    std::size_t optimal_r = 0; // 1-based
    std::vector<double> s_values;
    MonotoneVector extremal;
};

} // namespace mbounds
