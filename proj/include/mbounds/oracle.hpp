#pragma once

// Independent verification that the closed form really is the extremum of
// ||Ax||_q / ||x||_p over the monotone cone: step-vector enumeration (the
// equality cases), randomized cone sampling, and derivative-free local search.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "mbounds/core.hpp"
#include "mbounds/engine.hpp"
#include "mbounds/errors.hpp"
#include "mbounds/util.hpp"

namespace mbounds::oracle {

inline double ratio(const NonNegativeMatrix& a, const MonotoneVector& x, double p, double q) {
    if (x.size() != a.cols()) throw SizeError("vector length must match matrix columns");
    if (x.is_zero()) throw ZeroVector("ratio undefined for the zero vector");
    std::vector<double> ax(a.rows(), 0.0);
    for (std::size_t j = 0; j < a.rows(); ++j) {
        const auto row = a.row(j);
        KahanSum s;
        for (std::size_t k = 0; k < a.cols(); ++k) s.add(row[k] * x[k]);
        ax[j] = s.value();
    }
    return pnorm(ax, q) / pnorm(x, p);
}

// min/max over r of the step-vector ratios, computed through actual
// mat-vec products; matches the solver's lambda to 1e-12 relative.
inline double enumerate_steps(const NonNegativeMatrix& a, const ExponentPair& pair) {
    validate_regime(pair.p, pair.q, pair.regime);
    double best = 0.0;
    for (std::size_t r = 1; r <= a.cols(); ++r) {
        const double v = ratio(a, step_vector(r, a.cols()), pair.p, pair.q);
        if (r == 1) {
            best = v;
        } else if (pair.regime == Regime::LowerBound) {
            best = std::min(best, v);
        } else {
            best = std::max(best, v);
        }
    }
    return best;
}

// Cone sample: suffix-cumulative sums of i.i.d. Exp(1) increments, normalized
// to pnorm = 1. Deterministic for a fixed (seed, index) pair.
inline MonotoneVector sample_monotone_one(std::size_t n, double p, std::uint64_t seed,
                                          std::uint64_t index) {
    SplitMix64 rng(SplitMix64::mix(seed, index));
    std::vector<double> x(n);
    double run = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        run += -std::log1p(-rng.uniform()); // Exp(1)
        x[i] = run;
    }
    const double norm = pnorm(x, p);
    for (double& v : x) v /= norm;
    return MonotoneVector(std::move(x));
}

inline std::vector<MonotoneVector> sample_monotone(std::size_t n, double p, std::size_t count,
                                                   std::uint64_t seed) {
    if (count < 1) throw SizeError("sample count must be >= 1");
    std::vector<MonotoneVector> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(sample_monotone_one(n, p, seed, i));
    return out;
}

namespace detail {

// Multiplicative single-coordinate move with running-max/min repair back onto
// the cone.
inline void perturb_and_repair(std::vector<double>& x, std::size_t i, double factor) {
    x[i] = std::max(x[i] * factor, 0.0);
    if (factor > 1.0) {
        for (std::size_t j = i; j-- > 0;) x[j] = std::max(x[j], x[j + 1]);
    } else {
        for (std::size_t j = i + 1; j < x.size(); ++j) x[j] = std::min(x[j], x[j - 1]);
    }
}

} // namespace detail

// Coordinate-wise multiplicative search for a cone vector with a worse ratio
// than the formula's (smaller in the lower regime, larger in the upper).
// 5 restarts, geometric step decay 0.5 every iters/5 steps.
inline MonotoneVector local_search(const NonNegativeMatrix& a, const ExponentPair& pair,
                                   const MonotoneVector& x0, std::size_t iters,
                                   std::uint64_t seed = 0x5eedull) {
    validate_regime(pair.p, pair.q, pair.regime);
    if (x0.is_zero()) throw ZeroVector("local search requires a nonzero start");
    const bool minimize = pair.regime == Regime::LowerBound;
    const std::size_t n = x0.size();

    std::vector<double> best = x0.values();
    double best_ratio = ratio(a, x0, pair.p, pair.q);

    for (std::size_t restart = 0; restart < 5; ++restart) {
        SplitMix64 rng(SplitMix64::mix(seed, restart));
        std::vector<double> cur = best;
        double cur_ratio = best_ratio;
        double step = 0.5;
        const std::size_t decay_every = std::max<std::size_t>(1, iters / 5);
        for (std::size_t it = 0; it < iters; ++it) {
            if (it > 0 && it % decay_every == 0) step *= 0.5;
            std::vector<double> cand = cur;
            const std::size_t i = static_cast<std::size_t>(rng.next() % n);
            const double factor = rng.uniform() < 0.5 ? 1.0 + step : 1.0 / (1.0 + step);
            detail::perturb_and_repair(cand, i, factor);
            if (cand[0] == 0.0) continue;
            const double v = ratio(a, MonotoneVector(std::vector<double>(cand)), pair.p, pair.q);
            if (minimize ? v < cur_ratio : v > cur_ratio) {
                cur = std::move(cand);
                cur_ratio = v;
            }
        }
        if (minimize ? cur_ratio < best_ratio : cur_ratio > best_ratio) {
            best = std::move(cur);
            best_ratio = cur_ratio;
        }
    }
    return MonotoneVector(std::move(best));
}

enum class Verdict { Consistent, Violation };

struct OracleReport {
    double formula_lambda = 0.0;
    double step_enum_lambda = 0.0;
    double sampled_best = 0.0; // worst ratio seen in the adverse direction
    double search_best = 0.0;
    MonotoneVector worst_vector;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    Verdict verdict = Verdict::Consistent;
    double violation_gap = 0.0; // relative amount by which lambda was beaten
};

inline OracleReport verify(const NonNegativeMatrix& a, const ExponentPair& pair,
                           std::size_t samples, std::uint64_t seed, std::size_t threads = 0) {
    validate_regime(pair.p, pair.q, pair.regime);
    if (samples < 1) throw SizeError("verify requires at least one sample");
    const bool minimize = pair.regime == Regime::LowerBound;
    const BoundResult formula = compute_bound(a, pair);
    const double enumerated = enumerate_steps(a, pair);

    struct ChunkBest {
        double value;
        std::uint64_t index;
    };
    constexpr std::size_t chunk = 256;
    const std::size_t n_chunks = (samples + chunk - 1) / chunk;
    std::vector<ChunkBest> chunk_best(n_chunks);
    parallel_for_chunks(
        n_chunks,
        [&](std::size_t c) {
            ChunkBest cb{minimize ? std::numeric_limits<double>::infinity()
                                  : -std::numeric_limits<double>::infinity(),
                         0};
            const std::size_t end = std::min(samples, (c + 1) * chunk);
            for (std::size_t i = c * chunk; i < end; ++i) {
                const auto x = sample_monotone_one(a.cols(), pair.p, seed, i);
                const double v = ratio(a, x, pair.p, pair.q);
                if (minimize ? v < cb.value : v > cb.value) cb = {v, i};
            }
            chunk_best[c] = cb;
        },
        threads);

    ChunkBest overall = chunk_best[0];
    for (const auto& cb : chunk_best)
        if (minimize ? cb.value < overall.value : cb.value > overall.value) overall = cb;

    MonotoneVector worst = sample_monotone_one(a.cols(), pair.p, seed, overall.index);
    const auto searched = local_search(a, pair, worst, 200, seed);
    const double search_ratio = ratio(a, searched, pair.p, pair.q);
    const auto searched_from_step = local_search(a, pair, formula.extremal, 200, seed + 1);
    const double step_search_ratio = ratio(a, searched_from_step, pair.p, pair.q);

    OracleReport rep{formula.lambda,
                     enumerated,
                     overall.value,
                     minimize ? std::min(search_ratio, step_search_ratio)
                              : std::max(search_ratio, step_search_ratio),
                     std::move(worst),
                     samples,
                     seed,
                     Verdict::Consistent,
                     0.0};
    if (minimize ? search_ratio < rep.sampled_best : search_ratio > rep.sampled_best)
        rep.worst_vector = searched;

    const double lam = rep.formula_lambda;
    const double enum_gap = std::abs(rep.step_enum_lambda - lam) / std::max(lam, 1e-300);
    const double adverse = minimize ? std::min(rep.sampled_best, rep.search_best)
                                    : std::max(rep.sampled_best, rep.search_best);
    const double beat = minimize ? (lam - adverse) / std::max(lam, 1e-300)
                                 : (adverse - lam) / std::max(lam, 1e-300);
    if (enum_gap > 1e-12 || beat > 1e-9) {
        rep.verdict = Verdict::Violation;
        rep.violation_gap = std::max(enum_gap, beat);
    }
    return rep;
}

// The Holder-step inequality behind the variational proof:
//   (sum (a+b)^q)^{p/q-1} (sum (a+b)^{q-1} a) >= (sum a^q)^{p/q}
// in the lower regime, reversed in the upper regime. Checked within -1e-12
// relative slack.
inline bool lemma1_check(const std::vector<double>& a, const std::vector<double>& b, double p,
                         double q) {
    if (a.empty() || a.size() != b.size()) throw SizeError("arrays must have equal length >= 1");
    const bool lower = p >= 1.0 && q > 0.0 && q <= p;
    const bool upper = p > 0.0 && p <= 1.0 && q >= p;
    if (!lower && !upper) throw DomainError("(p, q) matches neither regime");
    for (double v : a)
        if (!(v > 0.0)) throw DomainError("a must be strictly positive");
    for (double v : b)
        if (!(v >= 0.0)) throw DomainError("b must be non-negative");

    KahanSum sum_pow, sum_mixed, sum_aq;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double ab = a[i] + b[i];
        sum_pow.add(std::pow(ab, q));
        sum_mixed.add(std::pow(ab, q - 1.0) * a[i]);
        sum_aq.add(std::pow(a[i], q));
    }
    const double lhs = std::pow(sum_pow.value(), p / q - 1.0) * sum_mixed.value();
    const double rhs = std::pow(sum_aq.value(), p / q);
    const double slack = 1e-12 * std::max({1.0, std::abs(lhs), std::abs(rhs)});
    return lower ? lhs >= rhs - slack : lhs <= rhs + slack;
}

} // namespace mbounds::oracle
