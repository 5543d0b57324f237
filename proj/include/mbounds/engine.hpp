#pragma once

// The sharp-bound solver: s_r = r^{-q/p} sum_j (sum_{k<=r} a_{j,k})^q for all
// r, followed by the regime's min/max. Family truncations are solved from
// streamed prefix sums without materializing the matrix.
//
// Truncation semantics for families: a size-N run bounds the cone vectors
// supported on the first N coordinates. For the tail kinds the N x N
// truncation captures this exactly (rows past N are zero). For the averaging
// kinds (support k <= j) the operator keeps rows past N; by default the row
// sums are extended until the remainder is captured by an analytic tail, so
// that lambda(N) converges to the published asymptotic constants. An explicit
// row_limit reproduces the plain N x N matrix result instead.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "mbounds/core.hpp"
#include "mbounds/errors.hpp"
#include "mbounds/families.hpp"
#include "mbounds/specfun.hpp"
#include "mbounds/util.hpp"

namespace mbounds {

struct SRSequence {
    std::vector<double> values; // s_1..s_n
    double p = 0.0;
    double q = 0.0;
};

struct StreamOptions {
    std::size_t row_limit = 0; // 0 = auto (extend + analytic tail where convergent)
    std::size_t threads = 0;   // 0 = MB_THREADS env or hardware
};

namespace detail {

constexpr double kUnderflowFloor = 1e-300; // prefix sums below this count as 0

inline double pow_or_zero(double base, double q) {
    return base < kUnderflowFloor ? 0.0 : std::pow(base, q);
}

inline BoundResult pick_extremum(SRSequence s, Regime regime, std::size_t n) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < s.values.size(); ++i) {
        const bool better = regime == Regime::LowerBound ? s.values[i] < s.values[best]
                                                         : s.values[i] > s.values[best];
        if (better) best = i; // ties keep the smallest r
    }
    BoundResult out{0.0, s.values[best], best + 1, std::move(s.values), step_vector(best + 1, n)};
    out.lambda = std::pow(out.lambda_pow_q, 1.0 / s.q);
    return out;
}

} // namespace detail

// s_r for an explicit dense matrix: one pass per row over running prefix
// sums, compensated accumulation across rows with fixed chunking so the
// result does not depend on the thread count.
inline SRSequence s_sequence(const NonNegativeMatrix& a, double p, double q,
                             std::size_t threads = 0) {
    if (!(p > 0.0) || !(q > 0.0)) throw DomainError("s_sequence requires p, q > 0");
    const std::size_t m = a.rows(), n = a.cols();
    constexpr std::size_t chunk_rows = 64;
    const std::size_t n_chunks = (m + chunk_rows - 1) / chunk_rows;

    std::vector<std::vector<double>> partial(n_chunks);
    parallel_for_chunks(
        n_chunks,
        [&](std::size_t c) {
            std::vector<double> acc(n, 0.0), comp(n, 0.0);
            const std::size_t row_end = std::min(m, (c + 1) * chunk_rows);
            for (std::size_t j = c * chunk_rows; j < row_end; ++j) {
                const auto row = a.row(j);
                KahanSum prefix;
                for (std::size_t r = 0; r < n; ++r) {
                    prefix.add(row[r]);
                    const double term = detail::pow_or_zero(prefix.value(), q);
                    const double y = term - comp[r];
                    const double t = acc[r] + y;
                    comp[r] = (t - acc[r]) - y;
                    acc[r] = t;
                }
            }
            partial[c] = std::move(acc);
        },
        threads);

    SRSequence s{std::vector<double>(n, 0.0), p, q};
    for (std::size_t r = 0; r < n; ++r) {
        KahanSum sum;
        for (std::size_t c = 0; c < n_chunks; ++c) sum.add(partial[c][r]);
        s.values[r] = std::pow(static_cast<double>(r + 1), -q / p) * sum.value();
    }
    return s;
}

inline BoundResult compute_bound(const NonNegativeMatrix& a, const ExponentPair& pair,
                                 std::size_t threads = 0) {
    validate_regime(pair.p, pair.q, pair.regime);
    return detail::pick_extremum(s_sequence(a, pair.p, pair.q, threads), pair.regime, a.cols());
}

namespace detail {

// s_r of a tail-kind truncation; independent of any rows past N.
inline SRSequence tail_s_sequence(const FamilySpec& spec, std::size_t n, double p, double q,
                                  std::size_t threads) {
    const auto c = cumulative_tail_weights(spec, n);
    const auto d = tail_denominators(spec, n, c);
    SRSequence s{std::vector<double>(n, 0.0), p, q};
    constexpr std::size_t chunk = 32;
    parallel_for_chunks(
        (n + chunk - 1) / chunk,
        [&](std::size_t ci) {
            const std::size_t r_end = std::min(n, (ci + 1) * chunk);
            for (std::size_t r = ci * chunk + 1; r <= r_end; ++r) {
                KahanSum sum;
                for (std::size_t j = 1; j <= r; ++j)
                    sum.add(pow_or_zero((c[r] - c[j - 1]) / d[j], q));
                s.values[r - 1] = std::pow(static_cast<double>(r), -q / p) * sum.value();
            }
        },
        threads);
    return s;
}

// Decay exponent of the row contributions (Lambda_r/Lambda_j)^q resp.
// (1 - Lambda_{j-r}/Lambda_j)^q as j grows.
inline double averaging_decay_exponent(const FamilySpec& spec, double q) {
    switch (spec.kind) {
        case FamilyKind::Cesaro: return q;
        case FamilyKind::WeightedMeanPowerDiff: return spec.alpha * q;
        case FamilyKind::WeightedMeanPower: return (1.0 + spec.alpha) * q;
        case FamilyKind::NorlundPowerDiff:
        case FamilyKind::NorlundPowerSum: return q;
        default: return 0.0;
    }
}

inline std::size_t auto_row_limit(const FamilySpec& spec, std::size_t n, double q) {
    if (is_tail_kind(spec.kind)) return n;
    if (!(averaging_decay_exponent(spec, q) > 1.0 + 1e-9)) return n; // divergent: plain truncation
    if (is_norlund_kind(spec.kind)) {
        const std::size_t budget = (std::size_t{1} << 28) / std::max<std::size_t>(n, 1);
        return std::max(std::min(32 * n, n + budget), std::size_t{1} << 15);
    }
    return std::max(64 * n, std::size_t{1} << 17);
}

// Analytic tail of sum_{j>M} Lambda_j^{-q} for the weighted-mean kinds.
inline double wm_inv_tail(const FamilySpec& spec, double q, std::size_t m, double lambda_m) {
    switch (spec.kind) {
        case FamilyKind::Cesaro: return specfun::zeta_tail(q, m).value;
        case FamilyKind::WeightedMeanPowerDiff: return specfun::zeta_tail(spec.alpha * q, m).value;
        case FamilyKind::WeightedMeanPower:
            return power_lambda_tail(spec.alpha, 0.0, q, m, lambda_m).value;
        default: return 0.0;
    }
}

inline SRSequence weighted_mean_s_sequence(const FamilySpec& spec, std::size_t n, double p,
                                           double q, std::size_t m, bool add_tail,
                                           std::size_t threads) {
    (void)threads; // one O(M) streaming pass; memory stays O(N)
    std::vector<double> lam_head(n + 1, 0.0);
    std::vector<double> invq_head(n + 1, 0.0);
    KahanSum lam;
    KahanSum beyond; // sum_{n < j <= M} Lambda_j^{-q}
    for (std::size_t j = 1; j <= m; ++j) {
        lam.add(generator_weight(spec, j));
        if (j <= n) {
            lam_head[j] = lam.value();
            invq_head[j] = std::pow(lam.value(), -q);
        } else {
            beyond.add(std::pow(lam.value(), -q));
        }
    }

    // suffix[r] = sum_{j=r+1..M} Lambda_j^{-q} + analytic tail
    KahanSum run;
    if (add_tail) run.add(wm_inv_tail(spec, q, m, lam.value()));
    run.add(beyond.value());
    SRSequence s{std::vector<double>(n, 0.0), p, q};
    for (std::size_t r = n; r >= 1; --r) {
        const double rd = static_cast<double>(r);
        double prod = std::pow(lam_head[r], q) * run.value();
        if (!std::isfinite(prod)) // Lambda^q overflowed against a tiny suffix
            prod = run.value() > 0.0
                       ? std::exp(q * std::log(lam_head[r]) + std::log(run.value()))
                       : 0.0;
        s.values[r - 1] = std::pow(rd, -q / p) * (rd + prod);
        run.add(invq_head[r]);
    }
    return s;
}

inline SRSequence norlund_s_sequence(const FamilySpec& spec, std::size_t n, double p, double q,
                                     std::size_t m, bool add_tail, std::size_t threads) {
    const auto lam = lambda_partial_sums(spec, m);
    const double g = spec.kind == FamilyKind::NorlundPowerDiff ? spec.alpha : 1.0 + spec.alpha;
    SRSequence s{std::vector<double>(n, 0.0), p, q};
    constexpr std::size_t chunk = 8;
    parallel_for_chunks(
        (n + chunk - 1) / chunk,
        [&](std::size_t ci) {
            const std::size_t r_end = std::min(n, (ci + 1) * chunk);
            for (std::size_t r = ci * chunk + 1; r <= r_end; ++r) {
                KahanSum sum;
                for (std::size_t j = r + 1; j <= m; ++j)
                    sum.add(pow_or_zero(1.0 - lam[j - r] / lam[j], q));
                double tail = 0.0;
                if (add_tail) tail = one_minus_power_tail(g, q, static_cast<double>(r), m);
                const double rd = static_cast<double>(r);
                s.values[r - 1] = std::pow(rd, -q / p) * (rd + sum.value() + tail);
            }
        },
        threads);
    return s;
}

} // namespace detail

// s_r of the size-N family truncation computed from streamed prefix sums;
// memory O(rows), the matrix is never materialized.
inline SRSequence family_s_sequence(const FamilySpec& spec, std::size_t n, double p, double q,
                                    const StreamOptions& opts = {}) {
    if (n < 1) throw SizeError("family bound requires N >= 1");
    if (!(p > 0.0) || !(q > 0.0)) throw DomainError("family bound requires p, q > 0");
    if (is_tail_kind(spec.kind)) return detail::tail_s_sequence(spec, n, p, q, opts.threads);

    const bool extend = opts.row_limit == 0;
    std::size_t m = extend ? detail::auto_row_limit(spec, n, q) : std::max(opts.row_limit, n);
    const bool add_tail = extend && m > n;
    if (is_norlund_kind(spec.kind))
        return detail::norlund_s_sequence(spec, n, p, q, m, add_tail, opts.threads);
    return detail::weighted_mean_s_sequence(spec, n, p, q, m, add_tail, opts.threads);
}

inline BoundResult family_bound_streamed(const FamilySpec& spec, std::size_t n,
                                         const ExponentPair& pair, const StreamOptions& opts = {}) {
    validate_regime(pair.p, pair.q, pair.regime);
    return detail::pick_extremum(family_s_sequence(spec, n, pair.p, pair.q, opts), pair.regime, n);
}

struct ConvergenceTable {
    std::vector<std::size_t> sizes;
    std::vector<double> lambda_pow_q;          // lambda^q per size
    std::optional<KnownConstant> target;       // when a theorem covers (spec, p, q)
    std::vector<double> gaps;                  // lambda^q(N) - target (q = p)
    std::optional<double> extrapolated;        // Richardson/Aitken, advisory only
};

inline ConvergenceTable convergence_study(const FamilySpec& spec, const ExponentPair& pair,
                                          const std::vector<std::size_t>& sizes,
                                          const StreamOptions& opts = {}) {
    if (sizes.empty()) throw SizeError("convergence study requires at least one size");
    for (std::size_t i = 1; i < sizes.size(); ++i)
        if (sizes[i] <= sizes[i - 1]) throw SizeError("sizes must be strictly increasing");

    ConvergenceTable table;
    table.sizes = sizes;
    for (std::size_t n : sizes)
        table.lambda_pow_q.push_back(family_bound_streamed(spec, n, pair, opts).lambda_pow_q);

    if (pair.p == pair.q)
        table.target = asymptotic_constant(spec, pair.p, pair.q, pair.regime);
    if (table.target)
        for (double l : table.lambda_pow_q) table.gaps.push_back(l - table.target->value);

    if (table.lambda_pow_q.size() >= 3) {
        const auto& l = table.lambda_pow_q;
        const std::size_t k = l.size();
        const double d1 = l[k - 2] - l[k - 3];
        const double d2 = l[k - 1] - l[k - 2];
        const bool shrinking = std::abs(d2) < std::abs(d1) && d1 * d2 > 0.0;
        if (shrinking && d1 != d2)
            table.extrapolated = l[k - 1] + d2 * d2 / (d1 - d2);
    }
    return table;
}

} // namespace mbounds
