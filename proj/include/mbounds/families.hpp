#pragma once

// Matrix families: truncation generators, weight sequences, the published
// asymptotic constants with their certifying theorem ranges, and the series
// machinery (head summation + analytic tail) behind the constants that are
// defined by infinite sums.

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "mbounds/core.hpp"
#include "mbounds/errors.hpp"
#include "mbounds/specfun.hpp"
#include "mbounds/util.hpp"

namespace mbounds {

enum class FamilyKind {
    Cesaro,
    TailPower,
    TailAlphaK,
    GeneralizedLogMeanTail,
    WeightedMeanPower,
    WeightedMeanPowerDiff,
    NorlundPowerDiff,
    NorlundPowerSum,
};

inline bool is_tail_kind(FamilyKind k) {
    return k == FamilyKind::TailPower || k == FamilyKind::TailAlphaK ||
           k == FamilyKind::GeneralizedLogMeanTail;
}

inline bool is_weighted_mean_kind(FamilyKind k) {
    return k == FamilyKind::Cesaro || k == FamilyKind::WeightedMeanPower ||
           k == FamilyKind::WeightedMeanPowerDiff;
}

inline bool is_norlund_kind(FamilyKind k) {
    return k == FamilyKind::NorlundPowerDiff || k == FamilyKind::NorlundPowerSum;
}

struct FamilySpec {
    FamilyKind kind = FamilyKind::Cesaro;
    double alpha = 0.0;
    double t = 0.0;
    double beta = 0.0; // may be +inf (GeneralizedLogMeanTail)

    static FamilySpec cesaro() { return {FamilyKind::Cesaro, 0.0, 0.0, 0.0}; }

    static FamilySpec tail_power(double alpha, double t) {
        if (!(alpha > 0.0)) throw DomainError("tail-power requires alpha > 0");
        if (!(t >= 0.0 && t <= 1.0)) throw DomainError("tail-power requires 0 <= t <= 1");
        return {FamilyKind::TailPower, alpha, t, 0.0};
    }

    static FamilySpec tail_alpha_k(double alpha) {
        if (!(alpha >= 1.0)) throw DomainError("tail-alpha-k requires alpha >= 1");
        return {FamilyKind::TailAlphaK, alpha, 0.0, 0.0};
    }

    static FamilySpec gen_log_mean_tail(double alpha, double beta) {
        if (!(alpha >= 1.0)) throw DomainError("gen-log-mean-tail requires alpha >= 1");
        if (!(beta >= alpha)) throw DomainError("gen-log-mean-tail requires beta >= alpha");
        if (beta == 1.0 && alpha > 1.0)
            throw DomainError("gen-log-mean-tail requires beta != 1 when alpha > 1");
        return {FamilyKind::GeneralizedLogMeanTail, alpha, 0.0, beta};
    }

    static FamilySpec weighted_mean_power(double alpha) {
        if (!(alpha > -1.0)) throw DomainError("weighted-mean-power requires alpha > -1");
        return {FamilyKind::WeightedMeanPower, alpha, 0.0, 0.0};
    }

    static FamilySpec weighted_mean_power_diff(double alpha) {
        if (!(alpha > 0.0)) throw DomainError("weighted-mean-power-diff requires alpha > 0");
        return {FamilyKind::WeightedMeanPowerDiff, alpha, 0.0, 0.0};
    }

    static FamilySpec norlund_power_diff(double alpha) {
        if (!(alpha > 0.0)) throw DomainError("norlund-power-diff requires alpha > 0");
        return {FamilyKind::NorlundPowerDiff, alpha, 0.0, 0.0};
    }

    static FamilySpec norlund_power_sum(double alpha) {
        if (!(alpha >= 0.0)) throw DomainError("norlund-power-sum requires alpha >= 0");
        return {FamilyKind::NorlundPowerSum, alpha, 0.0, 0.0};
    }
};

inline const char* family_name(FamilyKind k) {
    switch (k) {
        case FamilyKind::Cesaro: return "cesaro";
        case FamilyKind::TailPower: return "tail-power";
        case FamilyKind::TailAlphaK: return "tail-alpha-k";
        case FamilyKind::GeneralizedLogMeanTail: return "gen-log-mean-tail";
        case FamilyKind::WeightedMeanPower: return "weighted-mean-power";
        case FamilyKind::WeightedMeanPowerDiff: return "weighted-mean-power-diff";
        case FamilyKind::NorlundPowerDiff: return "norlund-power-diff";
        case FamilyKind::NorlundPowerSum: return "norlund-power-sum";
    }
    return "?";
}

namespace detail {

// L_beta(k, k-1)^(alpha-1), defined through (a^b - b^b)/(b(a-b)); the k = 1
// case (b = 0) is covered by the same formula.
inline double logmean_weight(double beta, double alpha, double k) {
    if (alpha == 1.0) return 1.0;
    if (std::isinf(beta)) return std::pow(k, alpha - 1.0);
    const double base = (std::pow(k, beta) - std::pow(k - 1.0, beta)) / beta;
    return std::pow(base, (alpha - 1.0) / (beta - 1.0));
}

} // namespace detail

// lambda_k of the averaging kinds (weighted mean / Norlund generators).
inline double generator_weight(const FamilySpec& spec, std::size_t k) {
    const double kd = static_cast<double>(k);
    switch (spec.kind) {
        case FamilyKind::Cesaro: return 1.0;
        case FamilyKind::WeightedMeanPower: return std::pow(kd, spec.alpha);
        case FamilyKind::WeightedMeanPowerDiff:
        case FamilyKind::NorlundPowerDiff:
            return std::pow(kd, spec.alpha) - std::pow(kd - 1.0, spec.alpha);
        case FamilyKind::NorlundPowerSum: return std::pow(kd, spec.alpha);
        default: throw KindError("tail kinds have no generator weight sequence");
    }
}

// w_k of the tail (Copson-type) kinds.
inline double tail_weight(const FamilySpec& spec, std::size_t k) {
    const double kd = static_cast<double>(k);
    switch (spec.kind) {
        case FamilyKind::TailPower:
            return std::pow(kd + spec.t, spec.alpha) - std::pow(kd + spec.t - 1.0, spec.alpha);
        case FamilyKind::TailAlphaK:
            return spec.alpha * std::pow(kd, spec.alpha - 1.0);
        case FamilyKind::GeneralizedLogMeanTail:
            return detail::logmean_weight(spec.beta, spec.alpha, kd);
        default: throw KindError("averaging kinds have no tail weight sequence");
    }
}

// C[m] = sum_{k<=m} w_k, C[0] = 0 (1-based weights).
inline std::vector<double> cumulative_tail_weights(const FamilySpec& spec, std::size_t n) {
    std::vector<double> c(n + 1, 0.0);
    KahanSum s;
    for (std::size_t k = 1; k <= n; ++k) {
        s.add(tail_weight(spec, k));
        c[k] = s.value();
    }
    return c;
}

// Row normalizers of the tail kinds: j^alpha, or the cumulative weight for
// the log-mean family.
inline std::vector<double> tail_denominators(const FamilySpec& spec, std::size_t n,
                                             const std::vector<double>& cumulative) {
    std::vector<double> d(n + 1, 0.0);
    if (spec.kind == FamilyKind::GeneralizedLogMeanTail) {
        for (std::size_t j = 1; j <= n; ++j) d[j] = cumulative[j];
    } else {
        for (std::size_t j = 1; j <= n; ++j)
            d[j] = std::pow(static_cast<double>(j), spec.alpha);
    }
    return d;
}

// Lambda[m] = sum_{k<=m} lambda_k, Lambda[0] = 0 (1-based).
inline std::vector<double> lambda_partial_sums(const FamilySpec& spec, std::size_t n) {
    std::vector<double> lam(n + 1, 0.0);
    KahanSum s;
    for (std::size_t k = 1; k <= n; ++k) {
        s.add(generator_weight(spec, k));
        lam[k] = s.value();
    }
    return lam;
}

struct WeightSequence {
    std::vector<double> lambda; // lambda_1..N
    std::vector<double> Lambda; // partial sums
};

inline WeightSequence weights(const FamilySpec& spec, std::size_t n) {
    if (is_tail_kind(spec.kind)) throw KindError("tail kinds have no weight sequence");
    if (n < 1) throw SizeError("weights requires N >= 1");
    WeightSequence w;
    w.lambda.reserve(n);
    w.Lambda.reserve(n);
    KahanSum s;
    for (std::size_t k = 1; k <= n; ++k) {
        const double lk = generator_weight(spec, k);
        s.add(lk);
        w.lambda.push_back(lk);
        w.Lambda.push_back(s.value());
    }
    return w;
}

// N x N truncation of the family matrix.
inline NonNegativeMatrix generate(const FamilySpec& spec, std::size_t n) {
    if (n < 1) throw SizeError("generate requires N >= 1");
    std::vector<double> e(n * n, 0.0);
    if (is_tail_kind(spec.kind)) {
        const auto c = cumulative_tail_weights(spec, n);
        const auto d = tail_denominators(spec, n, c);
        for (std::size_t j = 1; j <= n; ++j)
            for (std::size_t k = j; k <= n; ++k)
                e[(j - 1) * n + (k - 1)] = tail_weight(spec, k) / d[j];
    } else if (is_weighted_mean_kind(spec.kind)) {
        const auto w = weights(spec, n);
        for (std::size_t j = 1; j <= n; ++j)
            for (std::size_t k = 1; k <= j; ++k)
                e[(j - 1) * n + (k - 1)] = w.lambda[k - 1] / w.Lambda[j - 1];
    } else {
        const auto w = weights(spec, n);
        for (std::size_t j = 1; j <= n; ++j)
            for (std::size_t k = 1; k <= j; ++k)
                e[(j - 1) * n + (k - 1)] = w.lambda[j - k] / w.Lambda[j - 1];
    }
    return {n, n, std::move(e)};
}

// ---------------------------------------------------------------------------
// Series tails.
//
// Lambda_j = sum_{i<=j} i^alpha admits the Euler-Maclaurin form
//   Lambda_j = j^{1+alpha}/(1+alpha) + j^alpha/2 + alpha j^{alpha-1}/12 + c + O(j^{alpha-3})
// with c recovered numerically at the cutoff. Tails of sums
//   sum_{j>M} j^a Lambda_j^{-b}
// follow by expanding (1+delta)^{-b} around the leading power law.
// ---------------------------------------------------------------------------

namespace detail {

inline double faulhaber_main(double alpha, double x) {
    return std::pow(x, 1.0 + alpha) / (1.0 + alpha) + 0.5 * std::pow(x, alpha) +
           alpha / 12.0 * std::pow(x, alpha - 1.0);
}

struct TailEstimate {
    double value = 0.0;
    double err = 0.0;
};

// sum_{j>M} j^a Lambda_j^{-b} for Lambda_j = sum_{i<=j} i^alpha.
inline TailEstimate power_lambda_tail(double alpha, double a, double b, std::size_t m,
                                      double lambda_m) {
    const double s0 = (1.0 + alpha) * b - a;
    if (!(s0 > 1.0)) throw DivergentSeries("series tail exponent must exceed 1");
    const double md = static_cast<double>(m);
    const double c = lambda_m - faulhaber_main(alpha, md);
    const double a1 = (1.0 + alpha) / 2.0;
    const double a2 = alpha * (1.0 + alpha) / 12.0;
    const double a3 = c * (1.0 + alpha);
    const auto z = [&](double u) { return specfun::detail::power_tail_from(u, md + 1.0).value; };
    const double pref = std::pow(1.0 + alpha, b);

    double tail = z(s0);
    tail -= b * (a1 * z(s0 + 1.0) + a2 * z(s0 + 2.0) + a3 * z(s0 + 1.0 + alpha));
    const double b2 = b * (b + 1.0) / 2.0;
    tail += b2 * (a1 * a1 * z(s0 + 2.0) + 2.0 * a1 * a3 * z(s0 + 2.0 + alpha) +
                  a3 * a3 * z(s0 + 2.0 + 2.0 * alpha));

    // dropped terms: the delta^3 block, the a2 cross terms of delta^2, and
    // the Euler-Maclaurin remainder of Lambda itself
    const double delta_m = std::abs(a1) / md + std::abs(a2) / (md * md) +
                           std::abs(a3) * std::pow(md, -1.0 - alpha);
    const double cube = std::abs(b * (b + 1.0) * (b + 2.0)) / 6.0 * delta_m * delta_m * delta_m;
    const double cross = 2.0 * b2 * std::abs(a2) *
                         (std::abs(a1) + std::abs(a3) * std::pow(md, -alpha)) * z(s0 + 3.0);
    const double em_rel = std::abs(alpha * (alpha - 1.0) * (alpha - 2.0)) / 720.0 *
                          std::pow(md, -3.0) * (1.0 + alpha);
    const double err = pref * ((cube + std::abs(b) * em_rel) * z(s0) + cross);
    return {pref * tail, std::abs(err)};
}

// 32-point Gauss-Legendre nodes/weights on [0, 1], computed once.
inline const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre_01() {
    static const auto table = [] {
        constexpr int order = 32;
        std::vector<double> x(order), w(order);
        for (int i = 0; i < order; ++i) {
            double t = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 64; ++it) {
                double p0 = 1.0, p1 = t;
                for (int k = 2; k <= order; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = order * (t * p1 - p0) / (t * t - 1.0);
                const double step = p1 / dp;
                t -= step;
                if (std::abs(step) < 1e-15) break;
            }
            x[i] = 0.5 * (1.0 + t);
            w[i] = 1.0 / ((1.0 - t * t) * dp * dp);
        }
        return std::pair{x, w};
    }();
    return table;
}

// sum_{j>M} (1 - (1 - r/j)^g)^q for q > 1, via the midpoint rule in j and the
// exact transform u = eps v^{1/(q-1)} that absorbs the u^{q-2} endpoint factor:
//   sum ~ g^q r eps^{q-1}/(q-1) * int_0^1 phi(eps v^{1/(q-1)})^q dv,
// phi(u) = (1-(1-u)^g)/(g u). Accurate uniformly in eps = r/(M+1/2) <= 1.
inline double one_minus_power_tail(double g, double q, double r, std::size_t m) {
    const double eps = r / (static_cast<double>(m) + 0.5);
    const auto phi = [&](double u) {
        if (u < 1e-8) return 1.0 - (g - 1.0) * u / 2.0;
        return (1.0 - std::pow(1.0 - u, g)) / (g * u);
    };
    const auto& [nodes, wts] = gauss_legendre_01();
    const double tau = 1.0 / (q - 1.0);
    double integral = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        integral += wts[i] * std::pow(phi(eps * std::pow(nodes[i], tau)), q);
    return std::pow(g, q) * r * std::pow(eps, q - 1.0) / (q - 1.0) * integral;
}

} // namespace detail

// sum_{j>=1} Lambda_j^{-p} with Lambda_j = sum_{i<=j} i^alpha; enclosure-driven
// head length, absolute error target 1e-9.
inline double weighted_mean_power_series(double alpha, double p) {
    if (!((1.0 + alpha) * p > 1.0)) throw DivergentSeries("requires (1+alpha) p > 1");
    std::size_t m = 1 << 15;
    const std::size_t cap = 1 << 23;
    for (;;) {
        KahanSum head;
        KahanSum lam;
        for (std::size_t j = 1; j <= m; ++j) {
            lam.add(std::pow(static_cast<double>(j), alpha));
            head.add(std::pow(lam.value(), -p));
        }
        const auto tail = detail::power_lambda_tail(alpha, 0.0, p, m, lam.value());
        if (tail.err < 1e-9 || m >= cap) return head.value() + tail.value;
        m *= 4;
    }
}

// sum_{j>=1} ((j^alpha - (j-1)^alpha)/j^alpha)^p  (Norlund power-difference constant).
inline double norlund_power_diff_series(double alpha, double p) {
    if (!(p > 1.0)) throw DivergentSeries("requires p > 1");
    std::size_t m = 1 << 14;
    const std::size_t cap = 1 << 23;
    for (;;) {
        KahanSum head;
        for (std::size_t j = 1; j <= m; ++j) {
            const double jd = static_cast<double>(j);
            head.add(std::pow(1.0 - std::pow((jd - 1.0) / jd, alpha), p));
        }
        const double tail = detail::one_minus_power_tail(alpha, p, 1.0, m);
        const double err = std::abs(tail) * 8.0 / static_cast<double>(m);
        if (err < 1e-9 || m >= cap) return head.value() + tail;
        m *= 4;
    }
}

// sum_{j>=1} (j^alpha / Lambda_j)^p  (Norlund power-sum constant).
inline double norlund_power_sum_series(double alpha, double p) {
    if (!(p > 1.0)) throw DivergentSeries("requires p > 1");
    std::size_t m = 1 << 15;
    const std::size_t cap = 1 << 23;
    for (;;) {
        KahanSum head;
        KahanSum lam;
        for (std::size_t j = 1; j <= m; ++j) {
            const double jd = static_cast<double>(j);
            const double lj = std::pow(jd, alpha);
            lam.add(lj);
            head.add(std::pow(lj / lam.value(), p));
        }
        const auto tail = detail::power_lambda_tail(alpha, alpha * p, p, m, lam.value());
        if (tail.err < 1e-9 || m >= cap) return head.value() + tail.value;
        m *= 4;
    }
}

// ---------------------------------------------------------------------------
// Published constants and their certifying ranges.
// ---------------------------------------------------------------------------

struct KnownConstant {
    double value = 0.0;   // lambda^p, the factor multiplying ||x||_p^p (q = p)
    Regime regime = Regime::LowerBound;
    std::string citation;
    std::string validity;
};

struct TheoremCoverage {
    bool covered = false;
    Regime regime = Regime::LowerBound;
    std::string citation;
    std::string validity;
};

namespace detail {

struct ConstantBranch {
    Regime regime;
    const char* citation;
    const char* validity;
    double (*eval)(const FamilySpec&, double);
};

inline double beta_form_constant(const FamilySpec& spec, double p) {
    return specfun::beta(1.0 / spec.alpha - p, p + 1.0) / spec.alpha;
}

inline std::vector<ConstantBranch> matched_branches(const FamilySpec& spec, double p, double q) {
    std::vector<ConstantBranch> out;
    if (p != q || !(p > 0.0)) return out;
    const double a = spec.alpha;
    switch (spec.kind) {
        case FamilyKind::TailPower:
            if (p >= 1.0 && spec.t == 1.0 && a > 0.0)
                out.push_back({Regime::LowerBound, "Theorem 1.2", "t=1, alpha>0, p>=1",
                               [](const FamilySpec& s, double pp) {
                                   return std::pow(std::pow(2.0, s.alpha) - 1.0, pp);
                               }});
            if (p < 1.0 && a >= 1.0 && a * p < 1.0)
                out.push_back({Regime::UpperBound, "Theorem 1.2",
                               "0<p<1, alpha>=1, alpha*p<1, 0<=t<=1",
                               [](const FamilySpec& s, double pp) { return beta_form_constant(s, pp); }});
            if (p <= 1.0 && spec.t == 1.0 && a > 0.0 && a < 1.0 &&
                p >= (1.0 - a) / (1.0 + a * a))
                out.push_back({Regime::UpperBound, "Theorem 1.2",
                               "t=1, 0<alpha<1, (1-alpha)/(1+alpha^2)<=p<=1",
                               [](const FamilySpec& s, double pp) { return beta_form_constant(s, pp); }});
            break;
        case FamilyKind::TailAlphaK:
            if (p < 1.0 && a >= 1.0 && a * p < 1.0)
                out.push_back({Regime::UpperBound, "Corollary 2", "0<p<1, alpha>=1, alpha*p<1",
                               [](const FamilySpec& s, double pp) { return beta_form_constant(s, pp); }});
            break;
        case FamilyKind::GeneralizedLogMeanTail:
            if (p < 1.0 && a >= 2.0 && spec.beta >= a && a * p < 1.0)
                out.push_back({Regime::UpperBound, "Corollary 3", "0<p<1, beta>=alpha>=2, alpha*p<1",
                               [](const FamilySpec& s, double pp) { return beta_form_constant(s, pp); }});
            break;
        case FamilyKind::WeightedMeanPowerDiff:
            if (p >= 1.0 && a * p > 1.0)
                out.push_back({Regime::LowerBound, "Corollary 4.04", "p>=1, alpha*p>1",
                               [](const FamilySpec& s, double pp) {
                                   return specfun::zeta(s.alpha * pp);
                               }});
            if (p <= 1.0 && a * p > 1.0)
                out.push_back({Regime::UpperBound, "Corollary 4.04", "0<p<=1, alpha*p>1",
                               [](const FamilySpec& s, double pp) {
                                   return s.alpha * pp / (s.alpha * pp - 1.0);
                               }});
            break;
        case FamilyKind::WeightedMeanPower: {
            if (p <= 1.0 && a >= 3.0 && (a + 1.0) * p > 2.0)
                out.push_back({Regime::UpperBound, "Theorem 4", "0<p<=1, alpha>=3, (alpha+1)p>2",
                               [](const FamilySpec& s, double pp) {
                                   return (1.0 + s.alpha) * pp / ((1.0 + s.alpha) * pp - 1.0);
                               }});
            const auto series = [](const FamilySpec& s, double pp) {
                return weighted_mean_power_series(s.alpha, pp);
            };
            if (p > 1.0 && a > -1.0 && a <= 0.0 && (a + 1.0) * p > 1.0)
                out.push_back({Regime::LowerBound, "Corollary 4.3",
                               "p>1, -1<alpha<=0, (alpha+1)p>1", series});
            if (p >= 2.0 && a >= 0.14 && a <= 1.0)
                out.push_back({Regime::LowerBound, "Theorem 5 (Corollary 5.3)",
                               "p>=2, 0.14<=alpha<=1", series});
            if (a >= 0.0 && a <= 1.0 && p >= 8.0 / (1.0 + a))
                out.push_back({Regime::LowerBound, "Theorem 6 (Corollary 5.3)",
                               "0<=alpha<=1, p>=8/(1+alpha)", series});
            if (p <= 1.0 && a > 1.0 && a <= 3.0 && p > 1.0 / (1.0 + a) && p <= 0.5)
                out.push_back({Regime::UpperBound, "Theorem 4 (with Theorem 3)",
                               "1<alpha<=3, 1/(1+alpha)<p<=1/2", series});
            if (p <= 1.0 && a > 0.0 && a <= 1.0 && (1.0 + a) * p > 1.0)
                out.push_back({Regime::UpperBound, "Corollary 4.3 (reversed)",
                               "0<p<=1, 0<alpha<=1, (1+alpha)p>1", series});
            break;
        }
        case FamilyKind::NorlundPowerDiff:
            if (p > 1.0 && a > 0.0)
                out.push_back({Regime::LowerBound, "Corollary 4", "p>1, alpha>0",
                               [](const FamilySpec& s, double pp) {
                                   return norlund_power_diff_series(s.alpha, pp);
                               }});
            break;
        case FamilyKind::NorlundPowerSum:
            if (p > 1.0 && a >= 0.0)
                out.push_back({Regime::LowerBound, "Corollary 5", "p>1, alpha>=0",
                               [](const FamilySpec& s, double pp) {
                                   return norlund_power_sum_series(s.alpha, pp);
                               }});
            break;
        case FamilyKind::Cesaro:
            break; // no published sharp cone constant for this family
    }
    return out;
}

} // namespace detail

// The published constant lambda^p for the configuration, if a theorem covers
// it. Requires q = p (all published constants are stated for q = p). When a
// regime is given, only branches certifying that regime are considered.
inline std::optional<KnownConstant> asymptotic_constant(const FamilySpec& spec, double p, double q,
                                                        std::optional<Regime> regime = {}) {
    if (p != q) throw RegimeViolation("published constants require q = p");
    for (const auto& b : detail::matched_branches(spec, p, q)) {
        if (regime && b.regime != *regime) continue;
        return KnownConstant{b.eval(spec, p), b.regime, b.citation, b.validity};
    }
    return std::nullopt;
}

// Which theorem (if any) certifies a sharp constant for this configuration.
inline TheoremCoverage theorem_range_check(const FamilySpec& spec, double p, double q,
                                           std::optional<Regime> regime = {}) {
    if (p != q) return {};
    for (const auto& b : detail::matched_branches(spec, p, q)) {
        if (regime && b.regime != *regime) continue;
        return {true, b.regime, b.citation, b.validity};
    }
    return {};
}

} // namespace mbounds
