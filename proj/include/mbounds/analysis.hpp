#pragma once

// Numerical probes of the monotonicity claims and scalar inequalities
// behind the sharp-constant theorems: the power-weight mean sequence Lambda_n^p/n sum_{k>n}
// Lambda_k^{-p}, the sufficient condition (1 + n(L_{n+1}/L_n)^p - ...), the
// convexity machinery around f_{alpha,p}, and a registry of grid-checked
// inequalities.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mbounds/errors.hpp"
#include "mbounds/families.hpp"
#include "mbounds/specfun.hpp"
#include "mbounds/util.hpp"

namespace mbounds::analysis {

// ---------------------------------------------------------------------------
// Bennett's sequence (power weights): b_n = Lambda_n^p / n * sum_{k>n} Lambda_k^{-p}.
// The infinite tail is enclosed by elementary integral bounds from
//   k^{1+alpha}/(1+alpha) <= Lambda_k <= (k+1)^{1+alpha}/(1+alpha)   (alpha >= 0),
// growing the cutoff until the enclosure width drops below 1e-10.
// ---------------------------------------------------------------------------
inline std::vector<double> bennett_sequence(double alpha, double p, std::size_t n_max) {
    if (!(alpha >= 0.0)) throw DomainError("bennett sequence requires alpha >= 0");
    if (n_max < 1) throw SizeError("n_max must be >= 1");
    const double s = (1.0 + alpha) * p;
    if (!(s > 1.0)) throw DivergentSeries("requires (1+alpha) p > 1");

    const double pref = std::pow(1.0 + alpha, p);
    const auto tail_hi = [&](double k) { return pref * std::pow(k, 1.0 - s) / (s - 1.0); };
    const auto tail_lo = [&](double k) { return pref * std::pow(k + 2.0, 1.0 - s) / (s - 1.0); };

    std::vector<double> lambda_head(n_max + 1, 0.0); // Lambda_n, n <= n_max
    std::vector<double> inv_head(n_max + 1, 0.0);    // Lambda_n^{-p}
    KahanSum lambda;
    KahanSum beyond; // sum_{k > n_max, k <= K} Lambda_k^{-p}
    std::size_t k = 0;

    const std::size_t cap = std::size_t{1} << 26;
    std::size_t target = std::max<std::size_t>(4 * n_max, 4096);
    for (;;) {
        while (k < target) {
            ++k;
            lambda.add(std::pow(static_cast<double>(k), alpha));
            if (k <= n_max) {
                lambda_head[k] = lambda.value();
                inv_head[k] = std::pow(lambda.value(), -p);
            } else {
                beyond.add(std::pow(lambda.value(), -p));
            }
        }
        const double kd = static_cast<double>(k);
        if (tail_hi(kd) - tail_lo(kd) < 1e-10 || target >= cap) break;
        target = std::min(cap, target * 2);
    }
    const double tail_mid = 0.5 * (tail_hi(static_cast<double>(k)) + tail_lo(static_cast<double>(k)));

    // suffix over the head region, then attach the streamed remainder + tail
    std::vector<double> out(n_max);
    KahanSum suffix;
    suffix.add(beyond.value());
    suffix.add(tail_mid);
    for (std::size_t n = n_max; n >= 1; --n) {
        out[n - 1] = std::pow(lambda_head[n], p) / static_cast<double>(n) * suffix.value();
        suffix.add(inv_head[n]);
    }
    return out;
}

// Left side of the sufficient condition 1 + n (L_{n+1}/L_n)^p - (n+1)(L_{n+2}/L_{n+1})^p
// for Lambda_n = sum_{i<=n} i^alpha; >= 0 means the condition holds at n.
inline std::vector<double> condition_4_7_values(double alpha, double p, std::size_t n_max) {
    if (n_max < 1) throw SizeError("n_max must be >= 1");
    std::vector<double> out(n_max);
    KahanSum lam;
    std::vector<double> l(n_max + 3, 0.0);
    for (std::size_t i = 1; i <= n_max + 2; ++i) {
        lam.add(std::pow(static_cast<double>(i), alpha));
        l[i] = lam.value();
    }
    for (std::size_t n = 1; n <= n_max; ++n) {
        const double nd = static_cast<double>(n);
        out[n - 1] = 1.0 + nd * std::pow(l[n + 1] / l[n], p) -
                     (nd + 1.0) * std::pow(l[n + 2] / l[n + 1], p);
    }
    return out;
}

inline double condition_4_7(double alpha, double p, std::size_t n) {
    return condition_4_7_values(alpha, p, n).back();
}

enum class Monotonicity { Increasing, Decreasing, Neither };

inline const char* monotonicity_name(Monotonicity m) {
    switch (m) {
        case Monotonicity::Increasing: return "increasing";
        case Monotonicity::Decreasing: return "decreasing";
        case Monotonicity::Neither: return "neither";
    }
    return "?";
}

struct MonotonicityReport {
    std::vector<double> values;
    Monotonicity verdict = Monotonicity::Neither;
    std::optional<std::size_t> first_violation_index;
    std::string claim_citation;
};

// Classifies with signed differences; ties within tol collapse. For a
// "neither" verdict the reported index is the first element breaking the
// direction suggested by the first significant difference.
inline MonotonicityReport monotonicity_verdict(std::vector<double> values, double tol) {
    if (values.size() < 2) throw SizeError("need at least two values");
    bool incr_ok = true, decr_ok = true;
    for (std::size_t i = 1; i < values.size(); ++i) {
        const double d = values[i] - values[i - 1];
        if (d < -tol) incr_ok = false;
        if (d > tol) decr_ok = false;
    }
    MonotonicityReport rep;
    rep.values = std::move(values);
    if (incr_ok) {
        rep.verdict = Monotonicity::Increasing;
    } else if (decr_ok) {
        rep.verdict = Monotonicity::Decreasing;
    } else {
        rep.verdict = Monotonicity::Neither;
        double dir = 0.0;
        for (std::size_t i = 1; i < rep.values.size(); ++i) {
            const double d = rep.values[i] - rep.values[i - 1];
            if (dir == 0.0 && std::abs(d) > tol) dir = d;
            if (dir != 0.0 && d * dir < 0.0 && std::abs(d) > tol) {
                rep.first_violation_index = i;
                break;
            }
        }
    }
    return rep;
}

// f_{alpha,p}(x) = ((1-x^a)/x^a)^p + ((1-(1-x)^a)/(1-x)^a)^p on (0,1).
inline double f_alpha_p(double alpha, double p, double x) {
    if (!(x > 0.0 && x < 1.0)) throw DomainError("f_alpha_p requires 0 < x < 1");
    if (!(alpha > 0.0) || !(p > 0.0)) throw DomainError("f_alpha_p requires alpha, p > 0");
    const double xa = std::pow(x, alpha);
    const double ya = std::pow(1.0 - x, alpha);
    return std::pow((1.0 - xa) / xa, p) + std::pow((1.0 - ya) / ya, p);
}

// Minimum central second difference over an interior uniform grid; >= -tol
// indicates numerical convexity.
inline double second_difference_min(double alpha, double p, std::size_t grid_size) {
    if (grid_size < 3) throw SizeError("grid_size must be >= 3");
    const double h = 1.0 / (static_cast<double>(grid_size) + 1.0);
    std::vector<double> f(grid_size + 1);
    for (std::size_t i = 1; i <= grid_size; ++i) f[i] = f_alpha_p(alpha, p, i * h);
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 2; i + 1 <= grid_size; ++i)
        worst = std::min(worst, (f[i - 1] - 2.0 * f[i] + f[i + 1]) / (h * h));
    return worst;
}

// A_n(f_{alpha,p}) = (1/n) sum_{r<=n} f(r/(n+1)). Numerically pinned
// cross-identity with the tail-power s_n at t = 1: A_n = 2 * s_n.
inline double bennett_jameson_mean(double alpha, double p, std::size_t n) {
    if (n < 1) throw SizeError("n must be >= 1");
    KahanSum s;
    const double denom = static_cast<double>(n) + 1.0;
    for (std::size_t r = 1; r <= n; ++r)
        s.add(f_alpha_p(alpha, p, static_cast<double>(r) / denom));
    return s.value() / static_cast<double>(n);
}

// ---------------------------------------------------------------------------
// Inequality registry. Each probe evaluates LHS - RHS of its "#>= 0" form on
// a grid; pass means no normalized violation below -1e-10.
// ---------------------------------------------------------------------------

struct ProbeViolation {
    double alpha = 0.0;
    double second = 0.0; // x (L6) or beta (E4.2); unused otherwise
    long n = 0;
    double lhs = 0.0;
    double rhs = 0.0;
};

struct ProbeReport {
    std::string inequality_id;
    std::string citation;
    std::string box;
    bool reversed = false;
    std::size_t points = 0;
    std::vector<ProbeViolation> violations;
    bool passed = false;
};

struct ProbeOverrides {
    std::optional<double> alpha_min, alpha_max;
    std::optional<std::size_t> grid; // points per scalar dimension
    std::optional<std::size_t> n_max;
};

namespace detail {

constexpr double kProbeSlack = -1e-10;

inline double norm_gap(double lhs, double rhs) {
    return (lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

inline std::vector<double> lambda_row(double alpha, std::size_t n_max) {
    std::vector<double> l(n_max + 1, 0.0);
    KahanSum s;
    for (std::size_t i = 1; i <= n_max; ++i) {
        s.add(std::pow(static_cast<double>(i), alpha));
        l[i] = s.value();
    }
    return l;
}

struct Interval {
    double lo, hi;
};

inline std::vector<double> grid_points(const std::vector<Interval>& parts, std::size_t total) {
    std::vector<double> pts;
    const std::size_t per = std::max<std::size_t>(2, total / parts.size());
    for (const auto& iv : parts)
        for (std::size_t i = 0; i < per; ++i)
            pts.push_back(iv.lo + (iv.hi - iv.lo) * static_cast<double>(i) /
                                      static_cast<double>(per - 1));
    return pts;
}

} // namespace detail

// Evaluates the registry inequality `id` on its declared parameter box (or
// the reversed claim's box with reversed = true). Throws UnknownInequality
// for ids outside the registry.
inline ProbeReport probe(const std::string& id, bool reversed = false,
                         const ProbeOverrides& over = {}) {
    using detail::norm_gap;
    ProbeReport rep;
    rep.inequality_id = id;
    rep.reversed = reversed;

    const std::size_t scalar_grid = over.grid.value_or(1001);
    const std::size_t n_max = over.n_max.value_or(500);
    const double sign = reversed ? -1.0 : 1.0;

    std::vector<detail::Interval> alpha_box;
    const char* box_desc = "";

    const auto set_alpha_box = [&](std::vector<detail::Interval> normal,
                                   std::vector<detail::Interval> rev, const char* dn,
                                   const char* dr) {
        alpha_box = reversed ? std::move(rev) : std::move(normal);
        box_desc = reversed ? dr : dn;
    };

    enum class Id { L422, L425, L5, L6, L7, L8, L10, E42 } which;
    if (id == "L4_4.22") {
        which = Id::L422;
        rep.citation = "Lemma 4, partial-sum ratio bound";
        set_alpha_box({{0.0, 1.0}, {3.0, 8.0}}, {{1.0, 3.0}}, "alpha in [0,1] u [3,8]",
                      "alpha in [1,3]");
    } else if (id == "L4_4.25") {
        which = Id::L425;
        rep.citation = "Lemma 4, partial-sum upper bound";
        set_alpha_box({{0.0, 1.0}, {3.0, 8.0}}, {{1.0, 3.0}}, "alpha in [0,1] u [3,8]",
                      "alpha in [1,3]");
    } else if (id == "L5_5.15") {
        which = Id::L5;
        rep.citation = "Lemma 5, partial-sum lower bound";
        set_alpha_box({{1.0, 3.0}}, {{3.0, 8.0}}, "alpha in [1,3]", "alpha in [3,8]");
    } else if (id == "L6_5.14") {
        which = Id::L6;
        rep.citation = "Lemma 6, two-factor product bound";
        set_alpha_box({{1.0, 3.0}}, {{3.0, 8.0}}, "alpha in [1,3], x in [0,1]",
                      "alpha in [3,8], x in [0,1]");
    } else if (id == "L7_5.18") {
        which = Id::L7;
        rep.citation = "Lemma 7, squared-ratio difference bound";
        if (reversed) throw UnknownInequality("L7_5.18 has no reversed claim");
        set_alpha_box({{0.14, 1.0}}, {}, "alpha in [0.14,1]", "");
    } else if (id == "L8_5.16") {
        which = Id::L8;
        rep.citation = "Lemma 8, ratio difference bound";
        if (reversed) throw UnknownInequality("L8_5.16 has no reversed claim");
        set_alpha_box({{0.14, 1.0}}, {}, "alpha in [0.14,1]", "");
    } else if (id == "L10") {
        which = Id::L10;
        rep.citation = "Lemma 10, shifted-ratio bound";
        if (reversed) throw UnknownInequality("L10 has no reversed claim");
        set_alpha_box({{0.0, 1.0}}, {}, "alpha in [0,1]", "");
    } else if (id == "E4.2") {
        which = Id::E42;
        rep.citation = "log-mean partial-sum ratio bound (4.2)";
        if (reversed) throw UnknownInequality("E4.2 has no reversed claim");
        set_alpha_box({{2.0, 6.0}}, {}, "beta >= alpha >= 2", "");
    } else {
        throw UnknownInequality("unknown inequality id: " + id);
    }
    rep.box = box_desc;

    if (over.alpha_min || over.alpha_max) {
        const double lo = over.alpha_min.value_or(alpha_box.front().lo);
        const double hi = over.alpha_max.value_or(alpha_box.back().hi);
        bool inside = false;
        for (const auto& iv : alpha_box) inside |= (lo >= iv.lo && hi <= iv.hi);
        if (!inside || !(lo <= hi))
            throw DomainError("requested alpha range outside the declared validity box");
        alpha_box = {{lo, hi}};
    }

    const auto alphas = detail::grid_points(alpha_box, scalar_grid);
    std::vector<std::vector<ProbeViolation>> chunk_viol(alphas.size());
    std::vector<std::size_t> chunk_points(alphas.size(), 0);

    parallel_for_chunks(alphas.size(), [&](std::size_t ai) {
        const double a = alphas[ai];
        auto& viol = chunk_viol[ai];
        std::size_t pts = 0;
        const auto record = [&](double gap, double second, long n, double lhs, double rhs) {
            ++pts;
            if (gap < detail::kProbeSlack) viol.push_back({a, second, n, lhs, rhs});
        };
        switch (which) {
            case Id::L422: {
                const auto lam = detail::lambda_row(a, n_max);
                const double e = (a + 1.0) / 2.0;
                for (std::size_t n = 1; n <= n_max; ++n)
                    for (std::size_t k = n; k <= n_max; k += (k < n + 8 ? 1 : 7)) {
                        const double lhs = std::pow(static_cast<double>(n) * (n + 1.0) /
                                                        (static_cast<double>(k) * (k + 1.0)),
                                                    e);
                        const double rhs = lam[n] / lam[k];
                        record(sign * norm_gap(lhs, rhs), 0.0, static_cast<long>(n), lhs, rhs);
                    }
                break;
            }
            case Id::L425: {
                const auto lam = detail::lambda_row(a, n_max);
                for (std::size_t n = 1; n <= n_max; ++n) {
                    const double lhs =
                        std::pow(static_cast<double>(n) * (n + 1.0), (a + 1.0) / 2.0) / (a + 1.0);
                    record(sign * norm_gap(lhs, lam[n]), 0.0, static_cast<long>(n), lhs, lam[n]);
                }
                break;
            }
            case Id::L5: {
                const auto lam = detail::lambda_row(a, n_max);
                for (std::size_t n = 1; n <= n_max; ++n) {
                    const double nd = static_cast<double>(n);
                    const double rhs =
                        4.0 * nd * nd * std::pow(nd + 1.0, a) / ((1.0 + a) * (4.0 * nd + 1.0 + a));
                    record(sign * norm_gap(lam[n], rhs), 0.0, static_cast<long>(n), lam[n], rhs);
                }
                break;
            }
            case Id::L6: {
                for (std::size_t i = 0; i < scalar_grid; ++i) {
                    const double x =
                        static_cast<double>(i) / static_cast<double>(scalar_grid - 1);
                    const double lhs = (std::pow(1.0 + x, 2.0 - a) *
                                            std::pow(1.0 + 2.0 * x, (a - 1.0) / 2.0) -
                                        1.0) *
                                       (std::pow(1.0 + 2.0 * x, (1.0 + a) / 2.0) - 1.0);
                    const double rhs = (1.0 + a) * x * x;
                    record(sign * norm_gap(lhs, rhs), x, 0, lhs, rhs);
                }
                break;
            }
            case Id::L7: {
                const auto lam = detail::lambda_row(a, n_max + 1);
                for (std::size_t n = 1; n <= n_max; ++n) {
                    const double nd = static_cast<double>(n);
                    const double lhs = nd * std::pow(nd + 1.0, 2.0 * a) / (lam[n] * lam[n]) -
                                       (nd + 1.0) * std::pow(nd + 2.0, 2.0 * a) /
                                           (lam[n + 1] * lam[n + 1]);
                    const double rhs = 0.94 * (1.0 + a) / ((nd + 1.0) * (nd + 1.0));
                    record(norm_gap(lhs, rhs), 0.0, static_cast<long>(n), lhs, rhs);
                }
                break;
            }
            case Id::L8: {
                const auto lam = detail::lambda_row(a, n_max + 1);
                for (std::size_t n = 1; n <= n_max; ++n) {
                    const double nd = static_cast<double>(n);
                    const double lhs = 2.0 * nd * std::pow(nd + 1.0, a) / lam[n] -
                                       2.0 * (nd + 1.0) * std::pow(nd + 2.0, a) / lam[n + 1];
                    const double rhs = -0.94 * (1.0 + a) / ((nd + 1.0) * (nd + 1.0));
                    record(norm_gap(lhs, rhs), 0.0, static_cast<long>(n), lhs, rhs);
                }
                break;
            }
            case Id::L10: {
                for (std::size_t n = 1; n <= n_max; ++n) {
                    const double nd = static_cast<double>(n);
                    const double e = (1.0 + a) / 2.0;
                    const double lhs =
                        std::pow(nd + 1.0, a) +
                        std::pow(nd, e) * std::pow(nd + 1.0, a) /
                            (std::pow(nd + 2.0, e) - std::pow(nd, e));
                    const double rhs = std::pow(nd + 1.0, e) * std::pow(nd + 2.0, a) /
                                       (std::pow(nd + 3.0 + 1.0 / (nd * nd), e) -
                                        std::pow(nd + 1.0, e));
                    record(norm_gap(lhs, rhs), 0.0, static_cast<long>(n), lhs, rhs);
                }
                break;
            }
            case Id::E42: {
                const std::size_t beta_grid = std::max<std::size_t>(2, scalar_grid / 10);
                for (std::size_t bi = 0; bi < beta_grid; ++bi) {
                    const double b = a + (8.0 - a) * static_cast<double>(bi) /
                                             static_cast<double>(beta_grid - 1);
                    KahanSum cum;
                    std::vector<double> s(n_max + 2, 0.0);
                    for (std::size_t i = 1; i <= n_max + 1; ++i) {
                        cum.add(mbounds::detail::logmean_weight(b, a, static_cast<double>(i)));
                        s[i] = cum.value();
                    }
                    for (std::size_t n = 1; n <= n_max; ++n) {
                        const double lhs = s[n + 1] / s[n];
                        const double rhs = std::pow((static_cast<double>(n) + 2.0) /
                                                        (static_cast<double>(n) + 1.0),
                                                    a);
                        record(norm_gap(lhs, rhs), b, static_cast<long>(n), lhs, rhs);
                    }
                }
                break;
            }
        }
        chunk_points[ai] = pts;
    });

    for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
        rep.points += chunk_points[ai];
        rep.violations.insert(rep.violations.end(), chunk_viol[ai].begin(), chunk_viol[ai].end());
    }
    rep.passed = rep.violations.empty();
    return rep;
}

inline const std::vector<std::string>& probe_ids() {
    static const std::vector<std::string> ids = {"L4_4.22", "L4_4.25", "L5_5.15", "L6_5.14",
                                                 "L7_5.18", "L8_5.16", "L10",     "E4.2"};
    return ids;
}

} // namespace mbounds::analysis
