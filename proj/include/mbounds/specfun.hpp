#pragma once

// Self-contained special functions backing the closed-form constants:
// log-gamma, beta, Riemann zeta, pi*p/sin(pi*p), and the generalized
// logarithmic mean L_r(a, b).

#include <cmath>
#include <limits>
#include <numbers>

#include "mbounds/errors.hpp"
#include "mbounds/util.hpp"

namespace mbounds::specfun {

// Value plus a computed (not asserted) truncation-error bound.
struct SpecialValue {
    double value = 0.0;
    double est_abs_error = 0.0;
};

namespace detail {

// Lanczos approximation, g = 7, 9 coefficients.
inline double lanczos_log_gamma(double x) {
    static constexpr double g = 7.0;
    static constexpr double coeff[9] = {
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    };
    // series expects the argument shifted by one: computes log Gamma(x)
    const double z = x - 1.0;
    double a = coeff[0];
    for (int i = 1; i < 9; ++i) a += coeff[i] / (z + i);
    const double t = z + g + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(a);
}

} // namespace detail

inline double log_gamma(double x) {
    if (!(x > 0.0)) throw DomainError("log_gamma requires x > 0");
    if (x < 0.5) {
        // reflection keeps the Lanczos argument away from zero
        return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) -
               detail::lanczos_log_gamma(1.0 - x);
    }
    return detail::lanczos_log_gamma(x);
}

inline double beta(double x, double y) {
    if (!(x > 0.0) || !(y > 0.0)) throw DomainError("beta requires positive arguments");
    return std::exp(log_gamma(x) + log_gamma(y) - log_gamma(x + y));
}

namespace detail {

// Euler-Maclaurin tail: sum_{j >= a} j^{-s} for real s > 1, with Bernoulli
// corrections through B12. Also reports the first omitted term as an error
// estimate.
inline SpecialValue power_tail_from(double s, double a) {
    static constexpr double b2k[6] = {1.0 / 6.0,  -1.0 / 30.0, 1.0 / 42.0,
                                      -1.0 / 30.0, 5.0 / 66.0,  -691.0 / 2730.0};
    static constexpr double fact2k[6] = {2.0, 24.0, 720.0, 40320.0, 3628800.0, 479001600.0};
    double tail = std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(a, -s);
    double prod = s;
    for (int k = 1; k <= 6; ++k) {
        tail += b2k[k - 1] / fact2k[k - 1] * prod * std::pow(a, -s - 2.0 * k + 1.0);
        prod *= (s + 2.0 * k - 1.0) * (s + 2.0 * k);
    }
    // first omitted correction (B14 = 7/6, 14! = 87178291200)
    const double omitted = 7.0 / 6.0 / 87178291200.0 * prod * std::pow(a, -s - 13.0);
    return {tail, std::abs(omitted) + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(tail)};
}

} // namespace detail

// sum_{j > m} j^{-s}; requires s > 1.
inline SpecialValue zeta_tail(double s, std::size_t m) {
    if (!(s > 1.0)) throw DomainError("zeta_tail requires s > 1");
    return detail::power_tail_from(s, static_cast<double>(m) + 1.0);
}

// Riemann zeta via direct sum to a short cutoff plus Euler-Maclaurin
// corrections; uniformly accurate down to s slightly above 1.
inline SpecialValue zeta_value(double s) {
    if (!(s > 1.0)) throw DomainError("zeta requires s > 1");
    constexpr std::size_t cutoff = 20;
    KahanSum head;
    for (std::size_t n = 1; n <= cutoff; ++n) head.add(std::pow(static_cast<double>(n), -s));
    const SpecialValue tail = zeta_tail(s, cutoff);
    return {head.value() + tail.value, tail.est_abs_error};
}

inline double zeta(double s) { return zeta_value(s).value; }

// pi*p / sin(pi*p) for 0 < p < 1. For p > 1/2, sin(pi*p) is evaluated as
// sin(pi*(1-p)) to avoid cancellation near p = 1.
inline double sin_constant(double p) {
    if (!(p > 0.0) || !(p < 1.0)) throw DomainError("sin_constant requires 0 < p < 1");
    const double s = (p > 0.5) ? std::sin(std::numbers::pi * (1.0 - p))
                               : std::sin(std::numbers::pi * p);
    return std::numbers::pi * p / s;
}

// Generalized logarithmic mean L_r(a, b) = ((a^r - b^r) / (r (a - b)))^{1/(r-1)},
// extended by L_inf(a, b) = max(a, b). Strictly increasing in r.
inline double generalized_log_mean(double r, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("log mean requires positive a, b");
    if (a == b) throw DomainError("log mean requires a != b");
    if (std::isinf(r) && r > 0.0) return std::max(a, b);
    if (!std::isfinite(r) || r == 0.0 || r == 1.0) throw DomainError("log mean requires r not in {0, 1}");
    const double base = (std::pow(a, r) - std::pow(b, r)) / (r * (a - b));
    return std::pow(base, 1.0 / (r - 1.0));
}

} // namespace mbounds::specfun
