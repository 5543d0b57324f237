#include <catch2/catch.hpp>

#include <cmath>

#include "mbounds/oracle.hpp"

using namespace mbounds;
namespace orc = mbounds::oracle;

namespace {

NonNegativeMatrix identity(std::size_t n) {
    std::vector<double> e(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1.0;
    return {n, n, std::move(e)};
}

NonNegativeMatrix random_matrix(std::size_t m, std::size_t n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<double> e(m * n);
    for (double& v : e) v = rng.uniform();
    return {m, n, std::move(e)};
}

} // namespace

TEST_CASE("ratio basics") {
    CHECK(orc::ratio(identity(3), MonotoneVector({1, 1, 0}), 2.0, 2.0) ==
          Approx(1.0).epsilon(1e-14));
    CHECK(orc::ratio(generate(FamilySpec::cesaro(), 2), MonotoneVector({1, 1}), 2.0, 2.0) ==
          Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(orc::ratio(identity(3), MonotoneVector({0, 0, 0}), 2.0, 2.0), ZeroVector);
    CHECK_THROWS_AS(orc::ratio(identity(3), MonotoneVector({1, 0}), 2.0, 2.0), SizeError);
}

TEST_CASE("step-vector ratios reproduce the s-sequence") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const auto a = random_matrix(9, 12, seed);
        for (auto [p, q] : {std::pair{2.0, 1.5}, {0.5, 0.5}, {1.0, 1.0}}) {
            const auto s = s_sequence(a, p, q);
            for (std::size_t r = 1; r <= 12; ++r) {
                const double rho = orc::ratio(a, step_vector(r, 12), p, q);
                CHECK(std::pow(rho, q) ==
                      Approx(s.values[r - 1]).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("enumerate_steps matches compute_bound") {
    const auto id3 = identity(3);
    CHECK(orc::enumerate_steps(id3, ExponentPair::lower(2.0, 2.0)) == Approx(1.0).epsilon(1e-14));

    const auto ces = generate(FamilySpec::cesaro(), 2);
    CHECK(orc::enumerate_steps(ces, ExponentPair::lower(2.0, 2.0)) == Approx(1.0).epsilon(1e-13));

    const auto tp = generate(FamilySpec::tail_power(1.0, 1.0), 2);
    const auto pair = ExponentPair::upper(0.5, 0.5);
    // max ratio = s_2^{1/q} = 1.06066^2 = 1.125
    CHECK(orc::enumerate_steps(tp, pair) == Approx(1.125).epsilon(1e-13));
    CHECK(orc::enumerate_steps(tp, pair) ==
          Approx(compute_bound(tp, pair).lambda).epsilon(1e-12));
}

TEST_CASE("sample_monotone contract") {
    const auto one = orc::sample_monotone(1, 2.0, 5, 7);
    for (const auto& v : one) CHECK(v[0] == Approx(1.0).epsilon(1e-14));

    const auto a = orc::sample_monotone(20, 0.7, 50, 99);
    const auto b = orc::sample_monotone(20, 0.7, 50, 99);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].values() == b[i].values()); // deterministic per seed
        CHECK(pnorm(a[i], 0.7) == Approx(1.0).epsilon(1e-12));
        for (std::size_t k = 1; k < 20; ++k) CHECK(a[i][k] <= a[i][k - 1]);
    }
    const auto c = orc::sample_monotone(20, 0.7, 5, 100); // different seed differs
    CHECK(a[0].values() != c[0].values());
}

TEST_CASE("local_search cannot improve on the formula's extremal vector") {
    const auto a = generate(FamilySpec::cesaro(), 8);
    const auto pair = ExponentPair::lower(2.0, 2.0);
    const auto bound = compute_bound(a, pair);
    const auto found = orc::local_search(a, pair, bound.extremal, 300);
    const double r = orc::ratio(a, found, pair.p, pair.q);
    CHECK(r >= bound.lambda * (1.0 - 1e-9));

    // identity at p = q: every cone ratio is exactly 1
    const auto id = identity(6);
    const auto x0 = orc::sample_monotone(6, 2.0, 1, 3).front();
    const auto best = orc::local_search(id, ExponentPair::lower(2.0, 2.0), x0, 200);
    CHECK(orc::ratio(id, best, 2.0, 2.0) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("verify is consistent on the worked families") {
    const auto r1 = orc::verify(identity(8), ExponentPair::lower(2.0, 2.0), 1000, 42);
    CHECK(r1.verdict == orc::Verdict::Consistent);

    const auto r2 =
        orc::verify(generate(FamilySpec::cesaro(), 64), ExponentPair::lower(2.0, 2.0), 10000, 42);
    CHECK(r2.verdict == orc::Verdict::Consistent);
    CHECK(r2.step_enum_lambda == Approx(r2.formula_lambda).epsilon(1e-12));
    CHECK(r2.sampled_best >= r2.formula_lambda * (1.0 - 1e-9));

    const auto r3 = orc::verify(generate(FamilySpec::tail_power(1.0, 1.0), 64),
                                ExponentPair::upper(0.5, 0.5), 10000, 42);
    CHECK(r3.verdict == orc::Verdict::Consistent);
    CHECK(r3.sampled_best <= r3.formula_lambda * (1.0 + 1e-9));
}

TEST_CASE("verify verdict is independent of the thread count") {
    const auto a = random_matrix(16, 16, 11);
    const auto pair = ExponentPair::lower(2.0, 2.0);
    const auto t1 = orc::verify(a, pair, 4000, 5, 1);
    const auto t4 = orc::verify(a, pair, 4000, 5, 4);
    CHECK(t1.verdict == t4.verdict);
    CHECK(t1.sampled_best == t4.sampled_best);
    CHECK(t1.worst_vector.values() == t4.worst_vector.values());
}

TEST_CASE("lemma1 equality and hand cases") {
    // b = 0: both sides equal (sum a^q)^{p/q}
    CHECK(orc::lemma1_check({1.0, 2.0, 3.0}, {0.0, 0.0, 0.0}, 2.0, 1.5));
    // m = 1, a = b = 1, p = 2, q = 1: LHS = 2 >= 1 = RHS
    CHECK(orc::lemma1_check({1.0}, {1.0}, 2.0, 1.0));
    CHECK_THROWS_AS(orc::lemma1_check({1.0}, {1.0}, 2.0, 3.0), DomainError);
    CHECK_THROWS_AS(orc::lemma1_check({0.0}, {1.0}, 2.0, 1.0), DomainError);
    CHECK_THROWS_AS(orc::lemma1_check({1.0}, {1.0, 2.0}, 2.0, 1.0), SizeError);
}

TEST_CASE("lemma1 holds on random instances in both regimes") {
    SplitMix64 rng(2024);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t m = 1 + rng.next() % 20;
        std::vector<double> a(m), b(m);
        for (std::size_t i = 0; i < m; ++i) {
            a[i] = 1e-3 + 10.0 * rng.uniform();
            b[i] = 10.0 * rng.uniform();
        }
        const double p_low = 1.0 + 3.0 * rng.uniform();
        const double q_low = p_low * (0.05 + 0.95 * rng.uniform());
        CHECK(orc::lemma1_check(a, b, p_low, q_low));

        const double p_up = 0.05 + 0.95 * rng.uniform();
        const double q_up = p_up + 3.0 * rng.uniform();
        CHECK(orc::lemma1_check(a, b, p_up, q_up));
    }
}
