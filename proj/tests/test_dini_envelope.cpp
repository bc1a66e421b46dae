// Dini-transformed series and rate envelopes.
//
// Oracle: for c_k = 2^-k the suffix masses are nu_k = 2^{1-k}, so
// sum c_k / nu_k^{1/2} telescopes to the geometric series
// sum 2^{-(k+1)/2} = 1/(2 - sqrt 2).  For alpha = 1, b_l = l, r = 2,
// delta = 1/2 the power envelope must track n^{3/4} (tail nu_n ~ 1/n,
// beta_n ~ n * (1/n)^{delta/r} = n^{3/4}).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "hrlab/dini.hpp"
#include "hrlab/envelope.hpp"

using namespace hrlab;

TEST_CASE("dini transform of the geometric series hits 1/(2 - sqrt 2)") {
    auto c = WeightSequence::geometric(1.0, 0.5, 100);
    auto d = dini_transform(c, 0.5, 100);
    const double target = 1.0 / (2.0 - std::sqrt(2.0));  // 1.70710678...
    CHECK(std::fabs(d.value - target) < 1e-4);           // required tolerance at N=100
    CHECK(std::fabs(d.value - target) < 1e-9);           // actual accuracy is far better
    CHECK(d.partial.size() == 100);
    CHECK(d.partial.back() == d.value);
    CHECK(d.nu1 == doctest::Approx(1.0).epsilon(1e-12));  // total mass of 2^-k
    CHECK(d.last_doubling_increment > 0.0);
    CHECK(d.last_doubling_increment < 1e-7);  // the series has converged by N=100
}

TEST_CASE("phi-dini with a power phi reproduces dini bit for bit") {
    auto c = WeightSequence::geometric(1.0, 0.5, 100);
    auto d = dini_transform(c, 0.5, 100);
    auto pd = phi_dini_transform(c, PhiFunction::power(0.5), 100);
    CHECK(pd.value == d.value);
    CHECK(pd.partial == d.partial);  // element-wise bitwise equality
    CHECK(pd.nu1 == d.nu1);
}

TEST_CASE("dini value grows with delta") {
    auto c = WeightSequence::geometric(1.0, 0.5, 80);
    double lo = dini_transform(c, 0.25, 80).value;
    double mid = dini_transform(c, 0.5, 80).value;
    double hi = dini_transform(c, 0.75, 80).value;
    CHECK(lo < mid);
    CHECK(mid < hi);
}

TEST_CASE("dini transform rejects degenerate input") {
    auto c = WeightSequence::geometric(1.0, 0.5, 20);
    CHECK_THROWS_AS((void)dini_transform(c, 0.0, 20), std::invalid_argument);
    CHECK_THROWS_AS((void)dini_transform(c, 1.0, 20), std::invalid_argument);
    auto zeros = WeightSequence::from_values(std::vector<double>(10, 0.0));
    CHECK_THROWS_AS((void)dini_transform(zeros, 0.5, 10), std::domain_error);
}

TEST_CASE("phi certification accepts the closed families and refuses tables") {
    auto pw = certify_phi(PhiFunction::power(0.5));
    CHECK(pw.certified);
    CHECK(pw.sum_partial > 0.0);
    CHECK(pw.tail_bound > 0.0);

    auto plog = certify_phi(PhiFunction::power_log());
    CHECK(plog.certified);

    auto tab = certify_phi(PhiFunction::table({1.0, 10.0}, {1.0, 2.0}));
    CHECK_FALSE(tab.certified);
    CHECK_FALSE(tab.detail.empty());

    // delta >= 1 is constructible but never certifiable (sum phi(n)/n^2 diverges)
    auto steep = certify_phi(PhiFunction::power(1.5));
    CHECK_FALSE(steep.certified);
    CHECK_FALSE(steep.detail.empty());
    CHECK_THROWS_AS((void)PhiFunction::power(0.0), std::invalid_argument);
}

TEST_CASE("phi function families evaluate and label themselves") {
    auto p = PhiFunction::power(0.5);
    CHECK(p(4.0) == doctest::Approx(2.0).epsilon(1e-15));
    auto t = PhiFunction::table({1.0, 2.0}, {10.0, 20.0});
    CHECK(t(1.5) == doctest::Approx(15.0).epsilon(1e-12));
    CHECK(t(0.5) == 10.0);  // clamped below
    CHECK(t(9.0) == 20.0);  // clamped above
    CHECK_FALSE(p.label().empty());
    CHECK_FALSE(PhiFunction::power_log().label().empty());
}

TEST_CASE("hu-hu envelope tracks n^{3/4} for alpha=1, b=l, r=2, delta=1/2") {
    const std::size_t N = 10000;
    auto alpha = WeightSequence::constant(1.0, N);
    auto b = NormalizerSequence::power(1.0, 1.0, N);
    auto env = hu_hu_envelope(alpha, b, 2.0, 0.5, N);
    REQUIRE(env.size() == N);
    double worst = 0.0;
    for (std::size_t n = 10; n <= N; ++n) {
        double target = std::pow(static_cast<double>(n), 0.75);
        worst = std::max(worst, std::fabs(env.term(n) / target - 1.0));
    }
    CHECK(worst < 0.15);  // within 15 percent across [10, 10^4]
    for (std::size_t n = 2; n <= N; ++n) REQUIRE(env.term(n) >= env.term(n - 1));
    CHECK(env.ratio_eventually_decreasing);  // beta_n / b_n ~ n^{-1/4} -> 0
    CHECK_FALSE(env.bounded_branch);         // the envelope itself is unbounded
    CHECK(env.delta == 0.5);
    CHECK(env.r == 2.0);
}

TEST_CASE("phi envelope with a power phi matches the power-tail envelope") {
    const std::size_t N = 2000;
    auto alpha = WeightSequence::power(1.0, -2.0, N);
    auto b = NormalizerSequence::power(1.0, 1.0, N);
    auto a = hu_hu_envelope(alpha, b, 2.0, 0.5, N);
    auto p = phi_envelope(alpha, b, 2.0, PhiFunction::power(0.5), N);
    REQUIRE(a.size() == p.size());
    for (std::size_t n = 1; n <= N; ++n) REQUIRE(a.term(n) == p.term(n));
}

TEST_CASE("witness construction certifies the normalizer-existence lemma") {
    const std::size_t N = 5000;
    auto alpha = WeightSequence::power(1.0, -2.0, N);  // sum alpha_l/b_l^r converges
    auto b = NormalizerSequence::power(1.0, 1.0, N);
    auto rep = lemma22_witness(alpha, b, 2.0, 0.5, N);
    CHECK(rep.domination_holds);
    CHECK(rep.ratio_series_value > 0.0);
    CHECK(rep.ratio_series_value <= rep.dini_majorant_value);
    CHECK(rep.ratio_series_value < 10.0);
    CHECK(rep.ratio_series_last_doubling < 1e-3);
    REQUIRE(rep.witness.size() == N);
    for (std::size_t n = 2; n <= N; ++n) REQUIRE(rep.witness.term(n) >= rep.witness.term(n - 1));
}
