// Numeric kernels and the counter-based RNG.
//
// The Philox4x32-10 vectors are the published known-answer tests from the
// Random123 distribution (Salmon et al., SC 2011, kat_vectors): all-zeros,
// all-ones, and the pi-digits counter/key.  Moment checks on the Gaussian
// sampler are frozen-seed Monte Carlo with generous 5-sigma tolerances.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "hrlab/numeric.hpp"
#include "hrlab/rng.hpp"

using namespace hrlab;

TEST_CASE("philox4x32-10 known-answer vectors") {
    Counter4 zeros = philox4x32({0, 0, 0, 0}, 0, 0);
    CHECK(zeros[0] == 0x6627e8d5u);
    CHECK(zeros[1] == 0xe169c58du);
    CHECK(zeros[2] == 0xbc57ac4cu);
    CHECK(zeros[3] == 0x9b00dbd8u);

    Counter4 ones = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                               0xffffffffu, 0xffffffffu);
    CHECK(ones[0] == 0x408f276du);
    CHECK(ones[1] == 0x41c83b0eu);
    CHECK(ones[2] == 0xa20bc7c6u);
    CHECK(ones[3] == 0x6d5451fdu);

    Counter4 pi = philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                             0xa4093822u, 0x299f31d0u);
    CHECK(pi[0] == 0xd16cfe09u);
    CHECK(pi[1] == 0x94fdccebu);
    CHECK(pi[2] == 0x5001e420u);
    CHECK(pi[3] == 0x24126ea1u);
}

TEST_CASE("stream tags are deterministic, top-bit-marked, and distinct") {
    std::uint64_t a = stream_from_tag("bootstrap:alpha");
    CHECK(a == stream_from_tag("bootstrap:alpha"));
    CHECK((a & 0x8000000000000000ull) != 0);
    std::set<std::uint64_t> seen;
    for (const char* tag : {"a", "b", "ab", "bootstrap:", "demi-alpha:x", ""})
        seen.insert(stream_from_tag(tag));
    CHECK(seen.size() == 6);
}

TEST_CASE("rng streams are pure functions of (seed, stream, step)") {
    RngStream s(123456789ull, 42);
    CHECK(s.bits64(7) == RngStream(123456789ull, 42).bits64(7));
    CHECK(s.bits64(7) != s.bits64(8));
    CHECK(s.bits64(7) != RngStream(123456789ull, 43).bits64(7));
    CHECK(s.bits64(7) != RngStream(123456790ull, 42).bits64(7));
    CHECK(s.normal(3) == RngStream(123456789ull, 42).normal(3));
}

TEST_CASE("uniform stays inside the open unit interval and is unbiased") {
    RngStream s(2026ull, 1);
    KahanSum sum;
    const std::size_t N = 100000;
    for (std::size_t i = 0; i < N; ++i) {
        double u = s.uniform(i);
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        sum.add(u);
    }
    double mean = sum.value() / static_cast<double>(N);
    // sd of the mean = 1/sqrt(12 N) ~ 9.1e-4; allow 5 sigma
    CHECK(std::fabs(mean - 0.5) < 5.0 * 9.2e-4);
}

TEST_CASE("rademacher and index draws have the right support") {
    RngStream s(7ull, 9);
    std::size_t plus = 0;
    for (std::size_t i = 0; i < 20000; ++i) {
        double x = s.rademacher(i);
        REQUIRE((x == 1.0 || x == -1.0));
        if (x == 1.0) ++plus;
        std::uint64_t idx = s.index(i, 37);
        REQUIRE(idx < 37);
    }
    CHECK(std::fabs(static_cast<double>(plus) / 20000.0 - 0.5) < 0.018);  // 5 sigma
}

TEST_CASE("box-muller pairs have gaussian moments") {
    RngStream s(20260825ull, 2);
    KahanSum m1, m2, m4, mabs, cross;
    const std::size_t N = 100000;  // pairs
    for (std::size_t i = 0; i < N; ++i) {
        auto [a, b] = s.normal_pair(i);
        m1.add(a);
        m1.add(b);
        m2.add(a * a);
        m2.add(b * b);
        m4.add(a * a * a * a);
        m4.add(b * b * b * b);
        mabs.add(std::fabs(a));
        mabs.add(std::fabs(b));
        cross.add(a * b);
    }
    double n = 2.0 * static_cast<double>(N);
    CHECK(std::fabs(m1.value() / n) < 5.0 / std::sqrt(n));                   // mean 0
    CHECK(std::fabs(m2.value() / n - 1.0) < 5.0 * std::sqrt(2.0 / n));       // var 1
    CHECK(std::fabs(m4.value() / n - 3.0) < 5.0 * std::sqrt(96.0 / n));      // E Z^4 = 3
    CHECK(std::fabs(mabs.value() / n - std::sqrt(2.0 / M_PI)) < 5.0 / std::sqrt(n));
    // the two coordinates of one pair are independent
    CHECK(std::fabs(cross.value() / static_cast<double>(N)) <
          5.0 / std::sqrt(static_cast<double>(N)));
}

TEST_CASE("neumaier summation survives catastrophic cancellation") {
    KahanSum s;
    s.add(1e16);
    s.add(1.0);
    s.add(-1e16);
    CHECK(s.value() == 1.0);  // plain (and classic Kahan) summation returns 0

    std::vector<double> xs = {1e16, 1.0, -1e16};
    CHECK(kahan_total(xs) == 1.0);
}

TEST_CASE("double-double add is an error-free transformation") {
    DD a = two_sum(1e16, 1.0);
    CHECK(a.hi == 1e16);
    CHECK(a.lo == 1.0);

    DD acc{0.0, 0.0};
    acc = dd_add(acc, 1e16);
    acc = dd_add(acc, 1.0);
    acc = dd_add(acc, -1e16);
    CHECK(dd_value(acc) == 1.0);

    DD b = dd_add(DD{3.0, 0.0}, DD{0.25, 0.0});
    CHECK(dd_value(b) == 3.25);
    CHECK(b.lo == 0.0);
}

TEST_CASE("type-7 quantiles interpolate order statistics") {
    std::vector<double> xs = {4.0, 1.0, 3.0, 2.0};
    CHECK(quantile(xs, 0.0) == 1.0);
    CHECK(quantile(xs, 1.0) == 4.0);
    CHECK(quantile(xs, 0.5) == 2.5);
    CHECK(quantile(xs, 1.0 / 3.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(median(xs) == 2.5);
    CHECK(median(std::vector<double>{7.0}) == 7.0);

    std::vector<double> sorted = {1.0, 2.0, 3.0, 4.0};
    CHECK(sorted_quantile(sorted, 0.25) == 1.75);
    CHECK_THROWS_AS((void)sorted_quantile(std::vector<double>{}, 0.5), std::invalid_argument);
    CHECK_THROWS_AS((void)sorted_quantile(sorted, 1.5), std::invalid_argument);
}

TEST_CASE("gaussian closed forms") {
    CHECK(gaussian_abs_moment(2.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(gaussian_abs_moment(4.0) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(gaussian_abs_moment(1.0) ==
          doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(1e-14));
    CHECK(gaussian_abs_moment(3.0) ==
          doctest::Approx(2.0 * std::sqrt(2.0 / M_PI)).epsilon(1e-14));
    CHECK_THROWS_AS((void)gaussian_abs_moment(-1.0), std::invalid_argument);

    CHECK(gaussian_positive_part_mean(1.0) ==
          doctest::Approx(1.0 / std::sqrt(2.0 * M_PI)).epsilon(1e-14));
    CHECK(gaussian_positive_part_mean(3.0) == 3.0 * gaussian_positive_part_mean(1.0));

    CHECK(std_normal_cdf(0.0) == 0.5);
    CHECK(std_normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-9));
    CHECK(std_normal_cdf(-1.959963984540054) == doctest::Approx(0.025).epsilon(1e-9));
}

TEST_CASE("ulp distance and relative tolerance helpers") {
    CHECK(ulp_distance(1.0, 1.0) == 0.0);
    CHECK(ulp_distance(1.0, std::nextafter(1.0, 2.0)) == 1.0);
    CHECK(ulp_distance(0.0, 0.0) == 0.0);
    CHECK(ulp_distance(0.0, 1e-300) > 1e12);  // many denormal ulps away from zero
    CHECK(approx_rel(1.0, 1.0 + 1e-13, 1e-12));
    CHECK_FALSE(approx_rel(1.0, 1.1, 1e-3));
}
