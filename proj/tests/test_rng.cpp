#include <doctest.h>

#include <cmath>
#include <vector>

#include "cogsense/rng.hpp"

using namespace cogsense;

TEST_CASE("identical keys produce identical sequences") {
    auto a = RandomStream::derive(42, 7, StreamPurpose::sensing_noise, 3);
    auto b = RandomStream::derive(42, 7, StreamPurpose::sensing_noise, 3);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("distinct trial/purpose/user keys decorrelate") {
    auto a = RandomStream::derive(42, 7, StreamPurpose::sensing_noise, 3);
    auto b = RandomStream::derive(42, 8, StreamPurpose::sensing_noise, 3);
    auto c = RandomStream::derive(42, 7, StreamPurpose::sensing_gain, 3);
    auto d = RandomStream::derive(42, 7, StreamPurpose::sensing_noise, 4);
    int equal_ab = 0, equal_ac = 0, equal_ad = 0;
    for (int i = 0; i < 64; ++i) {
        const auto va = a.next_u64();
        equal_ab += (va == b.next_u64());
        equal_ac += (va == c.next_u64());
        equal_ad += (va == d.next_u64());
    }
    CHECK(equal_ab == 0);
    CHECK(equal_ac == 0);
    CHECK(equal_ad == 0);
}

TEST_CASE("uniform lies in [0,1) with mean near 1/2") {
    RandomStream rng(123);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(std::abs(sum / n - 0.5) < 0.005);
}

TEST_CASE("gaussian moments") {
    RandomStream rng(99);
    const int n = 200000;
    double s1 = 0.0, s2 = 0.0, s4 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double g = rng.gaussian();
        s1 += g;
        s2 += g * g;
        s4 += g * g * g * g;
    }
    CHECK(std::abs(s1 / n) < 0.01);
    CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.02));
    CHECK(s4 / n == doctest::Approx(3.0).epsilon(0.05));  // normal kurtosis
}

TEST_CASE("complex gaussian carries the requested total variance") {
    RandomStream rng(7);
    const int n = 100000;
    double p = 0.0, re2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto z = rng.complex_gaussian(2.0);
        p += std::norm(z);
        re2 += z.real() * z.real();
    }
    CHECK(p / n == doctest::Approx(2.0).epsilon(0.02));
    CHECK(re2 / n == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("uniform_below covers the range without bias") {
    RandomStream rng(5);
    std::vector<int> counts(7, 0);
    const int n = 70000;
    for (int i = 0; i < n; ++i) ++counts[rng.uniform_below(7)];
    for (int c : counts) CHECK(std::abs(c - n / 7) < 5 * std::sqrt(n / 7.0));
}
