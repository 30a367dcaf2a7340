#include <doctest.h>

#include <cmath>
#include <set>

#include "sdmt/rng.hpp"

using namespace sdmt;

TEST_CASE("philox known-answer vectors") {
    // Published Philox4x32-10 reference outputs.
    CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) ==
          PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and separated") {
    RngStream a(7, 3, StreamDomain::outage);
    RngStream b(7, 3, StreamDomain::outage);
    for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());

    std::set<double> firsts;
    firsts.insert(RngStream(7, 3, StreamDomain::outage).uniform());
    firsts.insert(RngStream(7, 4, StreamDomain::outage).uniform());
    firsts.insert(RngStream(8, 3, StreamDomain::outage).uniform());
    firsts.insert(RngStream(7, 3, StreamDomain::moments).uniform());
    CHECK(firsts.size() == 4);
}

TEST_CASE("uniform lies in the open unit interval with the right moments") {
    RngStream s(11, 0, StreamDomain::test);
    const int n = 1'000'000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = s.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        sum += u;
        sum2 += u * u;
    }
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.002));
    CHECK(sum2 / n - (sum / n) * (sum / n) == doctest::Approx(1.0 / 12.0).epsilon(0.005));
}

TEST_CASE("complex normal has unit power split evenly") {
    RngStream s(5, 1, StreamDomain::test);
    const int n = 1'000'000;
    double power = 0.0, re2 = 0.0, re = 0.0, cross = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto z = s.complex_normal();
        power += std::norm(z);
        re += z.real();
        re2 += z.real() * z.real();
        cross += z.real() * z.imag();
    }
    CHECK(std::abs(power / n - 1.0) < 0.01);
    CHECK(std::abs(re2 / n - 0.5) < 0.01);
    CHECK(std::abs(re / n) < 0.005);
    CHECK(std::abs(cross / n) < 0.005);
}

TEST_CASE("real normal moments") {
    RngStream s(9, 2, StreamDomain::test);
    const int n = 400'000;
    double m1 = 0.0, m2 = 0.0, m4 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = s.normal();
        m1 += x;
        m2 += x * x;
        m4 += x * x * x * x;
    }
    CHECK(std::abs(m1 / n) < 0.01);
    CHECK(m2 / n == doctest::Approx(1.0).epsilon(0.01));
    CHECK(m4 / n == doctest::Approx(3.0).epsilon(0.03));
}
