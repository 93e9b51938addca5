#include "doctest.h"

#include <cmath>

#include "valconf/numeric.hpp"
#include "valconf/value_model.hpp"

using namespace valconf;

TEST_CASE("canonical order round-trips") {
    for (int pos = 0; pos < kValueCount; ++pos) {
        const ValueId v = value_at(pos);
        CHECK(position(v) == pos);
        CHECK(value_from_name(value_name(v)) == v);
    }
    CHECK(value_name(ValueId::SelfDirection) == "self-direction");
    CHECK(value_name(ValueId::Universalism) == "universalism");
    CHECK(value_from_name("self_direction") == ValueId::SelfDirection);
    CHECK(!value_from_name("honor").has_value());
}

TEST_CASE("four-class grouping") {
    CHECK(value_class(ValueId::SelfDirection) == ValueClass::OpennessToChange);
    CHECK(value_class(ValueId::Stimulation) == ValueClass::OpennessToChange);
    CHECK(value_class(ValueId::Hedonism) == ValueClass::OpennessToChange);
    CHECK(value_class(ValueId::Achievement) == ValueClass::SelfEnhancement);
    CHECK(value_class(ValueId::Power) == ValueClass::SelfEnhancement);
    CHECK(value_class(ValueId::Security) == ValueClass::Conservation);
    CHECK(value_class(ValueId::Conformity) == ValueClass::Conservation);
    CHECK(value_class(ValueId::Tradition) == ValueClass::Conservation);
    CHECK(value_class(ValueId::Benevolence) == ValueClass::SelfTranscendence);
    CHECK(value_class(ValueId::Universalism) == ValueClass::SelfTranscendence);
}

TEST_CASE("circular distance") {
    CHECK(circular_distance(ValueId::SelfDirection, ValueId::SelfDirection) == 0);
    CHECK(circular_distance(ValueId::SelfDirection, ValueId::Stimulation) == 1);
    CHECK(circular_distance(ValueId::SelfDirection, ValueId::Security) == 5);
    CHECK(circular_distance(ValueId::SelfDirection, ValueId::Universalism) == 1);  // wrap
    for (int i = 0; i < kValueCount; ++i) {
        for (int j = 0; j < kValueCount; ++j) {
            const int d = circular_distance(value_at(i), value_at(j));
            CHECK(d == circular_distance(value_at(j), value_at(i)));
            CHECK(d >= 0);
            CHECK(d <= 5);
        }
    }
}

TEST_CASE("kernel values at sigma 1") {
    const auto k = build_kernel(1.0);
    for (int i = 0; i < kValueCount; ++i) CHECK(k.at(i, i) == 1.0);
    CHECK(k.at(0, 1) == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
    CHECK(k.at(0, 5) == doctest::Approx(std::exp(-12.5)).epsilon(1e-12));
    for (int i = 0; i < kValueCount; ++i) {
        for (int j = 0; j < kValueCount; ++j) CHECK(k.at(i, j) == k.at(j, i));
    }
}

TEST_CASE("kernel monotone in circular distance") {
    const auto k = build_kernel(1.0);
    for (int i = 0; i < kValueCount; ++i) {
        for (int d = 1; d <= 5; ++d) {
            const int closer = (i + d - 1) % kValueCount;
            const int farther = (i + d) % kValueCount;
            CHECK(k.at(i, closer) > k.at(i, farther));
        }
    }
}

TEST_CASE("kernel PSD at sigma 1, checked by an independent eigensolve") {
    const auto k = build_kernel(1.0);
    CHECK(k.positive_semidefinite);
    CHECK(k.min_eigenvalue >= -1e-9);

    // Independent route: power iteration on (c_max I - B) finds the smallest
    // eigenvalue of B without going through the Jacobi code.
    numeric::Rng rng(3);
    std::array<double, kValueCount> v{};
    for (double& x : v) x = rng.uniform() - 0.5;
    const double shift = 11.0;  // > any eigenvalue of B (row sums < 10)
    for (int iter = 0; iter < 3000; ++iter) {
        std::array<double, kValueCount> next{};
        for (int i = 0; i < kValueCount; ++i) {
            next[static_cast<std::size_t>(i)] = shift * v[static_cast<std::size_t>(i)];
            for (int j = 0; j < kValueCount; ++j) {
                next[static_cast<std::size_t>(i)] -= k.at(i, j) * v[static_cast<std::size_t>(j)];
            }
        }
        double norm = 0.0;
        for (double x : next) norm += x * x;
        norm = std::sqrt(norm);
        for (int i = 0; i < kValueCount; ++i) v[static_cast<std::size_t>(i)] =
            next[static_cast<std::size_t>(i)] / norm;
    }
    double rayleigh = 0.0;
    for (int i = 0; i < kValueCount; ++i) {
        for (int j = 0; j < kValueCount; ++j) {
            rayleigh += v[static_cast<std::size_t>(i)] * k.at(i, j) * v[static_cast<std::size_t>(j)];
        }
    }
    CHECK(rayleigh >= -1e-9);                                 // smallest eigenvalue of B
    CHECK(rayleigh == doctest::Approx(k.min_eigenvalue).epsilon(1e-6));
}

TEST_CASE("wide kernels are flagged, not rejected") {
    const auto k = build_kernel(2.0);
    CHECK_FALSE(k.positive_semidefinite);
    CHECK(k.min_eigenvalue < -1e-9);
}

TEST_CASE("non-positive sigma rejected") {
    CHECK_THROWS(build_kernel(0.0));
    CHECK_THROWS(build_kernel(-1.0));
}

TEST_CASE("kernel csv shape") {
    const auto csv = kernel_to_csv(build_kernel(1.0));
    std::size_t lines = 0;
    for (char c : csv) {
        if (c == '\n') ++lines;
    }
    CHECK(lines == 11);  // header + 10 rows
    CHECK(csv.rfind("value,self-direction,", 0) == 0);
}
