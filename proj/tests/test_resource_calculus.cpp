#include <doctest.h>

#include "cvqpv/gaussian_core.hpp"
#include "cvqpv/resource_calculus.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

using namespace cvqpv;

TEST_CASE("net cardinality") {
    CHECK(net_cardinality_log2(2.0, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(net_cardinality_log2(0.01, 4) == doctest::Approx(30.6042067647157145).epsilon(1e-13));
    CHECK(net_cardinality_log2(0.01, 8) == doctest::Approx(2.0 * net_cardinality_log2(0.01, 4)));
    CHECK_THROWS(net_cardinality_log2(0.0, 4));
}

TEST_CASE("net approximation error") {
    CHECK(net_approx_error(0.0) == 0.0);
    CHECK(net_approx_error(0.1) == doctest::Approx(0.331).epsilon(1e-14));
    for (double et : {1e-5, 0.004, 0.1, 0.9}) {
        CHECK(net_approx_error(delta_supremum(et)) == doctest::Approx(et / 2.0).epsilon(1e-10));
        CHECK(net_approx_error(delta_from_eps_tilde(et)) < et / 2.0);
        CHECK(delta_from_eps_tilde(et) == doctest::Approx(kDeltaShrink * delta_supremum(et)));
    }
}

TEST_CASE("rounding size factor") {
    CHECK(rounding_size_logfactor(0.004) == doctest::Approx(11.5521883329454287).epsilon(1e-12));
    CHECK(std::ceil(rounding_size_logfactor(0.004)) == 12.0);
    CHECK(rounding_size_logfactor(0.00031) == doctest::Approx(15.2405184667373270).epsilon(1e-12));
    // eps_tilde -> 1 limit: log2(1 + 4/(cbrt(12) - 2))
    CHECK(rounding_size_logfactor(1.0 - 1e-12) == doctest::Approx(3.88950661692203921).epsilon(1e-9));
    CHECK_THROWS(rounding_size_logfactor(0.0));
    CHECK_THROWS(rounding_size_logfactor(1.0));

    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> d(1e-6, 0.999);
    for (int i = 0; i < 1000; ++i) {
        double a = d(rng);
        double b = d(rng);
        if (a > b) std::swap(a, b);
        if (b > a * (1.0 + 1e-9)) CHECK(rounding_size_logfactor(a) > rounding_size_logfactor(b));
    }

    const auto k = rounding_size(5, 5, 0.004);
    CHECK(k.factor_ceil == 12.0);
    CHECK(k.k_int_log2 == doctest::Approx(std::log2(12.0) + 20.0));
    CHECK(k.k_real_log2 == doctest::Approx(std::log2(k.factor) + 20.0));
}

TEST_CASE("counting bound") {
    const double h4 = binary_entropy(0.25);
    const auto b = count_bound_log2(30, 5, 5, 0.004);
    CHECK(b.normalized == doctest::Approx(-0.165284375529953200).epsilon(1e-12));
    CHECK(b.normalized == doctest::Approx(12.0 * (std::exp2(-9.0) + std::exp2(-40.0)) + h4 - 1.0));
    CHECK(b.raw == doctest::Approx(b.normalized * std::exp2(60.0)));
    CHECK(b.secure);
    CHECK(b.raw < -std::exp2(30.0));

    const auto big = count_bound_log2(30, 5, 10, 0.004);
    CHECK(big.normalized == doctest::Approx(23.8112781356350038).epsilon(1e-12));
    CHECK_FALSE(big.secure);

    CHECK_NOTHROW(count_bound_log2(kMaxCountingBits, 1, 1, 0.004));
    CHECK_THROWS(count_bound_log2(kMaxCountingBits + 1, 1, 1, 0.004));
}

TEST_CASE("qubit budget") {
    const auto b = q_max(30, 5, 0.004);
    CHECK(b.closed_form_regime);
    CHECK(b.closed_form_q == 5);
    CHECK(b.q_max == 6);
    CHECK(count_bound_log2(30, 5, 6, 0.004).secure);
    CHECK_FALSE(count_bound_log2(30, 5, 7, 0.004).secure);

    const auto edge = q_max(20, 5, 0.004);
    CHECK_FALSE(edge.closed_form_regime);
    CHECK_FALSE(edge.diagnostic.empty());

    CHECK(q_max(12, 20, 0.004).q_max == -1);

    for (unsigned m0 = 1; m0 <= 10; ++m0) {
        for (unsigned n = 2 * (m0 + 5) + 1; n <= kMaxCountingBits; ++n) {
            const auto budget = q_max(n, m0, 0.004);
            CHECK(budget.closed_form_regime);
            CHECK(budget.q_max >= budget.closed_form_q);
        }
    }
}

TEST_CASE("cutoff soundness scale") {
    CHECK(cutoff_soundness(12, 10.0) == doctest::Approx(-29.3996400170394449).epsilon(1e-12));
    CHECK(cutoff_soundness(5, 10.0) == doctest::Approx(-0.229684687633120663).epsilon(1e-12));
    CHECK(cutoff_soundness(6, 10.0) == doctest::Approx(2.0 * cutoff_soundness(5, 10.0)));
    CHECK(cutoff_soundness(3, 1e7) > -1e-12);
    CHECK(cutoff_soundness(3, 1e7) < 0.0);
}

TEST_CASE("resource report bundles the pieces") {
    const auto r = resource_report(30, 5, 5, 0.004, 10.0);
    CHECK(r.k.factor_ceil == 12.0);
    CHECK(r.bound.secure);
    CHECK(r.budget.q_max == 6);
    CHECK(r.cutoff_error_log2 == cutoff_soundness(5, 10.0));
}
