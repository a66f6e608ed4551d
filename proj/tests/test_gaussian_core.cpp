#include <doctest.h>

#include "cvqpv/channel_model.hpp"
#include "cvqpv/gaussian_core.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

using namespace cvqpv;

namespace {

// Brute-force mean photon number of the truncated state:
// sum_{m<M} m lambda^(2m) / sum_{m<M} lambda^(2m).
double truncated_fock_energy(double sigma, unsigned m0) {
    const double lam_sq = sigma * sigma / (1.0 + sigma * sigma);
    const std::size_t levels = std::size_t{1} << m0;
    long double num = 0.0L;
    long double den = 0.0L;
    long double w = 1.0L;
    for (std::size_t m = 0; m < levels; ++m) {
        num += static_cast<long double>(m) * w;
        den += w;
        w *= lam_sq;
    }
    return static_cast<double>(num / den);
}

} // namespace

TEST_CASE("lambda_of_sigma") {
    CHECK(lambda_of_sigma(1.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(lambda_of_sigma(3.0) == doctest::Approx(0.94868329805051379960).epsilon(1e-15));
    CHECK(lambda_of_sigma(1e8) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(lambda_of_sigma(1e8) <= 1.0);
    CHECK(lambda_of_sigma(2.0) == doctest::Approx(std::tanh(std::asinh(2.0))));

    CHECK_THROWS_AS(lambda_of_sigma(0.0), std::domain_error);
    CHECK_THROWS_AS(lambda_of_sigma(-1.0), std::domain_error);
    CHECK_THROWS_AS(lambda_of_sigma(std::numeric_limits<double>::infinity()), std::domain_error);
    CHECK_THROWS_AS(lambda_of_sigma(std::nan("")), std::domain_error);
}

TEST_CASE("lambda is in (0,1) and increasing on random pairs") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> log_sigma(-6.0, 6.0);
    for (int i = 0; i < 2000; ++i) {
        double a = std::pow(10.0, log_sigma(rng));
        double b = std::pow(10.0, log_sigma(rng));
        if (a > b) std::swap(a, b);
        const double la = lambda_of_sigma(a);
        const double lb = lambda_of_sigma(b);
        CHECK(la > 0.0);
        CHECK(lb < 1.0);
        if (b > a * (1.0 + 1e-9) && b < 1e6) CHECK(la < lb);
    }
}

TEST_CASE("ModulationParams") {
    const ModulationParams m(2.0, 0.01);
    CHECK(m.lambda() == doctest::Approx(2.0 / std::sqrt(5.0)));
    CHECK(m.excess_noise() == doctest::Approx(0.04));
    CHECK_NOTHROW(ModulationParams::secure_regime(2.0, 0.06));
    CHECK_THROWS_AS(ModulationParams::secure_regime(2.0, 0.0625), std::domain_error);
    CHECK_THROWS_AS(ModulationParams(1.0, -0.1), std::domain_error);
}

TEST_CASE("honest_sigma_sq") {
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(honest_sigma_sq(inf, ChannelParams(1.0, 0.0)) == doctest::Approx(0.5));
    CHECK(honest_sigma_sq(10.0, ChannelParams(1.0, 0.0)) == doctest::Approx(0.49751243781094527363));
    CHECK(honest_sigma_sq(inf, ChannelParams(0.8, 0.05)) == doctest::Approx(0.6875));
    CHECK_THROWS_AS(honest_sigma_sq(inf, ChannelParams(0.0, 0.0)), std::domain_error);
    // t = 0 with finite sigma is the prior variance
    CHECK(honest_sigma_sq(3.0, ChannelParams(0.0, 0.1)) == doctest::Approx(9.0));
}

TEST_CASE("honest_sigma_sq is increasing in u and decreasing in t") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ut(0.01, 1.0);
    std::uniform_real_distribution<double> uu(0.0, 0.5);
    std::uniform_real_distribution<double> us(0.5, 100.0);
    for (int i = 0; i < 1000; ++i) {
        const double sigma = us(rng);
        double t1 = ut(rng), t2 = ut(rng);
        double u1 = uu(rng), u2 = uu(rng);
        if (t1 > t2) std::swap(t1, t2);
        if (u1 > u2) std::swap(u1, u2);
        CHECK(honest_sigma_sq(sigma, ChannelParams(t1, u1)) >= honest_sigma_sq(sigma, ChannelParams(t2, u1)));
        CHECK(honest_sigma_sq(sigma, ChannelParams(t1, u1)) <= honest_sigma_sq(sigma, ChannelParams(t1, u2)));
    }
}

TEST_CASE("conditional entropies") {
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(h_R_given_Rprime(inf, ChannelParams(1.0, 0.0)).value == doctest::Approx(1.5470955851806411));
    CHECK(h_R_given_Rprime(inf, ChannelParams(0.8, 0.05)).value == doctest::Approx(1.7768113944992897));
    // Sigma^2 = 1 through t = 1/2, u = 0, sigma = inf
    CHECK(h_R_given_Rprime(inf, ChannelParams(0.5, 0.0)).value == doctest::Approx(2.0470955851806411));

    CHECK(h_U_given_P_limit(ChannelParams(1.0, 0.0)).value == doctest::Approx(1.0471).epsilon(1e-4));
    CHECK(h_U_given_P_limit(ChannelParams(0.5, 0.0)).value == doctest::Approx(1.5470955851806411));
    CHECK(h_U_given_P_limit(ChannelParams(0.8, 0.05)).value == doctest::Approx(1.2768113944992897));
    CHECK_THROWS_AS(h_U_given_P_limit(ChannelParams(0.0, 0.0)), std::domain_error);
}

TEST_CASE("R and U entropies differ by log2(sqrt 2) for large sigma") {
    for (auto [t, u] : {std::pair{1.0, 0.0}, {0.8, 0.05}, {0.95, 0.075}, {0.9, 0.12}}) {
        const ChannelParams ch(t, u);
        const double gap = h_R_given_Rprime(1e6, ch).value - h_U_given_P_limit(ch).value;
        CHECK(gap == doctest::Approx(0.5).epsilon(1e-4));
        // the same chain through the scaling identity, at lambda -> 1
        const EntropyValue scaled = entropy_scale(h_R_given_Rprime(1e6, ch), 1.0 / std::sqrt(2.0));
        CHECK(scaled.value == doctest::Approx(h_U_given_P_limit(ch).value).epsilon(1e-4));
    }
}

TEST_CASE("entropy_scale and units") {
    CHECK(entropy_scale(EntropyValue::bits(1.0), 1.0).value == 1.0);
    CHECK(entropy_scale(EntropyValue::bits(1.0), 2.0).value == doctest::Approx(2.0));
    CHECK(entropy_scale(EntropyValue::bits(1.5471), 1.0 / std::sqrt(2.0)).value == doctest::Approx(1.0471));
    CHECK(entropy_scale(EntropyValue::nats(1.0), std::numbers::e).value == doctest::Approx(2.0));
    CHECK_THROWS_AS(entropy_scale(EntropyValue::bits(1.0), 0.0), std::domain_error);
    CHECK_THROWS_AS(entropy_scale(EntropyValue::bits(1.0), -2.0), std::domain_error);

    const EntropyValue b = EntropyValue::bits(2.5);
    CHECK(b.in_nats() == doctest::Approx(2.5 * std::numbers::ln2).epsilon(1e-15));
    CHECK(b.to(EntropyUnit::nats).to(EntropyUnit::bits).value == doctest::Approx(2.5).epsilon(1e-15));
}

TEST_CASE("uncertainty_floor") {
    CHECK(uncertainty_floor().value == doctest::Approx(2.6514961294723188));
    CHECK(uncertainty_floor().in_nats() == doctest::Approx(1.8378770664093455));
    CHECK(uncertainty_floor().value - h_U_given_P_limit(ChannelParams(1.0, 0.0)).value ==
          doctest::Approx(1.6044005442916777));
}

TEST_CASE("h_tilde and binary_entropy") {
    CHECK(h_tilde(0.0) == 0.0);
    CHECK(h_tilde(0.6) == 1.0);
    CHECK(h_tilde(0.5) == 1.0);
    CHECK(h_tilde(0.25) == doctest::Approx(0.81127812445913286));
    CHECK_THROWS_AS(h_tilde(-0.1), std::domain_error);

    CHECK(binary_entropy(0.5) == doctest::Approx(1.0));
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK(binary_entropy(0.25) == doctest::Approx(0.81127812445913286));
    CHECK_THROWS_AS(binary_entropy(1.5), std::domain_error);
    CHECK_THROWS_AS(binary_entropy(-0.5), std::domain_error);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> half(0.0, 0.5);
    for (int i = 0; i < 1000; ++i) {
        const double x = half(rng);
        CHECK(h_tilde(x) == binary_entropy(x));
    }
}

TEST_CASE("cutoff_purified_distance") {
    CHECK(cutoff_purified_distance(CutoffParams(1, 0.5)).value == doctest::Approx(0.25));
    const auto d = cutoff_purified_distance(CutoffParams(10, 0.99));
    CHECK(d.value == doctest::Approx(3.39187054019344e-5).epsilon(1e-10));
    CHECK(d.log2_value == doctest::Approx(1024.0 * std::log2(0.99)));
    CHECK_FALSE(d.saturated);
    CHECK(cutoff_purified_distance(CutoffParams(3, 1.0 - 1e-12)).value == doctest::Approx(1.0));

    const auto sat = cutoff_purified_distance(CutoffParams(70, 0.9));
    CHECK(sat.saturated);
    CHECK(sat.value == 0.0);
    CHECK(std::isfinite(sat.log2_value));
    CHECK(sat.log2_value == doctest::Approx(std::ldexp(std::log2(0.9), 70)));

    CHECK_THROWS_AS(CutoffParams(0, 0.5), std::domain_error);
    CHECK_THROWS_AS(CutoffParams(2, 1.0), std::domain_error);
}

TEST_CASE("cutoff_energy examples") {
    CHECK(cutoff_energy(CutoffParams(1, lambda_of_sigma(1.0)), 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(cutoff_energy(CutoffParams(4, lambda_of_sigma(2.0)), 2.0) ==
          doctest::Approx(3.5365963850915515).epsilon(1e-12));
    CHECK(cutoff_energy(CutoffParams(40, lambda_of_sigma(5.0)), 5.0) == doctest::Approx(25.0).epsilon(1e-15));
    CHECK_THROWS_AS(cutoff_energy(CutoffParams(3, 0.5), 2.0), std::domain_error);
}

TEST_CASE("cutoff_energy matches the truncated Fock sum") {
    for (double sigma : {0.3, 1.0, 2.0, 3.7, 5.0, 10.0}) {
        for (unsigned m0 = 1; m0 <= 12; ++m0) {
            const CutoffParams c(m0, lambda_of_sigma(sigma));
            const double oracle = truncated_fock_energy(sigma, m0);
            CHECK(cutoff_energy(c, sigma) == doctest::Approx(oracle).epsilon(1e-10));
            CHECK(cutoff_energy_lambda_form(c) == doctest::Approx(oracle).epsilon(1e-9));
        }
    }
}

TEST_CASE("cutoff_energy approaches sigma^2 from below, monotonically in m0") {
    for (double sigma : {1.0, 2.0, 5.0}) {
        double previous_gap = INFINITY; // log2 of sigma^2 - E
        for (unsigned m0 = 1; m0 <= 12; ++m0) {
            const CutoffParams c(m0, lambda_of_sigma(sigma));
            const double log2_gap = cutoff_energy_deficit_log2(c, sigma);
            CHECK(cutoff_energy(c, sigma) <= sigma * sigma);
            CHECK(std::isfinite(log2_gap));
            CHECK(log2_gap < previous_gap);
            if (m0 <= 3) {
                CHECK(cutoff_energy(c, sigma) < sigma * sigma);
                CHECK(std::exp2(log2_gap) == doctest::Approx(sigma * sigma - cutoff_energy(c, sigma)).epsilon(1e-9));
            }
            previous_gap = log2_gap;
        }
    }
}
