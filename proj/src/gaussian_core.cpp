#include "cvqpv/gaussian_core.hpp"

#include "cvqpv/channel_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cvqpv {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

// Saturation point for holding 2^m0 as an exact integer.
constexpr unsigned kMaxExactCutoffExponent = 63;

} // namespace

double EntropyValue::in_bits() const { return unit == EntropyUnit::bits ? value : value / kLn2; }

double EntropyValue::in_nats() const { return unit == EntropyUnit::nats ? value : value * kLn2; }

EntropyValue EntropyValue::to(EntropyUnit target) const {
    return target == EntropyUnit::bits ? bits(in_bits()) : nats(in_nats());
}

ModulationParams::ModulationParams(double sigma, double u0)
    : sigma_(sigma), lambda_(lambda_of_sigma(sigma)), u0_(u0) {
    if (!(u0 >= 0.0) || !std::isfinite(u0)) {
        throw std::domain_error("ModulationParams: u0 must be finite and nonnegative");
    }
}

ModulationParams ModulationParams::secure_regime(double sigma, double u0) {
    ModulationParams p(sigma, u0);
    if (!(p.excess_noise() < 0.25)) {
        throw std::domain_error("ModulationParams: u0*sigma^2 = " + std::to_string(p.excess_noise()) +
                                " is outside the secure regime (< 0.25)");
    }
    return p;
}

CutoffParams::CutoffParams(unsigned m0, double lambda) : m0_(m0), lambda_(lambda) {
    if (m0 == 0) throw std::domain_error("CutoffParams: m0 must be positive");
    if (!(lambda > 0.0 && lambda < 1.0)) throw std::domain_error("CutoffParams: lambda must lie in (0,1)");
}

double lambda_of_sigma(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw std::domain_error("lambda_of_sigma: sigma must be positive and finite");
    }
    // tanh(asinh(s)) = s / sqrt(1 + s^2); hypot avoids overflow of s^2
    return sigma / std::hypot(1.0, sigma);
}

double honest_sigma_sq(double sigma, const ChannelParams& ch) {
    if (!(sigma > 0.0) || std::isnan(sigma)) throw std::domain_error("honest_sigma_sq: sigma must be positive");
    const double prior_precision = std::isinf(sigma) ? 0.0 : 1.0 / (sigma * sigma);
    const double channel_precision = ch.t() / (0.5 + ch.u());
    const double precision = prior_precision + channel_precision;
    if (precision <= 0.0) throw std::domain_error("honest_sigma_sq: undefined for t = 0 and sigma = inf");
    return 1.0 / precision;
}

EntropyValue h_R_given_Rprime(double sigma, const ChannelParams& ch) {
    const double var = honest_sigma_sq(sigma, ch);
    return EntropyValue::bits(0.5 * std::log2(2.0 * kPi * kE * var));
}

EntropyValue h_U_given_P_limit(const ChannelParams& ch) {
    if (!(ch.t() > 0.0)) throw std::domain_error("h_U_given_P_limit: requires t > 0");
    return EntropyValue::bits(0.5 * std::log2(kPi * kE * (1.0 + 2.0 * ch.u()) / (2.0 * ch.t())));
}

EntropyValue entropy_scale(EntropyValue h, double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw std::domain_error("entropy_scale: beta must be positive");
    const double shift = h.unit == EntropyUnit::bits ? std::log2(beta) : std::log(beta);
    return {h.value + shift, h.unit};
}

EntropyValue uncertainty_floor() { return EntropyValue::bits(std::log2(2.0 * kPi)); }

double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binary_entropy: p must lie in [0,1]");
    if (p == 0.0 || p == 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double h_tilde(double x) {
    if (!(x >= 0.0)) throw std::domain_error("h_tilde: x must be nonnegative");
    if (x >= 0.5) return 1.0;
    return binary_entropy(x);
}

PurifiedDistance cutoff_purified_distance(const CutoffParams& c) {
    const double log2_value = std::ldexp(std::log2(c.lambda()), static_cast<int>(c.m0()));
    return {std::exp2(log2_value), log2_value, c.m0() >= kMaxExactCutoffExponent};
}

namespace {

// M log(rho) with rho = sigma^2 / (sigma^2 + 1), after checking (lambda, sigma)
double cutoff_log_rho_power(const CutoffParams& c, double sigma) {
    const double expected = lambda_of_sigma(sigma);
    if (std::abs(expected - c.lambda()) > 1e-12 * expected) {
        throw std::domain_error("cutoff_energy: lambda is not tanh(asinh(sigma))");
    }
    return -std::ldexp(std::log1p(1.0 / (sigma * sigma)), static_cast<int>(c.m0()));
}

} // namespace

double cutoff_energy(const CutoffParams& c, double sigma) {
    const double x = cutoff_log_rho_power(c, sigma);
    const double levels = std::ldexp(1.0, static_cast<int>(c.m0()));
    // sigma^2 + M rho^M / (rho^M - 1)
    return sigma * sigma + levels * std::exp(x) / std::expm1(x);
}

double cutoff_energy_deficit_log2(const CutoffParams& c, double sigma) {
    const double x = cutoff_log_rho_power(c, sigma);
    return static_cast<double>(c.m0()) + x / kLn2 - std::log2(-std::expm1(x));
}

double cutoff_energy_lambda_form(const CutoffParams& c) {
    const double lam_sq = c.lambda() * c.lambda();
    const double levels = std::ldexp(1.0, static_cast<int>(c.m0()));
    const double log_lam_sq = std::log(lam_sq);
    const double pow_2m = std::exp(levels * log_lam_sq);            // lambda^(2^(m0+1))
    const double pow_2m_plus_2 = std::exp((levels + 1.0) * log_lam_sq); // lambda^(2^(m0+1)+2)
    const double num = lam_sq + (levels - 1.0) * pow_2m_plus_2 - levels * pow_2m;
    const double den = (lam_sq - 1.0) * (pow_2m - 1.0);
    return num / den;
}

} // namespace cvqpv
