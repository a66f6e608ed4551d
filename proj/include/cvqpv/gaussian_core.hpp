#pragma once

// Closed-form Gaussian-state and entropy arithmetic.
//
// Conventions used throughout the library:
//   * quadrature units with hbar*omega = 1; the vacuum quadrature variance is 1/2
//   * entropies are carried in bits unless explicitly converted to nats

#include <cstdint>

namespace cvqpv {

class ChannelParams;

enum class EntropyUnit { bits, nats };

struct EntropyValue {
    double value = 0.0;
    EntropyUnit unit = EntropyUnit::bits;

    static EntropyValue bits(double v) { return {v, EntropyUnit::bits}; }
    static EntropyValue nats(double v) { return {v, EntropyUnit::nats}; }

    [[nodiscard]] double in_bits() const;
    [[nodiscard]] double in_nats() const;
    [[nodiscard]] EntropyValue to(EntropyUnit target) const;
};

/// Gaussian modulation of the verifier source. lambda is the squeezing
/// amplitude of the purifying two-mode squeezed vacuum, u0 the phase-noise
/// coefficient in u = u0 * sigma^2.
class ModulationParams {
public:
    explicit ModulationParams(double sigma, double u0 = 0.0);

    /// Rejects parameters with u0 * sigma^2 >= 1/4, where the protocol is insecure.
    static ModulationParams secure_regime(double sigma, double u0);

    [[nodiscard]] double sigma() const { return sigma_; }
    [[nodiscard]] double lambda() const { return lambda_; }
    [[nodiscard]] double u0() const { return u0_; }
    [[nodiscard]] double excess_noise() const { return u0_ * sigma_ * sigma_; }

private:
    double sigma_;
    double lambda_;
    double u0_;
};

/// Photon-number cutoff 2^m0 of the two-mode squeezed vacuum.
class CutoffParams {
public:
    CutoffParams(unsigned m0, double lambda);

    [[nodiscard]] unsigned m0() const { return m0_; }
    [[nodiscard]] double lambda() const { return lambda_; }

private:
    unsigned m0_;
    double lambda_;
};

struct PurifiedDistance {
    double value;      // lambda^(2^m0); 0 once it underflows
    double log2_value; // 2^m0 * log2(lambda), always finite
    bool saturated;    // m0 >= 63: 2^m0 is not held as an integer
};

double lambda_of_sigma(double sigma);

/// Sigma^2 = (1/sigma^2 + t/(1/2+u))^-1, the honest prover's residual
/// variance about the displacement. sigma may be +inf.
double honest_sigma_sq(double sigma, const ChannelParams& ch);

EntropyValue h_R_given_Rprime(double sigma, const ChannelParams& ch);

/// h(U|P) in the sigma >> 1 limit: 1/2 log2(pi e (1+2u) / (2t)).
EntropyValue h_U_given_P_limit(const ChannelParams& ch);

/// h(beta X) = h(X) + log beta.
EntropyValue entropy_scale(EntropyValue h, double beta);

/// Complementarity constant of the entropic uncertainty relation, log2(2 pi).
EntropyValue uncertainty_floor();

double binary_entropy(double p);

/// Binary entropy on [0, 1/2], clamped to 1 above.
double h_tilde(double x);

PurifiedDistance cutoff_purified_distance(const CutoffParams& c);

/// Mean photon number of the V0 mode of the truncated state. Uses the
/// sigma form sigma^2 + M rho^M / (rho^M - 1), rho = sigma^2/(sigma^2+1),
/// M = 2^m0. lambda in c must equal lambda_of_sigma(sigma).
double cutoff_energy(const CutoffParams& c, double sigma);

/// log2(sigma^2 - cutoff_energy) = log2(M rho^M / (1 - rho^M)); finite even
/// where the deficit itself underflows.
double cutoff_energy_deficit_log2(const CutoffParams& c, double sigma);

/// Same quantity through the lambda-power form; kept as a cross-check.
double cutoff_energy_lambda_form(const CutoffParams& c);

} // namespace cvqpv
