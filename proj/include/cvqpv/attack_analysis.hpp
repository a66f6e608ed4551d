#pragma once

// Attacker side of the round-count analysis: entropy gap -> Fano MSE floor ->
// score margin Delta -> Chebyshev round count, plus the entropy-saturating
// Gaussian attacker used in simulations.

#include "cvqpv/channel_model.hpp"
#include "cvqpv/gaussian_core.hpp"
#include "cvqpv/protocol_engine.hpp"
#include "cvqpv/rng.hpp"

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>

namespace cvqpv {

/// Unit in which the eps/4 entropy increment is read before exponentiating.
/// nats reproduces the displayed floor 1/2 e^(eps/2).
enum class EpsUnit { nats, bits };

EpsUnit parse_eps_unit(const std::string& text);
std::string to_string(EpsUnit unit);

/// h(U|P) + eps/4 in bits.
EntropyValue attacker_entropy_floor(const ChannelParams& ch, double eps);

/// 1/2 log2(pi e) + eps/4: the same floor for R = sqrt(2) lambda U on the
/// ideal channel attackers are granted.
EntropyValue attacker_R_entropy_floor(double eps);

/// Lower bound on E[(sqrt(t) R - r')^2]: 1/2 e^(eps/2) (nats) or 1/2 2^(eps/2) (bits).
double fano_mse_floor(double eps, EpsUnit unit = EpsUnit::nats);

/// Delta = fano_mse_floor / (1/2 + u) - gamma; may be <= 0.
double delta_margin(double eps, double u, double gamma, EpsUnit unit = EpsUnit::nats);

/// Exact variance of (sqrt(t) R - r')^2 / (1/2 + u) when the error is
/// Gaussian with variance v: 2 (v / (1/2 + u))^2.
double score_variance_exact(double error_variance, double u);

struct RoundPlan {
    std::uint64_t rounds = 0;
    double gamma = 0.0;
    double delta = 0.0;
};

class NoMarginError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kMaxPlannedRounds = 1'000'000'000;

/// Smallest N with Delta(N) > 0 and N Delta(N)^2 >= chebyshev_constant *
/// score_variance / eps_hon, where gamma (and so Delta) depends on N.
/// Throws NoMarginError when no N <= kMaxPlannedRounds qualifies.
RoundPlan rounds_required(double eps, double u, double eps_hon, double score_variance, EpsUnit unit = EpsUnit::nats,
                          double chebyshev_constant = 1.0);

/// Receives the ground-truth displacement r and answers sqrt(t) r plus
/// Gaussian noise of variance fano_mse_floor(eps): the weakest error the
/// entropy gap permits.
class PessimisticAttacker final : public Responder {
public:
    PessimisticAttacker(double eps, EpsUnit unit);
    [[nodiscard]] std::string name() const override { return "pessimistic-attacker"; }
    Response respond(const RoundContext& ctx, Rng& rng) const override;
    [[nodiscard]] double error_variance() const { return variance_; }

private:
    double variance_;
    double stddev_;
};

std::unique_ptr<Responder> make_pessimistic_attacker(double eps, EpsUnit unit = EpsUnit::nats);

/// Empirical variance of the attacker's per-round score term. samples >= 10^4.
double score_variance_estimate(double eps, double u, std::uint64_t samples, Rng& rng, EpsUnit unit = EpsUnit::nats);

struct AttackBound {
    double eps = 0.0;
    double mse_floor = 0.0;
    double delta_margin = 0.0; // at N_required
    std::uint64_t N_required = 0;
    double score_variance_est = 0.0;
};

/// Full planning chain: estimate the score variance, then solve for N.
AttackBound plan_attack(double eps, double u, double eps_hon, std::uint64_t variance_samples, std::uint64_t seed,
                        EpsUnit unit = EpsUnit::nats);

} // namespace cvqpv
