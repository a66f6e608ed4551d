#include "cvqpv/attack_analysis.hpp"

#include <cmath>
#include <numbers>

namespace cvqpv {

EpsUnit parse_eps_unit(const std::string& text) {
    if (text == "nats") return EpsUnit::nats;
    if (text == "bits") return EpsUnit::bits;
    throw std::invalid_argument("unknown eps unit '" + text + "' (expected nats or bits)");
}

std::string to_string(EpsUnit unit) { return unit == EpsUnit::nats ? "nats" : "bits"; }

EntropyValue attacker_entropy_floor(const ChannelParams& ch, double eps) {
    if (!(eps >= 0.0)) throw std::domain_error("attacker_entropy_floor: eps must be nonnegative");
    return EntropyValue::bits(h_U_given_P_limit(ch).in_bits() + eps / 4.0);
}

EntropyValue attacker_R_entropy_floor(double eps) {
    if (!(eps >= 0.0)) throw std::domain_error("attacker_R_entropy_floor: eps must be nonnegative");
    return EntropyValue::bits(0.5 * std::log2(std::numbers::pi * std::numbers::e) + eps / 4.0);
}

double fano_mse_floor(double eps, EpsUnit unit) {
    if (!(eps >= 0.0)) throw std::domain_error("fano_mse_floor: eps must be nonnegative");
    return unit == EpsUnit::nats ? 0.5 * std::exp(eps / 2.0) : 0.5 * std::exp2(eps / 2.0);
}

double delta_margin(double eps, double u, double gamma, EpsUnit unit) {
    return fano_mse_floor(eps, unit) / (0.5 + u) - gamma;
}

double score_variance_exact(double error_variance, double u) {
    const double ratio = error_variance / (0.5 + u);
    return 2.0 * ratio * ratio;
}

RoundPlan rounds_required(double eps, double u, double eps_hon, double score_variance, EpsUnit unit,
                          double chebyshev_constant) {
    if (!(score_variance > 0.0)) throw std::domain_error("rounds_required: score variance must be positive");
    if (!(eps_hon > 0.0 && eps_hon < 1.0)) throw std::domain_error("rounds_required: eps_hon must lie in (0,1)");
    const double target = chebyshev_constant * score_variance / eps_hon;
    auto plan = [&](std::uint64_t n) {
        const double gamma = gamma_threshold(n, eps_hon);
        return RoundPlan{n, gamma, delta_margin(eps, u, gamma, unit)};
    };
    auto sufficient = [&](const RoundPlan& p) {
        return p.delta > 0.0 && static_cast<double>(p.rounds) * p.delta * p.delta >= target;
    };

    // Delta(N) increases with N, so sufficiency is monotone in N
    if (!sufficient(plan(kMaxPlannedRounds))) {
        throw NoMarginError("no N <= " + std::to_string(kMaxPlannedRounds) +
                            " separates the attacker: the score margin Delta is too small or nonpositive");
    }
    std::uint64_t hi = 1;
    while (hi < kMaxPlannedRounds && !sufficient(plan(hi))) hi = std::min(hi * 2, kMaxPlannedRounds);
    std::uint64_t lo = hi / 2; // insufficient (or 0)
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        (sufficient(plan(mid)) ? hi : lo) = mid;
    }
    return plan(hi);
}

PessimisticAttacker::PessimisticAttacker(double eps, EpsUnit unit)
    : variance_(fano_mse_floor(eps, unit)), stddev_(std::sqrt(variance_)) {}

Response PessimisticAttacker::respond(const RoundContext& ctx, Rng& rng) const {
    return {ctx.channel.sqrt_t() * ctx.draw.r + stddev_ * rng.normal(), true};
}

std::unique_ptr<Responder> make_pessimistic_attacker(double eps, EpsUnit unit) {
    return std::make_unique<PessimisticAttacker>(eps, unit);
}

double score_variance_estimate(double eps, double u, std::uint64_t samples, Rng& rng, EpsUnit unit) {
    if (samples < 10'000) throw std::domain_error("score_variance_estimate: needs at least 10^4 samples");
    const double stddev = std::sqrt(fano_mse_floor(eps, unit));
    const double inv_noise = 1.0 / (0.5 + u);
    // Welford
    double mean = 0.0;
    double m2 = 0.0;
    for (std::uint64_t i = 1; i <= samples; ++i) {
        const double e = stddev * rng.normal();
        const double term = e * e * inv_noise;
        const double d = term - mean;
        mean += d / static_cast<double>(i);
        m2 += d * (term - mean);
    }
    return m2 / static_cast<double>(samples - 1);
}

AttackBound plan_attack(double eps, double u, double eps_hon, std::uint64_t variance_samples, std::uint64_t seed,
                        EpsUnit unit) {
    AttackBound out;
    out.eps = eps;
    out.mse_floor = fano_mse_floor(eps, unit);
    Rng rng = make_stream(seed, 0);
    out.score_variance_est = score_variance_estimate(eps, u, variance_samples, rng, unit);
    const RoundPlan plan = rounds_required(eps, u, eps_hon, out.score_variance_est, unit);
    out.N_required = plan.rounds;
    out.delta_margin = plan.delta;
    return out;
}

} // namespace cvqpv
