#include "cvqpv/protocol_engine.hpp"

#include "cvqpv/parallel.hpp"

#include <cmath>
#include <string>

namespace cvqpv {

void ProtocolParams::validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::domain_error("protocol: sigma must be positive and finite");
    if (n == 0 || n > kMaxInputBits) throw std::domain_error("protocol: n must lie in [1, 64]");
    if (rounds == 0) throw std::domain_error("protocol: rounds must be >= 1");
    if (!(eps_hon > 0.0 && eps_hon < 1.0)) throw std::domain_error("protocol: eps_hon must lie in (0,1)");
}

double gamma_threshold(std::uint64_t rounds, double eps_hon) {
    if (rounds == 0) throw std::domain_error("gamma_threshold: N must be >= 1");
    if (!(eps_hon > 0.0 && eps_hon <= 1.0)) throw std::domain_error("gamma_threshold: eps_hon must lie in (0,1]");
    const double log_inv = -std::log(eps_hon);
    const double n = static_cast<double>(rounds);
    return 1.0 + 2.0 / std::sqrt(n) * std::sqrt(log_inv) + 2.0 / n * log_inv;
}

Response HonestResponder::respond(const RoundContext& ctx, Rng& rng) const {
    const Basis b = ctx.f(ctx.draw.x, ctx.draw.y) ? Basis::p_quadrature : Basis::x_quadrature;
    return {homodyne(ctx.draw, b, ctx.channel, rng, opt_), true};
}

std::string to_string(RegimeFlag flag) {
    switch (flag) {
    case RegimeFlag::channel_infeasible:
        return "channel-infeasible";
    case RegimeFlag::generic_attack_regime:
        return "generic-attack-regime";
    }
    return "unknown";
}

std::set<RegimeFlag> regime_flags(const ChannelParams& ch) {
    std::set<RegimeFlag> flags;
    if (!feasible(ch)) flags.insert(RegimeFlag::channel_infeasible);
    if (generic_attack_regime(ch)) flags.insert(RegimeFlag::generic_attack_regime);
    return flags;
}

bool decide(double mean_score, double gamma, bool all_timing_ok) { return all_timing_ok && mean_score < gamma; }

bool replay_decision(const std::vector<RoundRecord>& records, double gamma) {
    if (records.empty()) return false;
    double sum = 0.0;
    bool timely = true;
    for (const auto& rec : records) {
        sum += rec.score_term;
        timely = timely && rec.timing_ok;
    }
    return decide(sum / static_cast<double>(records.size()), gamma, timely);
}

SessionAborted::SessionAborted(const std::string& responder, std::uint64_t round, const std::string& why)
    : std::runtime_error("session aborted: responder '" + responder + "' failed in round " + std::to_string(round) +
                         ": " + why) {}

Protocol::Protocol(ProtocolParams params, ChannelParams channel)
    : params_((params.validate(), std::move(params))),
      channel_(channel),
      f_(params_.f_spec, params_.n),
      gamma_(gamma_threshold(params_.rounds, params_.eps_hon)) {}

SessionResult Protocol::run_session(const Responder& responder, Rng& rng, bool trace) const {
    SessionResult result;
    result.gamma = gamma_;
    result.rounds = params_.rounds;
    result.regime_flags = regime_flags(channel_);
    if (trace) result.records.reserve(params_.rounds);

    const double sqrt_t = channel_.sqrt_t();
    const double inv_noise = 1.0 / channel_.output_noise();
    double sum = 0.0;
    for (std::uint64_t i = 0; i < params_.rounds; ++i) {
        const auto [x, y] = draw_inputs(params_.n, rng);
        const ChallengeDraw draw = sample_challenge(params_.sigma, f_, x, y, rng);
        Response resp;
        try {
            resp = responder.respond(RoundContext{draw, f_, channel_}, rng);
        } catch (const std::exception& e) {
            throw SessionAborted(responder.name(), i, e.what());
        }
        if (!std::isfinite(resp.value)) throw SessionAborted(responder.name(), i, "non-finite response");
        const double dev = resp.value - sqrt_t * draw.r;
        const double term = dev * dev * inv_noise;
        sum += term;
        result.all_timing_ok = result.all_timing_ok && resp.timing_ok;
        if (trace) result.records.push_back({i, basis_angle(draw.basis), draw.r, resp.value, term, resp.timing_ok});
    }
    result.mean_score = sum / static_cast<double>(params_.rounds);
    result.accepted = decide(result.mean_score, gamma_, result.all_timing_ok);
    return result;
}

SessionResult run_session(const ProtocolParams& p, const ChannelParams& ch, const Responder& responder, Rng& rng,
                          bool trace) {
    return Protocol(p, ch).run_session(responder, rng, trace);
}

double BatchSummary::acceptance_rate() const {
    return sessions.empty() ? 0.0 : static_cast<double>(accepted) / static_cast<double>(sessions.size());
}

BatchSummary run_batch(const Protocol& protocol, const Responder& responder, std::uint64_t sessions,
                       std::uint64_t master_seed, unsigned threads) {
    BatchSummary summary;
    summary.sessions.resize(sessions);
    parallel_for_index(sessions, threads, [&](std::size_t i) {
        Rng rng = make_stream(master_seed, i);
        const SessionResult r = protocol.run_session(responder, rng);
        summary.sessions[i] = {r.mean_score, r.accepted};
    });
    for (const auto& s : summary.sessions) summary.accepted += s.accepted ? 1 : 0;
    return summary;
}

double honest_failure_rate(const ProtocolParams& p, const ChannelParams& ch, std::uint64_t repetitions,
                           std::uint64_t master_seed, unsigned threads, HomodyneOptions opt) {
    if (repetitions == 0) throw std::domain_error("honest_failure_rate: repetitions must be >= 1");
    const Protocol protocol(p, ch);
    const HonestResponder honest(opt);
    const BatchSummary batch = run_batch(protocol, honest, repetitions, master_seed, threads);
    return 1.0 - batch.acceptance_rate();
}

} // namespace cvqpv
