#pragma once

// N i.i.d. rounds of the coherent-state position-verification protocol with
// a pluggable responder, scored by
//
//     score = (1/N) sum_i (r'_i - sqrt(t) r_i)^2 / (1/2 + u)
//
// and accepted iff every response was on time and score < gamma(N, eps_hon).

#include "cvqpv/boolean_function.hpp"
#include "cvqpv/channel_model.hpp"
#include "cvqpv/rng.hpp"

#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace cvqpv {

struct ProtocolParams {
    double sigma = 10.0;
    unsigned n = 8;
    std::uint64_t rounds = 1000;
    double eps_hon = 0.01;
    FunctionSpec f_spec{};

    void validate() const;
};

/// gamma = 1 + (2/sqrt N) sqrt(ln 1/eps_hon) + (2/N) ln(1/eps_hon).
double gamma_threshold(std::uint64_t rounds, double eps_hon);

/// What a responder is handed each round. The full draw (including the
/// verifier-side ground truth r) is present; each responder model reads only
/// the parts it is entitled to and documents which.
struct RoundContext {
    const ChallengeDraw& draw;
    const BooleanFunction& f;
    const ChannelParams& channel;
};

struct Response {
    double value = 0.0;
    bool timing_ok = true;
};

class Responder {
public:
    virtual ~Responder() = default;
    [[nodiscard]] virtual std::string name() const = 0;
    virtual Response respond(const RoundContext& ctx, Rng& rng) const = 0;
};

/// Honest prover at P: computes f(x, y) from the classical inputs and
/// homodynes the received coherent state along that basis.
class HonestResponder final : public Responder {
public:
    explicit HonestResponder(HomodyneOptions opt = {}) : opt_(opt) {}
    [[nodiscard]] std::string name() const override { return "honest"; }
    Response respond(const RoundContext& ctx, Rng& rng) const override;

private:
    HomodyneOptions opt_;
};

struct RoundRecord {
    std::uint64_t index = 0;
    double theta = 0.0;
    double r = 0.0;
    double r_prime = 0.0;
    double score_term = 0.0;
    bool timing_ok = true;
};

enum class RegimeFlag { channel_infeasible, generic_attack_regime };

std::string to_string(RegimeFlag flag);

std::set<RegimeFlag> regime_flags(const ChannelParams& ch);

struct SessionResult {
    double mean_score = 0.0;
    double gamma = 0.0;
    bool accepted = false;
    bool all_timing_ok = true;
    std::uint64_t rounds = 0;
    std::vector<RoundRecord> records; // filled only when tracing
    std::set<RegimeFlag> regime_flags;
};

/// Accept iff every response was timely and the mean score is below gamma.
bool decide(double mean_score, double gamma, bool all_timing_ok);

/// Re-evaluates the verdict of a recorded session at another threshold.
bool replay_decision(const std::vector<RoundRecord>& records, double gamma);

class SessionAborted : public std::runtime_error {
public:
    SessionAborted(const std::string& responder, std::uint64_t round, const std::string& why);
};

/// Protocol instance with its basis function materialized once.
class Protocol {
public:
    Protocol(ProtocolParams params, ChannelParams channel);

    [[nodiscard]] const ProtocolParams& params() const { return params_; }
    [[nodiscard]] const ChannelParams& channel() const { return channel_; }
    [[nodiscard]] double gamma() const { return gamma_; }

    SessionResult run_session(const Responder& responder, Rng& rng, bool trace = false) const;

private:
    ProtocolParams params_;
    ChannelParams channel_;
    BooleanFunction f_;
    double gamma_;
};

SessionResult run_session(const ProtocolParams& p, const ChannelParams& ch, const Responder& responder, Rng& rng,
                          bool trace = false);

struct SessionOutcome {
    double mean_score = 0.0;
    bool accepted = false;
};

struct BatchSummary {
    std::vector<SessionOutcome> sessions;
    std::uint64_t accepted = 0;

    [[nodiscard]] double acceptance_rate() const;
};

/// Session i draws from make_stream(master_seed, i), so the summary is
/// identical for every thread count.
BatchSummary run_batch(const Protocol& protocol, const Responder& responder, std::uint64_t sessions,
                       std::uint64_t master_seed, unsigned threads = 1);

/// Fraction of rejected honest sessions.
double honest_failure_rate(const ProtocolParams& p, const ChannelParams& ch, std::uint64_t repetitions,
                           std::uint64_t master_seed, unsigned threads = 1, HomodyneOptions opt = {});

} // namespace cvqpv
