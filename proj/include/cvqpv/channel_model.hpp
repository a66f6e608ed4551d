#pragma once

// Quadrature-level model of the attenuating, noisy V0 -> P link and of the
// verifier's Gaussian modulation source. Shot noise is 1/2 (vacuum quadrature
// variance); excess noise u is additive Gaussian power at the channel output.

#include "cvqpv/boolean_function.hpp"
#include "cvqpv/rng.hpp"

#include <cstdint>
#include <optional>

namespace cvqpv {

class ChannelParams {
public:
    /// Requires 0 <= t <= 1 and u >= 0.
    ChannelParams(double t, double u);

    static ChannelParams ideal() { return {1.0, 0.0}; }

    [[nodiscard]] double t() const { return t_; }
    [[nodiscard]] double u() const { return u_; }

    /// 1/2 + u, the per-quadrature output noise power.
    [[nodiscard]] double output_noise() const { return 0.5 + u_; }
    [[nodiscard]] double sqrt_t() const { return sqrt_t_; }
    [[nodiscard]] double output_noise_sd() const { return noise_sd_; }

private:
    double t_;
    double u_;
    double sqrt_t_;
    double noise_sd_;
};

/// 4t > e(1 + 2u), strict.
bool feasible(const ChannelParams& ch);

/// Signed slack 4t - e(1 + 2u) of the feasibility relation.
double feasibility_margin(const ChannelParams& ch);

/// t <= 1/2: a generic loss attack is known to break position verification.
bool generic_attack_regime(const ChannelParams& ch);

/// Quadrature basis selected by f(x,y).
enum class Basis { x_quadrature = 0, p_quadrature = 1 };

double basis_angle(Basis b);

struct ChallengeDraw {
    double r = 0.0;
    double r_perp = 0.0;
    Basis basis = Basis::x_quadrature;
    std::uint64_t x = 0;
    std::uint64_t y = 0;
    // displacement of the coherent state sent by V0
    double x0 = 0.0;
    double p0 = 0.0;
};

/// Uniform n-bit string.
std::uint64_t draw_input(unsigned n, Rng& rng);

struct InputPair {
    std::uint64_t x = 0;
    std::uint64_t y = 0;
};

/// Independent uniform n-bit x and y; one 64-bit word serves both when 2n <= 64.
InputPair draw_inputs(unsigned n, Rng& rng);

/// r, r_perp ~ N(0, sigma^2) i.i.d.; basis from f(x, y); (x0, p0) is the
/// rotation of (r, r_perp) by the basis angle.
ChallengeDraw sample_challenge(double sigma, const BooleanFunction& f, std::uint64_t x, std::uint64_t y, Rng& rng);

/// Homodyne outcome of the (attenuated, noisy) coherent state along the
/// quadrature `b`. Measuring along the challenge basis yields
/// r' ~ N(sqrt(t) r, 1/2 + u).
struct HomodyneOptions {
    /// Replaces 1/2 + u as the outcome variance (0 gives noiseless outcomes).
    std::optional<double> noise_variance_override;
};

double homodyne(const ChallengeDraw& draw, Basis b, const ChannelParams& ch, Rng& rng, const HomodyneOptions& opt = {});

double honest_response(const ChallengeDraw& draw, const ChannelParams& ch, Rng& rng, const HomodyneOptions& opt = {});

} // namespace cvqpv
