#include "cvqpv/channel_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cvqpv {

ChannelParams::ChannelParams(double t, double u) : t_(t), u_(u) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("ChannelParams: t must lie in [0,1]");
    if (!(u >= 0.0) || !std::isfinite(u)) throw std::domain_error("ChannelParams: u must be finite and >= 0");
    sqrt_t_ = std::sqrt(t);
    noise_sd_ = std::sqrt(0.5 + u);
}

double feasibility_margin(const ChannelParams& ch) {
    return 4.0 * ch.t() - std::numbers::e * (1.0 + 2.0 * ch.u());
}

bool feasible(const ChannelParams& ch) { return feasibility_margin(ch) > 0.0; }

bool generic_attack_regime(const ChannelParams& ch) { return ch.t() <= 0.5; }

double basis_angle(Basis b) { return b == Basis::x_quadrature ? 0.0 : std::numbers::pi / 2; }

std::uint64_t draw_input(unsigned n, Rng& rng) {
    const std::uint64_t word = rng();
    return n >= 64 ? word : word & ((1ULL << n) - 1);
}

InputPair draw_inputs(unsigned n, Rng& rng) {
    if (2 * n > 64) {
        const std::uint64_t x = draw_input(n, rng);
        return {x, draw_input(n, rng)};
    }
    const std::uint64_t word = rng();
    const std::uint64_t mask = n == 32 ? ~0ULL >> 32 : (1ULL << n) - 1;
    return {word & mask, (word >> n) & mask};
}

ChallengeDraw sample_challenge(double sigma, const BooleanFunction& f, std::uint64_t x, std::uint64_t y, Rng& rng) {
    ChallengeDraw d;
    d.r = sigma * rng.normal();
    d.r_perp = sigma * rng.normal();
    d.x = x;
    d.y = y;
    d.basis = f(x, y) ? Basis::p_quadrature : Basis::x_quadrature;
    // (x0, p0) = (r cos th + r_perp sin th, r sin th - r_perp cos th) at th in {0, pi/2}
    if (d.basis == Basis::x_quadrature) {
        d.x0 = d.r;
        d.p0 = -d.r_perp;
    } else {
        d.x0 = d.r_perp;
        d.p0 = d.r;
    }
    return d;
}

double homodyne(const ChallengeDraw& draw, Basis b, const ChannelParams& ch, Rng& rng, const HomodyneOptions& opt) {
    const double quadrature_mean = b == Basis::x_quadrature ? draw.x0 : draw.p0;
    double sd = ch.output_noise_sd();
    if (opt.noise_variance_override) sd = std::sqrt(*opt.noise_variance_override);
    const double noise = sd > 0.0 ? sd * rng.normal() : 0.0;
    return ch.sqrt_t() * quadrature_mean + noise;
}

double honest_response(const ChallengeDraw& draw, const ChannelParams& ch, Rng& rng, const HomodyneOptions& opt) {
    return homodyne(draw, draw.basis, ch, rng, opt);
}

} // namespace cvqpv
