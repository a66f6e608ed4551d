#include "cvqpv/security_bounds.hpp"

#include "cvqpv/gaussian_core.hpp"
#include "cvqpv/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cvqpv {

namespace {

void check_bound_args(double energy, double alpha, double eps_tilde) {
    if (!(energy > 0.0)) throw std::domain_error("continuity bound: energy must be positive");
    if (!(alpha > 0.0 && alpha <= 0.5)) throw std::domain_error("continuity bound: alpha must lie in (0, 1/2]");
    if (!(eps_tilde >= 0.0 && eps_tilde < 1.0)) throw std::domain_error("continuity bound: eps_tilde must lie in [0,1)");
}

} // namespace

double continuity_bracket(double energy, double alpha, double eps_tilde) {
    check_bound_args(energy, alpha, eps_tilde);
    const double ratio = (1.0 + alpha) / (1.0 - alpha);
    const double log_terms = std::log2(energy + 1.0) + std::numbers::log2e - std::log2(alpha * (1.0 - eps_tilde));
    return 2.0 * eps_tilde * log_terms + 6.0 * h_tilde(ratio * eps_tilde);
}

double winter_rhs(double energy, double alpha, double eps_tilde) {
    const double prefactor = (1.0 + alpha) / (1.0 - alpha) + 2.0 * alpha;
    return prefactor * continuity_bracket(energy, alpha, eps_tilde);
}

double condition_rhs(double energy, double alpha, double eps_tilde) {
    const double prefactor = (1.0 + alpha) / (2.0 * (1.0 - alpha)) + alpha;
    return prefactor * continuity_bracket(energy, alpha, eps_tilde);
}

double eps_cap(double t, double u) {
    if (!(t > 0.0)) throw std::domain_error("eps_cap: t must be positive");
    return 0.5 * std::log2(4.0 * t / (std::numbers::e * (1.0 + 2.0 * u)));
}

ConditionOutcome check_condition(const BoundInputs& b) {
    ConditionOutcome out;
    if (!(b.t > 0.0) || !feasible(ChannelParams(b.t, b.u))) {
        out.channel_infeasible = true;
        return out;
    }
    out.slack = eps_cap(b.t, b.u) - condition_rhs(b.energy, b.alpha, b.eps_tilde) - b.eps;
    out.holds = out.slack > 0.0;
    return out;
}

bool condition_holds(const BoundInputs& b) { return check_condition(b).holds; }

double max_eps_tilde_at(double eps, double energy, double t, double u, double alpha, double tol) {
    const double cap = eps_cap(t, u);
    if (!(eps < cap)) return 0.0;
    auto holds = [&](double et) { return eps < cap - condition_rhs(energy, alpha, et); };
    // the penalty vanishes as eps_tilde -> 0 and is increasing in eps_tilde
    double lo = 0.0;
    double hi = std::nextafter(1.0, 0.0);
    if (holds(hi)) return hi;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (holds(mid) ? lo : hi) = mid;
    }
    return lo;
}

BoundResult max_eps_tilde(double eps, double energy, double t, double u, const OptimizerConfig& cfg) {
    BoundResult best;
    if (!(t > 0.0) || !feasible(ChannelParams(t, u)) || !(eps < eps_cap(t, u))) return best;
    if (cfg.alpha_grid_points < 2 || !(cfg.alpha_min > 0.0 && cfg.alpha_min < cfg.alpha_max && cfg.alpha_max <= 0.5)) {
        throw std::invalid_argument("max_eps_tilde: bad optimizer configuration");
    }

    const std::size_t points = cfg.alpha_grid_points;
    const double log_lo = std::log(cfg.alpha_min);
    const double log_step = (std::log(cfg.alpha_max) - log_lo) / static_cast<double>(points - 1);
    std::vector<double> alphas(points);
    std::vector<double> values(points);
    for (std::size_t i = 0; i < points; ++i) {
        alphas[i] = i + 1 == points ? cfg.alpha_max : std::exp(log_lo + log_step * static_cast<double>(i));
    }
    parallel_for_index(points, cfg.threads, [&](std::size_t i) {
        values[i] = max_eps_tilde_at(eps, energy, t, u, alphas[i], cfg.eps_tilde_tol);
    });

    // first maximum wins ties, independent of the schedule
    const auto it = std::max_element(values.begin(), values.end());
    const std::size_t k = static_cast<std::size_t>(it - values.begin());
    double best_alpha = alphas[k];
    double best_value = values[k];
    if (best_value <= 0.0) return best;

    // golden-section refinement on the neighbouring grid cells
    auto f = [&](double a) { return max_eps_tilde_at(eps, energy, t, u, a, cfg.eps_tilde_tol); };
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = alphas[k == 0 ? 0 : k - 1];
    double b = alphas[std::min(k + 1, points - 1)];
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > cfg.alpha_tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    for (auto [alpha, value] : {std::pair{c, fc}, std::pair{d, fd}}) {
        if (value > best_value) {
            best_value = value;
            best_alpha = alpha;
        }
    }

    best.eps_tilde_max = best_value;
    best.alpha_star = best_alpha;
    best.feasible = true;
    best.rhs_at_opt = condition_rhs(energy, best_alpha, best_value);
    return best;
}

EnergySensitivity energy_sensitivity(double eps, double t, double u, const std::vector<double>& energies,
                                     const OptimizerConfig& cfg) {
    EnergySensitivity out;
    for (double e : energies) out.rows.push_back({e, max_eps_tilde(eps, e, t, u, cfg)});
    if (out.rows.empty()) return out;
    double lo = out.rows.front().result.eps_tilde_max;
    double hi = lo;
    for (std::size_t i = 0; i < out.rows.size(); ++i) {
        const double v = out.rows[i].result.eps_tilde_max;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        if (i > 0) {
            const auto& prev = out.rows[i - 1];
            if (out.rows[i].energy > prev.energy && !(v < prev.result.eps_tilde_max)) out.monotone_decreasing = false;
        }
    }
    out.relative_spread = hi > 0.0 ? (hi - lo) / hi : 0.0;
    return out;
}

std::vector<SurfacePoint> condition_surface(double eps, double energy, double t, double u,
                                            const std::vector<double>& alphas,
                                            const std::vector<double>& eps_tildes, unsigned threads) {
    const double cap = eps_cap(t, u);
    std::vector<SurfacePoint> grid(alphas.size() * eps_tildes.size());
    parallel_for_index(alphas.size(), threads, [&](std::size_t i) {
        for (std::size_t j = 0; j < eps_tildes.size(); ++j) {
            const double rhs = cap - condition_rhs(energy, alphas[i], eps_tildes[j]);
            grid[i * eps_tildes.size() + j] = {alphas[i], eps_tildes[j], rhs, eps < rhs};
        }
    });
    return grid;
}

} // namespace cvqpv
