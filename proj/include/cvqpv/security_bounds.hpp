#pragma once

// Energy-constrained continuity of conditional entropy and the separation
// condition built on it:
//
//   eps < 1/2 log(4t / (e(1+2u)))
//         - ((1+a)/(2(1-a)) + a) [2 et (log(E+1) + log(e/(a(1-et)))) + 6 h~((1+a)/(1-a) et)]
//
// with a = alpha and et = eps_tilde. All logarithms are base 2.

#include "cvqpv/channel_model.hpp"

#include <cstddef>
#include <vector>

namespace cvqpv {

struct BoundInputs {
    double eps = 0.0;
    double energy = 1e3;
    double t = 1.0;
    double u = 0.0;
    double alpha = 0.036;
    double eps_tilde = 0.0037;
};

struct BoundResult {
    double eps_tilde_max = 0.0;
    double alpha_star = 0.0;
    bool feasible = false;
    double rhs_at_opt = 0.0; // condition_rhs at (alpha_star, eps_tilde_max)
};

struct OptimizerConfig {
    std::size_t alpha_grid_points = 400; // log-spaced
    double alpha_min = 1e-4;
    double alpha_max = 0.5;
    double eps_tilde_tol = 1e-8; // bisection bracket width
    double alpha_tol = 1e-7;     // golden-section refinement
    unsigned threads = 1;        // alpha grid scan
};

/// Bracketed continuity term, shared by both prefactor conventions:
/// 2 et (log(E+1) + log(e/(a(1-et)))) + 6 h~((1+a)/(1-a) et).
double continuity_bracket(double energy, double alpha, double eps_tilde);

/// Full right-hand side of the continuity bound, prefactor (1+a)/(1-a) + 2a.
double winter_rhs(double energy, double alpha, double eps_tilde);

/// The penalty subtracted in the separation condition, prefactor
/// (1+a)/(2(1-a)) + a; exactly half of winter_rhs.
double condition_rhs(double energy, double alpha, double eps_tilde);

/// 1/2 log2(4t / (e(1+2u))); nonpositive iff the channel is infeasible.
double eps_cap(double t, double u);

struct ConditionOutcome {
    bool holds = false;
    bool channel_infeasible = false;
    double slack = 0.0; // eps_cap - condition_rhs - eps
};

ConditionOutcome check_condition(const BoundInputs& b);

bool condition_holds(const BoundInputs& b);

/// Largest eps_tilde in (0,1) satisfying the condition at this alpha,
/// 0 if none.
double max_eps_tilde_at(double eps, double energy, double t, double u, double alpha, double tol = 1e-8);

BoundResult max_eps_tilde(double eps, double energy, double t, double u, const OptimizerConfig& cfg = {});

struct EnergyRow {
    double energy;
    BoundResult result;
};

struct EnergySensitivity {
    std::vector<EnergyRow> rows;
    double relative_spread = 0.0; // (max - min) / max over rows' eps_tilde_max
    bool monotone_decreasing = true;
};

EnergySensitivity energy_sensitivity(double eps, double t, double u, const std::vector<double>& energies,
                                     const OptimizerConfig& cfg = {});

struct SurfacePoint {
    double alpha;
    double eps_tilde;
    double rhs;          // eps_cap - condition_rhs, the surface compared to eps
    bool holds;
};

/// (alpha, eps_tilde) grid of the separation condition's right-hand side.
std::vector<SurfacePoint> condition_surface(double eps, double energy, double t, double u,
                                            const std::vector<double>& alphas,
                                            const std::vector<double>& eps_tildes, unsigned threads = 1);

} // namespace cvqpv
