#pragma once

// Size arithmetic for the delta-net / classical-rounding argument and the
// resulting attacker qubit budget. Nothing here builds an actual net; only
// cardinalities and the counting bound are evaluated.

#include <string>

namespace cvqpv {

/// Largest n accepted by the counting bound (2^(2n) must stay exactly
/// representable as a double scale factor).
inline constexpr unsigned kMaxCountingBits = 40;

/// Fraction of the supremum cbrt((2+et)/2) - 1 used as the net resolution,
/// keeping the open constraint strict.
inline constexpr double kDeltaShrink = 0.999;

/// log2 of the delta-net cardinality bound (1 + 2/delta)^n0.
double net_cardinality_log2(double delta, unsigned n0);

/// (1 + delta)^3 - 1 = 3 delta + 3 delta^2 + delta^3.
double net_approx_error(double delta);

/// Supremum of admissible delta: cbrt((2 + et)/2) - 1.
double delta_supremum(double eps_tilde);

/// kDeltaShrink * delta_supremum(eps_tilde).
double delta_from_eps_tilde(double eps_tilde);

/// log2(1 + 4 / (cbrt(4(2 + et)) - 2)); the rounding size is this factor
/// times 2^(2q + 2m0).
double rounding_size_logfactor(double eps_tilde);

struct RoundingSize {
    double factor;        // real log factor
    double factor_ceil;   // integer factor used in the counting bound
    double k_real_log2;   // log2(factor * 2^(2q+2m0))
    double k_int_log2;    // log2(factor_ceil * 2^(2q+2m0))
};

RoundingSize rounding_size(unsigned q, unsigned m0, double eps_tilde);

struct CountBound {
    double normalized; // log2 bound / 2^(2n)
    double raw;        // log2 bound
    bool secure;       // raw < -2^n
};

/// log2 of 2^((2^(n+1)+1)k) 2^(2^(2n) h(1/4)) 2^(-2^(2n)) with k built from
/// the ceiled log factor. Throws for n > kMaxCountingBits.
CountBound count_bound_log2(unsigned n, unsigned m0, unsigned q, double eps_tilde);

struct QubitBudget {
    int q_max = -1;             // largest q with a secure counting bound, -1 if none
    bool closed_form_regime = false; // n > 2(m0 + 5)
    int closed_form_q = -1;        // floor(n/2) - m0 - 5 when in regime
    std::string diagnostic;
};

QubitBudget q_max(unsigned n, unsigned m0, double eps_tilde);

struct ResourceReport {
    RoundingSize k;
    CountBound bound;
    QubitBudget budget;
    double cutoff_error_log2;
};

/// log2 of the honest-acceptance perturbation scale lambda^(2^m0); the
/// constant in front is not known, so this is a scale only.
double cutoff_soundness(unsigned m0, double sigma);

ResourceReport resource_report(unsigned n, unsigned m0, unsigned q, double eps_tilde, double sigma);

} // namespace cvqpv
