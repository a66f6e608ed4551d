#include "cvqpv/resource_calculus.hpp"

#include "cvqpv/gaussian_core.hpp"

#include <cmath>
#include <stdexcept>

namespace cvqpv {

namespace {

void check_eps_tilde(double eps_tilde) {
    if (!(eps_tilde > 0.0 && eps_tilde < 1.0)) throw std::domain_error("eps_tilde must lie in (0,1)");
}

} // namespace

double net_cardinality_log2(double delta, unsigned n0) {
    if (!(delta > 0.0)) throw std::domain_error("net_cardinality_log2: delta must be positive");
    return n0 * std::log2(1.0 + 2.0 / delta);
}

double net_approx_error(double delta) {
    if (!(delta >= 0.0)) throw std::domain_error("net_approx_error: delta must be nonnegative");
    return delta * (3.0 + delta * (3.0 + delta));
}

double delta_supremum(double eps_tilde) {
    check_eps_tilde(eps_tilde);
    return std::cbrt((2.0 + eps_tilde) / 2.0) - 1.0;
}

double delta_from_eps_tilde(double eps_tilde) { return kDeltaShrink * delta_supremum(eps_tilde); }

double rounding_size_logfactor(double eps_tilde) {
    check_eps_tilde(eps_tilde);
    if (!(net_approx_error(delta_from_eps_tilde(eps_tilde)) < eps_tilde / 2.0)) {
        throw std::logic_error("rounding_size_logfactor: net resolution violates the approximation constraint");
    }
    return std::log2(1.0 + 4.0 / (std::cbrt(4.0 * (2.0 + eps_tilde)) - 2.0));
}

RoundingSize rounding_size(unsigned q, unsigned m0, double eps_tilde) {
    const double factor = rounding_size_logfactor(eps_tilde);
    const double ceil = std::ceil(factor);
    const double exponent = 2.0 * q + 2.0 * m0;
    return {factor, ceil, exponent + std::log2(factor), exponent + std::log2(ceil)};
}

CountBound count_bound_log2(unsigned n, unsigned m0, unsigned q, double eps_tilde) {
    if (n == 0 || n > kMaxCountingBits) {
        throw std::domain_error("count_bound_log2: n must lie in [1, " + std::to_string(kMaxCountingBits) + "]");
    }
    const double factor = std::ceil(rounding_size_logfactor(eps_tilde));
    const int k_exp = 2 * static_cast<int>(q) + 2 * static_cast<int>(m0);
    const int n_int = static_cast<int>(n);
    // (2^(n+1) + 1) k / 2^(2n) with k = factor * 2^k_exp
    const double first = factor * (std::ldexp(1.0, k_exp + 1 - n_int) + std::ldexp(1.0, k_exp - 2 * n_int));
    const double normalized = first + binary_entropy(0.25) - 1.0;
    const double raw = std::ldexp(normalized, 2 * n_int);
    return {normalized, raw, normalized < -std::ldexp(1.0, -n_int)};
}

QubitBudget q_max(unsigned n, unsigned m0, double eps_tilde) {
    QubitBudget out;
    out.closed_form_regime = n > 2 * (m0 + 5);
    if (out.closed_form_regime) out.closed_form_q = static_cast<int>(n / 2) - static_cast<int>(m0) - 5;
    // bound is increasing in q; the first term alone exceeds 1 once 2q + 2m0 >= 2n
    for (unsigned q = 0; 2 * q + 2 * m0 <= 2 * n + 2; ++q) {
        if (!count_bound_log2(n, m0, q, eps_tilde).secure) break;
        out.q_max = static_cast<int>(q);
    }
    if (out.q_max < 0) {
        out.diagnostic = "no qubit budget: counting bound is not below -2^n even at q = 0";
    } else if (!out.closed_form_regime) {
        out.diagnostic = "n <= 2(m0 + 5): outside the closed-form regime q <= n/2 - m0 - 5";
    }
    if (out.closed_form_regime && eps_tilde >= 0.004 && out.closed_form_q > out.q_max) {
        throw std::logic_error("q_max: closed-form budget exceeds the numeric maximum");
    }
    return out;
}

double cutoff_soundness(unsigned m0, double sigma) {
    if (m0 == 0) throw std::domain_error("cutoff_soundness: m0 must be positive");
    lambda_of_sigma(sigma); // validates sigma
    // log2(lambda) = -1/2 log2(1 + 1/sigma^2), evaluated without forming lambda
    const double log2_lambda = -0.5 * std::log1p(1.0 / (sigma * sigma)) / std::log(2.0);
    return std::ldexp(log2_lambda, static_cast<int>(m0));
}

ResourceReport resource_report(unsigned n, unsigned m0, unsigned q, double eps_tilde, double sigma) {
    return {rounding_size(q, m0, eps_tilde), count_bound_log2(n, m0, q, eps_tilde), q_max(n, m0, eps_tilde),
            cutoff_soundness(m0, sigma)};
}

} // namespace cvqpv
