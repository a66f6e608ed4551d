// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include "cvqpv/attack_analysis.hpp"
#include "cvqpv/gaussian_core.hpp"
#include "cvqpv/protocol_engine.hpp"
#include "cvqpv/resource_calculus.hpp"
#include "cvqpv/security_bounds.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace cvqpv;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

unsigned worker_threads() { return std::max(1U, std::thread::hardware_concurrency()); }

struct Verdict {
    bool pass;
    std::string detail;
};

struct Criterion {
    int id;
    std::string title;
    std::function<Verdict()> check;
};

bool within_eps_tilde(double got, double want) { return std::abs(got - want) <= std::max(0.1 * want, 5e-5); }

struct Reference {
    double eps, t, u, alpha, eps_tilde;
};

Verdict check_reference(const Reference& r, std::string& detail) {
    const auto t0 = Clock::now();
    const BoundResult res = max_eps_tilde(r.eps, 1e3, r.t, r.u);
    const double secs = seconds_since(t0);
    const bool et_ok = res.feasible && within_eps_tilde(res.eps_tilde_max, r.eps_tilde);
    const bool alpha_ok = std::abs(res.alpha_star - r.alpha) <= 0.01;
    const bool time_ok = secs < 10.0;
    detail += fmt::format("(eps={}, t={}, u={}): eps_tilde {:.6f} vs {} [{}], alpha {:.4f} vs {} [{}], {:.2f}s; ", r.eps,
                          r.t, r.u, res.eps_tilde_max, r.eps_tilde, et_ok ? "ok" : "off", res.alpha_star, r.alpha,
                          alpha_ok ? "ok" : "off", secs);
    return {et_ok && alpha_ok && time_ok, ""};
}

Verdict criterion_table_rows() {
    const Reference rows[] = {
        {0.03, 0.8, 0.05, 0.013, 0.00031}, {0.03, 0.9, 0.12, 0.013, 0.00029}, {0.07, 0.95, 0.075, 0.025, 0.00131}};
    std::string detail;
    bool pass = true;
    for (const auto& r : rows) pass = check_reference(r, detail).pass && pass;
    return {pass, detail};
}

Verdict criterion_perfect_channel() {
    std::string detail;
    const bool pass = check_reference({0.1, 1.0, 0.0, 0.036, 0.0037}, detail).pass;
    return {pass, detail};
}

Verdict criterion_constants() {
    const double cap = eps_cap(1.0, 0.0);
    const double honest = h_U_given_P_limit(ChannelParams::ideal()).in_bits();
    const double attacker = attacker_entropy_floor(ChannelParams::ideal(), 0.1).in_bits();
    const bool pass = std::abs(cap - 0.278652) <= 1e-5 && std::abs(honest - 1.0471) <= 1e-4 &&
                      std::abs(attacker - 1.0721) <= 1e-4;
    return {pass, fmt::format("eps_cap {:.7f}, honest {:.6f} bits, attacker floor {:.6f} bits", cap, honest, attacker)};
}

Verdict criterion_rounding_factor() {
    const double f = rounding_size_logfactor(0.004);
    const RoundingSize k = rounding_size(5, 5, 0.004);
    const bool pass = f > 11.0 && f <= 12.0 && std::ceil(f) == 12.0 && k.factor_ceil == 12.0 &&
                      k.k_int_log2 == std::log2(12.0) + 20.0;
    return {pass, fmt::format("factor {:.6f}, ceiling {}, log2 k(q=5,m0=5) = {:.6f}", f, k.factor_ceil, k.k_int_log2)};
}

Verdict criterion_closed_form_scan() {
    const auto t0 = Clock::now();
    int cells = 0;
    int failures = 0;
    std::string first_failure;
    for (unsigned m0 = 1; m0 <= 10; ++m0) {
        for (unsigned n = 2 * (m0 + 5) + 1; n <= kMaxCountingBits; ++n) {
            const int q = static_cast<int>(n / 2) - static_cast<int>(m0) - 5;
            const CountBound b = count_bound_log2(n, m0, static_cast<unsigned>(q), 0.004);
            ++cells;
            if (!(b.raw < -std::exp2(static_cast<double>(n)))) {
                if (failures++ == 0) first_failure = fmt::format(" first failure n={} m0={}", n, m0);
            }
        }
    }
    const double secs = seconds_since(t0);
    return {failures == 0 && secs < 5.0,
            fmt::format("{} (n, m0) cells, {} insecure, {:.3f}s{}", cells, failures, secs, first_failure)};
}

Verdict criterion_energy_stability() {
    const EnergySensitivity s = energy_sensitivity(0.1, 1.0, 0.0, {1e1, 1e2, 1e3, 1e4});
    std::string values;
    for (const auto& r : s.rows) values += fmt::format("E={:g}: {:.6f}; ", r.energy, r.result.eps_tilde_max);
    const bool pass = s.relative_spread < 0.15 && s.monotone_decreasing;
    return {pass, fmt::format("{}spread {:.1f}% (limit 15%), monotone decreasing: {}", values,
                              100.0 * s.relative_spread, s.monotone_decreasing)};
}

// Independent oracle: mean photon number of the truncated thermal-like
// distribution, summed level by level.
double fock_sum_energy(double sigma, unsigned m0) {
    const long double lam_sq = static_cast<long double>(sigma) * sigma / (1.0L + static_cast<long double>(sigma) * sigma);
    long double num = 0.0L;
    long double den = 0.0L;
    long double w = 1.0L;
    const std::size_t levels = std::size_t{1} << m0;
    for (std::size_t m = 0; m < levels; ++m) {
        num += static_cast<long double>(m) * w;
        den += w;
        w *= lam_sq;
    }
    return static_cast<double>(num / den);
}

Verdict criterion_cutoff_energy() {
    double worst = 0.0;
    std::string worst_at;
    int points = 0;
    for (unsigned m0 = 1; m0 <= 12; ++m0) {
        for (double sigma : {0.05, 0.1, 0.3, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 7.5, 10.0}) {
            const CutoffParams c(m0, lambda_of_sigma(sigma));
            const double closed = cutoff_energy(c, sigma);
            const double oracle = fock_sum_energy(sigma, m0);
            const double rel = std::abs(closed - oracle) / oracle;
            ++points;
            if (rel > worst) {
                worst = rel;
                worst_at = fmt::format("m0={}, sigma={}", m0, sigma);
            }
        }
    }
    return {worst <= 1e-10, fmt::format("{} points, worst relative error {:.2e} at {}", points, worst, worst_at)};
}

Verdict criterion_monte_carlo() {
    const auto t0 = Clock::now();
    const double eps = 0.1;
    const double eps_hon = 0.01;
    const std::uint64_t seed = 20240101;
    const std::uint64_t sessions = 2000;
    const AttackBound plan = plan_attack(eps, 0.0, eps_hon, 100'000, derive_seed(seed, 3));

    ProtocolParams p;
    p.sigma = 10.0;
    p.n = 8;
    p.rounds = plan.N_required;
    p.eps_hon = eps_hon;
    const Protocol protocol(p, ChannelParams::ideal());
    const unsigned threads = worker_threads();
    const BatchSummary honest = run_batch(protocol, HonestResponder{}, sessions, derive_seed(seed, 1), threads);
    const PessimisticAttacker attacker(eps, EpsUnit::nats);
    const BatchSummary attack = run_batch(protocol, attacker, sessions, derive_seed(seed, 2), threads);
    const double secs = seconds_since(t0);

    const double honest_floor = 0.99 - 2.0 * std::sqrt(0.99 * 0.01 / static_cast<double>(sessions));
    const bool pass =
        honest.acceptance_rate() >= honest_floor && attack.acceptance_rate() <= 0.05 && secs < 60.0;
    return {pass, fmt::format("N = {}, honest {:.4f} (floor {:.4f}), attacker {:.4f} (limit 0.05), {:.1f}s on {} thread(s)",
                              plan.N_required, honest.acceptance_rate(), honest_floor, attack.acceptance_rate(), secs,
                              threads)};
}

Verdict criterion_fano_saturation() {
    ProtocolParams p;
    p.rounds = 1'000'000;
    const ChannelParams ch = ChannelParams::ideal();
    Rng rng = make_stream(9, 0);
    const SessionResult r = run_session(p, ch, HonestResponder{}, rng);
    // score = MSE / (1/2 + u) with u = 0
    const double mse = r.mean_score * ch.output_noise();
    return {std::abs(mse - 0.5) <= 0.005, fmt::format("empirical MSE {:.6f} over 1e6 rounds (target 0.5 +- 1%)", mse)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::pair<std::string, std::string>> read_tree(const fs::path& dir) {
    std::vector<std::pair<std::string, std::string>> files;
    for (const auto& e : fs::directory_iterator(dir)) files.emplace_back(e.path().filename().string(), slurp(e.path()));
    std::sort(files.begin(), files.end());
    return files;
}

Verdict criterion_determinism() {
    const auto root = fs::temp_directory_path() / "cvqpv_acceptance_determinism";
    fs::remove_all(root);
    const auto out = root / "out";
    const std::vector<std::string> runs = {
        "feasibility",
        "bounds",
        "resources --n 30 --m0 5",
        "rounds",
        "simulate --rounds 2000 --sessions 200 --trace",
        "sweep --sweep resources",
        "sweep --sweep rounds --variance-samples 10000",
        "sweep --sweep energy",
        "bounds --format json",
        "simulate --rounds 2000 --sessions 100 --format json",
    };
    int identical = 0;
    std::string failures;
    for (const auto& args : runs) {
        std::vector<std::vector<std::pair<std::string, std::string>>> trees;
        for (unsigned threads : {1U, 4U}) {
            fs::remove_all(out);
            const std::string cmd = fmt::format("{} {} --seed 77 --threads {} --out {} >/dev/null 2>&1",
                                                CVQPV_CLI_PATH, args, threads, out.string());
            const int status = std::system(cmd.c_str());
            if (status != 0) failures += fmt::format("[{}: exit status {}] ", args, status);
            trees.push_back(fs::exists(out) ? read_tree(out) : decltype(trees)::value_type{});
        }
        if (!trees[0].empty() && trees[0] == trees[1]) {
            ++identical;
        } else {
            failures += fmt::format("[{}: outputs differ] ", args);
        }
    }
    fs::remove_all(root);
    return {identical == static_cast<int>(runs.size()) && failures.empty(),
            fmt::format("{}/{} runs byte-identical between 1 and 4 threads {}", identical, runs.size(), failures)};
}

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "imperfect-channel table at E=1e3", criterion_table_rows},
        {2, "perfect-channel optimum", criterion_perfect_channel},
        {3, "entropy constants", criterion_constants},
        {4, "rounding factor at eps_tilde=0.004", criterion_rounding_factor},
        {5, "closed-form qubit budget scan", criterion_closed_form_scan},
        {6, "energy stability", criterion_energy_stability},
        {7, "cutoff energy vs Fock sums", criterion_cutoff_energy},
        {8, "Monte Carlo honest/attacker separation", criterion_monte_carlo},
        {9, "Fano saturation by the honest responder", criterion_fano_saturation},
        {10, "determinism across thread counts", criterion_determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Verdict v;
        try {
            v = c.check();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        if (!v.pass) ++failed;
        fmt::print("{} criterion {}: {} | {}\n", v.pass ? "PASS" : "FAIL", c.id, c.title, v.detail);
        std::fflush(stdout);
    }
    fmt::print("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
