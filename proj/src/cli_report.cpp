#include "cvqpv/cli_report.hpp"

#include "cvqpv/parallel.hpp"
#include "cvqpv/resource_calculus.hpp"
#include "cvqpv/security_bounds.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace cvqpv::cli {

namespace {

// ---------------------------------------------------------------- settings

double parse_double(const std::string& s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw std::invalid_argument("expected a finite number, got '" + s + "'");
    }
    return v;
}

std::uint64_t parse_u64(const std::string& s) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw std::invalid_argument("expected a nonnegative integer, got '" + s + "'");
    }
    return v;
}

unsigned parse_unsigned(const std::string& s) {
    const std::uint64_t v = parse_u64(s);
    if (v > 1'000'000) throw std::invalid_argument("integer out of range: '" + s + "'");
    return static_cast<unsigned>(v);
}

bool parse_bool(const std::string& s) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw std::invalid_argument("expected true/false, got '" + s + "'");
}

Command parse_command(const std::string& s) {
    static const std::map<std::string, Command> names{
        {"feasibility", Command::feasibility}, {"bounds", Command::bounds}, {"resources", Command::resources},
        {"rounds", Command::rounds},           {"simulate", Command::simulate}, {"sweep", Command::sweep}};
    const auto it = names.find(s);
    if (it == names.end()) throw std::invalid_argument("unknown command '" + s + "'");
    return it->second;
}

OutputFormat parse_format(const std::string& s) {
    if (s == "csv") return OutputFormat::csv;
    if (s == "json") return OutputFormat::json;
    throw std::invalid_argument("expected csv or json, got '" + s + "'");
}

std::string fmt_double(double v) { return fmt::format("{}", v); }

struct SettingDef {
    std::string key;
    std::function<std::string(const RunConfig&)> get;
    std::function<void(RunConfig&, const std::string&)> set;
};

template <class T>
SettingDef number_setting(std::string key, T RunConfig::*member) {
    return {std::move(key),
            [member](const RunConfig& c) {
                if constexpr (std::is_same_v<T, double>) {
                    return fmt_double(c.*member);
                } else {
                    return std::to_string(c.*member);
                }
            },
            [member](RunConfig& c, const std::string& s) {
                if constexpr (std::is_same_v<T, double>) {
                    c.*member = parse_double(s);
                } else if constexpr (std::is_same_v<T, unsigned>) {
                    c.*member = parse_unsigned(s);
                } else {
                    c.*member = parse_u64(s);
                }
            }};
}

const std::vector<SettingDef>& setting_defs() {
    static const std::vector<SettingDef> defs = [] {
        std::vector<SettingDef> d;
        d.push_back({"command", [](const RunConfig& c) { return to_string(c.command); },
                     [](RunConfig& c, const std::string& s) { c.command = parse_command(s); }});
        d.push_back(number_setting("t", &RunConfig::t));
        d.push_back(number_setting("u", &RunConfig::u));
        d.push_back(number_setting("eps", &RunConfig::eps));
        d.push_back(number_setting("energy", &RunConfig::energy));
        d.push_back(number_setting("eps-tilde", &RunConfig::eps_tilde));
        d.push_back(number_setting("sigma", &RunConfig::sigma));
        d.push_back(number_setting("n", &RunConfig::n));
        d.push_back(number_setting("m0", &RunConfig::m0));
        d.push_back(number_setting("eps-hon", &RunConfig::eps_hon));
        d.push_back(number_setting("rounds", &RunConfig::rounds));
        d.push_back(number_setting("sessions", &RunConfig::sessions));
        d.push_back({"function", [](const RunConfig& c) { return c.function; },
                     [](RunConfig& c, const std::string& s) { c.function = FunctionSpec::parse(s).to_string(); }});
        d.push_back({"trace", [](const RunConfig& c) { return std::string(c.trace ? "true" : "false"); },
                     [](RunConfig& c, const std::string& s) { c.trace = parse_bool(s); }});
        d.push_back({"eps-unit", [](const RunConfig& c) { return to_string(c.eps_unit); },
                     [](RunConfig& c, const std::string& s) { c.eps_unit = parse_eps_unit(s); }});
        d.push_back(number_setting("variance-samples", &RunConfig::variance_samples));
        d.push_back(number_setting("u-min", &RunConfig::u_min));
        d.push_back(number_setting("u-max", &RunConfig::u_max));
        d.push_back(number_setting("u-steps", &RunConfig::u_steps));
        d.push_back(number_setting("t-min", &RunConfig::t_min));
        d.push_back(number_setting("t-max", &RunConfig::t_max));
        d.push_back(number_setting("t-steps", &RunConfig::t_steps));
        d.push_back(number_setting("alpha-min", &RunConfig::alpha_min));
        d.push_back(number_setting("alpha-max", &RunConfig::alpha_max));
        d.push_back(number_setting("alpha-steps", &RunConfig::alpha_steps));
        d.push_back(number_setting("eps-tilde-min", &RunConfig::eps_tilde_min));
        d.push_back(number_setting("eps-tilde-max", &RunConfig::eps_tilde_max));
        d.push_back(number_setting("eps-tilde-steps", &RunConfig::eps_tilde_steps));
        d.push_back({"sweep", [](const RunConfig& c) { return c.sweep; },
                     [](RunConfig& c, const std::string& s) {
                         if (s != "resources" && s != "rounds" && s != "energy") {
                             throw std::invalid_argument("expected resources, rounds or energy, got '" + s + "'");
                         }
                         c.sweep = s;
                     }});
        d.push_back(number_setting("seed", &RunConfig::seed));
        d.push_back({"out", [](const RunConfig& c) { return c.out.string(); },
                     [](RunConfig& c, const std::string& s) {
                         if (s.empty()) throw std::invalid_argument("output directory must not be empty");
                         c.out = s;
                     }});
        d.push_back({"format", [](const RunConfig& c) { return to_string(c.format); },
                     [](RunConfig& c, const std::string& s) { c.format = parse_format(s); }});
        return d;
    }();
    return defs;
}

void validate(const RunConfig& c, std::vector<std::string>& errors) {
    auto require = [&](bool ok, const std::string& msg) {
        if (!ok) errors.push_back(msg);
    };
    require(c.t >= 0.0 && c.t <= 1.0, "t: must lie in [0,1]");
    require(c.u >= 0.0, "u: must be >= 0");
    require(c.eps >= 0.0, "eps: must be >= 0");
    require(c.energy > 0.0, "energy: must be positive");
    require(c.eps_tilde >= 0.0 && c.eps_tilde < 1.0, "eps-tilde: must lie in [0,1) (0 selects the optimum)");
    require(c.sigma > 0.0, "sigma: must be positive");
    require(c.n >= 1 && c.n <= kMaxInputBits, "n: must lie in [1,64]");
    require(c.m0 >= 1, "m0: must be >= 1");
    require(c.eps_hon > 0.0 && c.eps_hon < 1.0, "eps-hon: must lie in (0,1)");
    require(c.sessions >= 1, "sessions: must be >= 1");
    require(c.variance_samples >= 10'000, "variance-samples: must be >= 10000");
    require(c.u_min >= 0.0 && c.u_min < c.u_max && c.u_steps >= 2, "u grid: need 0 <= u-min < u-max and u-steps >= 2");
    require(c.t_min >= 0.0 && c.t_min < c.t_max && c.t_max <= 1.0 && c.t_steps >= 2,
            "t grid: need 0 <= t-min < t-max <= 1 and t-steps >= 2");
    require(c.alpha_min > 0.0 && c.alpha_min < c.alpha_max && c.alpha_max <= 0.5 && c.alpha_steps >= 2,
            "alpha grid: need 0 < alpha-min < alpha-max <= 0.5 and alpha-steps >= 2");
    require(c.eps_tilde_min > 0.0 && c.eps_tilde_min < c.eps_tilde_max && c.eps_tilde_max < 1.0 &&
                c.eps_tilde_steps >= 2,
            "eps-tilde grid: need 0 < eps-tilde-min < eps-tilde-max < 1 and eps-tilde-steps >= 2");
    require(c.threads >= 1, "threads: must be >= 1");
}

// ---------------------------------------------------------------- helpers

std::vector<double> linspace(double lo, double hi, unsigned steps) {
    std::vector<double> v(steps);
    for (unsigned i = 0; i < steps; ++i) {
        v[i] = i + 1 == steps ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
    }
    return v;
}

struct TablePoint {
    double eps, t, u;
};

// (eps, t, u) rows analysed for imperfect channels
constexpr TablePoint kImperfectChannelPoints[] = {{0.03, 0.8, 0.05}, {0.03, 0.9, 0.12}, {0.07, 0.95, 0.075}};

OptimizerConfig optimizer_for(const RunConfig& cfg) {
    OptimizerConfig oc;
    oc.threads = cfg.threads;
    return oc;
}

double resolve_eps_tilde(const RunConfig& cfg, CommandOutcome& out) {
    if (cfg.eps_tilde > 0.0) return cfg.eps_tilde;
    const BoundResult br = max_eps_tilde(cfg.eps, cfg.energy, cfg.t, cfg.u, optimizer_for(cfg));
    if (br.feasible) {
        out.summary.push_back(fmt::format("eps_tilde taken from the optimum: {:.6g} (alpha = {:.4g})",
                                          br.eps_tilde_max, br.alpha_star));
    }
    return br.feasible ? br.eps_tilde_max : 0.0;
}

void add_regime_warnings(const ChannelParams& ch, CommandOutcome& out) {
    for (RegimeFlag f : regime_flags(ch)) out.warnings.push_back("channel regime: " + to_string(f));
}

// ---------------------------------------------------------------- commands

CommandOutcome cmd_feasibility(const RunConfig& cfg) {
    CommandOutcome out;
    FigureGrid grid;
    grid.axes = {{"u", linspace(cfg.u_min, cfg.u_max, cfg.u_steps)}, {"t", linspace(cfg.t_min, cfg.t_max, cfg.t_steps)}};
    grid.value_name = "margin";
    for (double u : grid.axes[0].values) {
        for (double t : grid.axes[1].values) grid.values.push_back(feasibility_margin(ChannelParams(t, u)));
    }
    Table t = grid.to_table("feasibility_grid");
    t.columns.push_back("feasible");
    for (auto& row : t.rows) row.push_back(std::get<double>(row.back()) > 0.0);
    out.tables.push_back(std::move(t));

    Table pts{"feasibility_points", {"label", "eps", "t", "u", "margin", "feasible"}, {}};
    int idx = 1;
    for (const auto& p : kImperfectChannelPoints) {
        const ChannelParams ch(p.t, p.u);
        pts.rows.push_back({fmt::format("table-row-{}", idx++), p.eps, p.t, p.u, feasibility_margin(ch), feasible(ch)});
    }
    const ChannelParams ch(cfg.t, cfg.u);
    pts.rows.push_back({std::string("configured"), cfg.eps, cfg.t, cfg.u, feasibility_margin(ch), feasible(ch)});
    out.tables.push_back(std::move(pts));

    out.summary.push_back(fmt::format("grid: {} x {} (u x t), margin = 4t - e(1+2u)", cfg.u_steps, cfg.t_steps));
    out.summary.push_back(fmt::format("configured channel t={} u={}: margin {:.6f} -> {}", cfg.t, cfg.u,
                                      feasibility_margin(ch), feasible(ch) ? "feasible" : "infeasible"));
    add_regime_warnings(ch, out);
    return out;
}

CommandOutcome cmd_bounds(const RunConfig& cfg) {
    CommandOutcome out;
    const OptimizerConfig oc = optimizer_for(cfg);
    const BoundResult br = max_eps_tilde(cfg.eps, cfg.energy, cfg.t, cfg.u, oc);
    const double cap = cfg.t > 0.0 ? eps_cap(cfg.t, cfg.u) : -INFINITY;

    out.tables.push_back(Table{"bounds_summary",
                               {"eps", "energy", "t", "u", "eps_cap", "feasible", "alpha_star", "eps_tilde_max",
                                "rhs_at_opt"},
                               {{cfg.eps, cfg.energy, cfg.t, cfg.u, cap, br.feasible, br.alpha_star,
                                 br.eps_tilde_max, br.rhs_at_opt}}});
    if (!br.feasible) {
        out.exit_code = 2;
        out.summary.push_back(fmt::format("no positive eps_tilde: eps = {} vs cap {:.6f} (t={}, u={})", cfg.eps, cap,
                                          cfg.t, cfg.u));
        return out;
    }
    out.summary.push_back(fmt::format("eps_cap = {:.6f}", cap));
    out.summary.push_back(
        fmt::format("max eps_tilde = {:.6g} at alpha = {:.6g} (E = {})", br.eps_tilde_max, br.alpha_star, cfg.energy));

    const auto alphas = linspace(cfg.alpha_min, cfg.alpha_max, cfg.alpha_steps);
    const auto eps_tildes = linspace(cfg.eps_tilde_min, cfg.eps_tilde_max, cfg.eps_tilde_steps);
    Table surface{"bounds_surface", {"alpha", "eps_tilde", "rhs", "holds"}, {}};
    for (const auto& p : condition_surface(cfg.eps, cfg.energy, cfg.t, cfg.u, alphas, eps_tildes, cfg.threads)) {
        surface.rows.push_back({p.alpha, p.eps_tilde, p.rhs, p.holds});
    }
    out.tables.push_back(std::move(surface));

    const EnergySensitivity es = energy_sensitivity(cfg.eps, cfg.t, cfg.u, {1e1, 1e2, 1e3, 1e4}, oc);
    Table energy{"bounds_energy", {"energy", "alpha_star", "eps_tilde_max"}, {}};
    for (const auto& row : es.rows) energy.rows.push_back({row.energy, row.result.alpha_star, row.result.eps_tilde_max});
    out.tables.push_back(std::move(energy));
    out.summary.push_back(fmt::format("energy sensitivity E=10..1e4: relative spread {:.3f}, monotone decreasing: {}",
                                      es.relative_spread, es.monotone_decreasing));
    return out;
}

CommandOutcome cmd_resources(const RunConfig& cfg) {
    CommandOutcome out;
    const double eps_tilde = resolve_eps_tilde(cfg, out);
    if (!(eps_tilde > 0.0)) {
        out.exit_code = 2;
        out.summary.push_back("no positive eps_tilde for these (eps, E, t, u); no resource bound applies");
        out.tables.push_back(Table{"resources", {"n", "m0", "eps_tilde", "status"},
                                   {{std::uint64_t{cfg.n}, std::uint64_t{cfg.m0}, 0.0, std::string("infeasible")}}});
        return out;
    }
    const QubitBudget budget = q_max(cfg.n, cfg.m0, eps_tilde);
    const unsigned q_eval = budget.q_max >= 0 ? static_cast<unsigned>(budget.q_max) : 0;
    const ResourceReport rep = resource_report(cfg.n, cfg.m0, q_eval, eps_tilde, cfg.sigma);

    out.tables.push_back(Table{
        "resources",
        {"n", "m0", "eps_tilde", "k_factor", "k_factor_ceil", "q_max", "closed_form_regime", "closed_form_q", "q_evaluated",
         "k_log2", "count_bound_normalized", "count_bound_log2", "secure", "sigma", "cutoff_error_log2"},
        {{std::uint64_t{cfg.n}, std::uint64_t{cfg.m0}, eps_tilde, rep.k.factor, rep.k.factor_ceil,
          std::int64_t{budget.q_max}, budget.closed_form_regime, std::int64_t{budget.closed_form_q},
          std::uint64_t{q_eval}, rep.k.k_int_log2, rep.bound.normalized, rep.bound.raw, rep.bound.secure, cfg.sigma,
          rep.cutoff_error_log2}}});

    out.summary.push_back(fmt::format("k = {:.4f} (ceil {}) x 2^(2q+2m0)", rep.k.factor, rep.k.factor_ceil));
    out.summary.push_back(fmt::format("q_max = {} (n = {}, m0 = {})", budget.q_max, cfg.n, cfg.m0));
    if (budget.closed_form_regime) {
        out.summary.push_back(fmt::format("closed form: q <= floor(n/2) - m0 - 5 = {}", budget.closed_form_q));
    }
    out.summary.push_back(
        fmt::format("cutoff error scale: 2^{:.4g} (sigma = {}, m0 = {})", rep.cutoff_error_log2, cfg.sigma, cfg.m0));
    if (!budget.closed_form_regime) {
        out.warnings.push_back(fmt::format("n = {} <= 2(m0+5) = {}: outside the closed-form regime", cfg.n,
                                           2 * (cfg.m0 + 5)));
    }
    if (budget.q_max < 0) {
        out.exit_code = 2;
        out.summary.push_back(budget.diagnostic);
    }
    return out;
}

Table rounds_table() {
    return Table{"rounds",
                 {"eps", "u", "eps_hon", "eps_unit", "mse_floor", "score_variance_est", "score_variance_exact", "N",
                  "gamma", "delta", "status"},
                 {}};
}

std::vector<Cell> rounds_row(double eps, double u, double eps_hon, EpsUnit unit, std::uint64_t samples,
                             std::uint64_t seed, bool& no_margin) {
    const double floor = fano_mse_floor(eps, unit);
    const double exact = score_variance_exact(floor, u);
    Rng rng = make_stream(seed, 0);
    const double est = score_variance_estimate(eps, u, samples, rng, unit);
    try {
        const RoundPlan plan = rounds_required(eps, u, eps_hon, est, unit);
        no_margin = false;
        return {eps, u, eps_hon, to_string(unit), floor, est, exact, plan.rounds, plan.gamma, plan.delta,
                std::string("ok")};
    } catch (const NoMarginError&) {
        no_margin = true;
        return {eps, u, eps_hon, to_string(unit), floor, est, exact, std::uint64_t{0}, 0.0,
                delta_margin(eps, u, 1.0, unit), std::string("no-margin")};
    }
}

constexpr std::uint64_t kTagHonest = 1;
constexpr std::uint64_t kTagAttacker = 2;
constexpr std::uint64_t kTagVariance = 3;

CommandOutcome cmd_rounds(const RunConfig& cfg) {
    CommandOutcome out;
    bool no_margin = false;
    Table t = rounds_table();
    t.rows.push_back(rounds_row(cfg.eps, cfg.u, cfg.eps_hon, cfg.eps_unit, cfg.variance_samples,
                                derive_seed(cfg.seed, kTagVariance), no_margin));
    const auto& row = t.rows.back();
    if (no_margin) {
        out.exit_code = 2;
        out.summary.push_back(fmt::format("no margin: Delta <= 0 for every N (eps = {}, u = {}, unit = {})", cfg.eps,
                                          cfg.u, to_string(cfg.eps_unit)));
    } else {
        out.summary.push_back(fmt::format("N = {}, gamma(N) = {:.6f}, Delta(N) = {:.6f}, score variance ~ {:.4f}",
                                          std::get<std::uint64_t>(row[7]), std::get<double>(row[8]),
                                          std::get<double>(row[9]), std::get<double>(row[5])));
    }
    out.tables.push_back(std::move(t));
    return out;
}

CommandOutcome cmd_simulate(const RunConfig& cfg) {
    CommandOutcome out;
    const ChannelParams ch(cfg.t, cfg.u);
    add_regime_warnings(ch, out);

    std::uint64_t rounds = cfg.rounds;
    if (rounds == 0) {
        bool no_margin = false;
        const auto row = rounds_row(cfg.eps, cfg.u, cfg.eps_hon, cfg.eps_unit, cfg.variance_samples,
                                    derive_seed(cfg.seed, kTagVariance), no_margin);
        if (no_margin) {
            out.exit_code = 2;
            out.summary.push_back("no margin: cannot plan a round count; pass --rounds explicitly");
            Table t = rounds_table();
            t.rows.push_back(row);
            out.tables.push_back(std::move(t));
            return out;
        }
        rounds = std::get<std::uint64_t>(row[7]);
        out.summary.push_back(fmt::format("planned rounds N = {}", rounds));
    }

    ProtocolParams p;
    p.sigma = cfg.sigma;
    p.n = cfg.n;
    p.rounds = rounds;
    p.eps_hon = cfg.eps_hon;
    p.f_spec = FunctionSpec::parse(cfg.function);
    const Protocol protocol(p, ch);

    const HonestResponder honest;
    const PessimisticAttacker attacker(cfg.eps, cfg.eps_unit);
    struct Batch {
        std::string label;
        const Responder* responder;
        std::uint64_t seed;
    };
    const Batch batches[] = {{"honest", &honest, derive_seed(cfg.seed, kTagHonest)},
                             {"attacker", &attacker, derive_seed(cfg.seed, kTagAttacker)}};

    Table summary{"simulate_summary",
                  {"batch", "sessions", "accepted", "acceptance_rate", "rounds", "gamma", "mean_score_avg"},
                  {}};
    Table sessions{"simulate_sessions", {"batch", "index", "mean_score", "accepted"}, {}};
    Table trace{"simulate_trace", {"batch", "index", "theta", "r", "r_prime", "score_term", "timing_ok"}, {}};
    for (const auto& b : batches) {
        const BatchSummary s = run_batch(protocol, *b.responder, cfg.sessions, b.seed, cfg.threads);
        double score_sum = 0.0;
        for (std::size_t i = 0; i < s.sessions.size(); ++i) {
            score_sum += s.sessions[i].mean_score;
            sessions.rows.push_back({b.label, std::uint64_t{i}, s.sessions[i].mean_score, s.sessions[i].accepted});
        }
        summary.rows.push_back({b.label, cfg.sessions, s.accepted, s.acceptance_rate(), rounds, protocol.gamma(),
                                score_sum / static_cast<double>(s.sessions.size())});
        out.summary.push_back(fmt::format("{:>8}: accepted {}/{} sessions (rate {:.4f})", b.label, s.accepted,
                                          cfg.sessions, s.acceptance_rate()));
        if (cfg.trace) {
            // session 0 replayed with the same stream as in the batch
            Rng rng = make_stream(b.seed, 0);
            const SessionResult r = protocol.run_session(*b.responder, rng, true);
            for (const auto& rec : r.records) {
                trace.rows.push_back({b.label, rec.index, rec.theta, rec.r, rec.r_prime, rec.score_term, rec.timing_ok});
            }
        }
    }
    out.summary.push_back(fmt::format("gamma(N = {}, eps_hon = {}) = {:.6f}", rounds, cfg.eps_hon, protocol.gamma()));
    out.tables.push_back(std::move(summary));
    out.tables.push_back(std::move(sessions));
    if (cfg.trace) out.tables.push_back(std::move(trace));
    return out;
}

CommandOutcome cmd_sweep(const RunConfig& cfg) {
    CommandOutcome out;
    if (cfg.sweep == "resources") {
        const double eps_tilde = resolve_eps_tilde(cfg, out);
        if (!(eps_tilde > 0.0)) {
            out.exit_code = 2;
            out.summary.push_back("no positive eps_tilde for these (eps, E, t, u)");
            return out;
        }
        struct Cellp {
            unsigned n, m0;
        };
        std::vector<Cellp> cells;
        for (unsigned m0 = 1; m0 <= 10; ++m0) {
            for (unsigned n = 12; n <= kMaxCountingBits; ++n) cells.push_back({n, m0});
        }
        std::vector<std::vector<Cell>> rows(cells.size());
        parallel_for_index(cells.size(), cfg.threads, [&](std::size_t i) {
            const auto [n, m0] = cells[i];
            const QubitBudget b = q_max(n, m0, eps_tilde);
            const RoundingSize k = rounding_size(0, m0, eps_tilde);
            rows[i] = {std::uint64_t{n}, std::uint64_t{m0}, eps_tilde, k.factor, k.factor_ceil,
                       std::int64_t{b.q_max}, b.closed_form_regime, std::int64_t{b.closed_form_q}};
        });
        out.tables.push_back(Table{"sweep_resources",
                                   {"n", "m0", "eps_tilde", "k_factor", "k_factor_ceil", "q_max", "closed_form_regime",
                                    "closed_form_q"},
                                   std::move(rows)});
        out.summary.push_back(fmt::format("resource sweep: {} (n, m0) cells at eps_tilde = {:.6g}", cells.size(),
                                          eps_tilde));
    } else if (cfg.sweep == "rounds") {
        struct Cellp {
            double eps, u, eps_hon;
        };
        std::vector<Cellp> cells;
        for (double eps : {0.05, 0.1, 0.15, 0.2, 0.25}) {
            for (double u : {0.0, 0.025, 0.05}) {
                for (double eh : {1e-2, 1e-3, 1e-4}) cells.push_back({eps, u, eh});
            }
        }
        std::vector<std::vector<Cell>> rows(cells.size());
        parallel_for_index(cells.size(), cfg.threads, [&](std::size_t i) {
            bool no_margin = false;
            rows[i] = rounds_row(cells[i].eps, cells[i].u, cells[i].eps_hon, cfg.eps_unit, cfg.variance_samples,
                                 derive_seed(cfg.seed, kTagVariance + 1 + i), no_margin);
        });
        Table t = rounds_table();
        t.name = "sweep_rounds";
        t.rows = std::move(rows);
        out.tables.push_back(std::move(t));
        out.summary.push_back(fmt::format("round-planning sweep: {} (eps, u, eps_hon) cells", cells.size()));
    } else {
        const EnergySensitivity es =
            energy_sensitivity(cfg.eps, cfg.t, cfg.u, {1e1, 1e2, 1e3, 1e4, 1e5}, optimizer_for(cfg));
        Table t{"sweep_energy", {"energy", "alpha_star", "eps_tilde_max", "feasible"}, {}};
        for (const auto& r : es.rows) {
            t.rows.push_back({r.energy, r.result.alpha_star, r.result.eps_tilde_max, r.result.feasible});
        }
        out.tables.push_back(std::move(t));
        out.summary.push_back(fmt::format("energy sweep: relative spread {:.3f}, monotone decreasing: {}",
                                          es.relative_spread, es.monotone_decreasing));
    }
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    os << content;
    if (!os) throw std::runtime_error("failed writing " + path.string());
}

nlohmann::ordered_json cell_json(const Cell& c) {
    return std::visit([](const auto& v) { return nlohmann::ordered_json(v); }, c);
}

} // namespace

// ---------------------------------------------------------------- public

std::string to_string(Command c) {
    switch (c) {
    case Command::feasibility:
        return "feasibility";
    case Command::bounds:
        return "bounds";
    case Command::resources:
        return "resources";
    case Command::rounds:
        return "rounds";
    case Command::simulate:
        return "simulate";
    case Command::sweep:
        return "sweep";
    }
    return "unknown";
}

std::string to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

Settings parse_config_text(const std::string& text) {
    Settings s;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto trim = [](std::string v) {
        const auto b = v.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        const auto e = v.find_last_not_of(" \t\r");
        return v.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument(fmt::format("config line {}: expected 'key = value'", lineno));
        }
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw std::invalid_argument(fmt::format("config line {}: empty key", lineno));
        s[key] = trim(line.substr(eq + 1));
    }
    return s;
}

const std::vector<std::string>& setting_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& d : setting_defs()) k.push_back(d.key);
        return k;
    }();
    return keys;
}

RunConfig resolve_config(const Settings& settings, std::vector<std::string>& errors) {
    RunConfig cfg;
    for (const auto& [key, value] : settings) {
        const auto& defs = setting_defs();
        const auto it = std::find_if(defs.begin(), defs.end(), [&](const SettingDef& d) { return d.key == key; });
        if (it == defs.end()) {
            errors.push_back(key + ": unknown setting");
            continue;
        }
        try {
            it->set(cfg, value);
        } catch (const std::exception& e) {
            errors.push_back(key + ": " + e.what());
        }
    }
    validate(cfg, errors);
    return cfg;
}

std::string to_config_text(const RunConfig& cfg) {
    std::string s = fmt::format("# cvqpv {} resolved configuration\n", kVersion);
    for (const auto& d : setting_defs()) s += d.key + " = " + d.get(cfg) + "\n";
    return s;
}

Table FigureGrid::to_table(std::string name) const {
    std::size_t expected = axes.empty() ? 0 : 1;
    for (const auto& a : axes) expected *= a.values.size();
    if (expected != values.size()) {
        throw std::logic_error("FigureGrid: " + std::to_string(values.size()) + " values for " +
                               std::to_string(expected) + " grid points");
    }
    Table t{std::move(name), {}, {}};
    for (const auto& a : axes) t.columns.push_back(a.name);
    t.columns.push_back(value_name);
    std::vector<std::size_t> idx(axes.size(), 0);
    for (double v : values) {
        std::vector<Cell> row;
        for (std::size_t k = 0; k < axes.size(); ++k) row.emplace_back(axes[k].values[idx[k]]);
        row.emplace_back(v);
        t.rows.push_back(std::move(row));
        // row-major: last axis fastest
        for (std::size_t k = axes.size(); k-- > 0;) {
            if (++idx[k] < axes[k].values.size()) break;
            idx[k] = 0;
        }
    }
    return t;
}

std::string format_cell(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, bool>) {
                return v ? "true" : "false";
            } else if constexpr (std::is_same_v<T, std::string>) {
                return v;
            } else {
                return fmt::format("{}", v);
            }
        },
        c);
}

std::string to_csv(const Table& t) {
    auto field = [](const std::string& v) {
        if (v.find_first_of(",\"\r\n") == std::string::npos) return v;
        std::string q = "\"";
        for (char ch : v) {
            if (ch == '"') q += '"';
            q += ch;
        }
        return q + "\"";
    };
    std::string s;
    for (std::size_t i = 0; i < t.columns.size(); ++i) s += (i ? "," : "") + field(t.columns[i]);
    s += "\r\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + field(format_cell(row[i]));
        s += "\r\n";
    }
    return s;
}

std::string render_json(const RunConfig& cfg, const CommandOutcome& outcome) {
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["tool"] = "cvqpv";
    j["version"] = kVersion;
    j["command"] = to_string(cfg.command);
    nlohmann::ordered_json config;
    for (const auto& d : setting_defs()) config[d.key] = d.get(cfg);
    j["config"] = config;
    j["seed"] = cfg.seed;
    j["exit_code"] = outcome.exit_code;
    j["summary"] = outcome.summary;
    j["warnings"] = outcome.warnings;
    nlohmann::ordered_json tables = nlohmann::ordered_json::object();
    for (const auto& t : outcome.tables) {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& row : t.rows) {
            nlohmann::ordered_json r = nlohmann::ordered_json::array();
            for (const auto& c : row) r.push_back(cell_json(c));
            rows.push_back(std::move(r));
        }
        tables[t.name] = {{"columns", t.columns}, {"rows", std::move(rows)}};
    }
    j["tables"] = std::move(tables);
    return j.dump(2) + "\n";
}

CommandOutcome run_command(const RunConfig& cfg) {
    switch (cfg.command) {
    case Command::feasibility:
        return cmd_feasibility(cfg);
    case Command::bounds:
        return cmd_bounds(cfg);
    case Command::resources:
        return cmd_resources(cfg);
    case Command::rounds:
        return cmd_rounds(cfg);
    case Command::simulate:
        return cmd_simulate(cfg);
    case Command::sweep:
        return cmd_sweep(cfg);
    }
    throw std::logic_error("unhandled command");
}

std::vector<std::filesystem::path> write_outputs(const RunConfig& cfg, const CommandOutcome& outcome) {
    std::filesystem::create_directories(cfg.out);
    std::vector<std::filesystem::path> written;
    const std::string stem = to_string(cfg.command);
    const auto cfg_path = cfg.out / (stem + ".cfg");
    write_file(cfg_path, to_config_text(cfg));
    written.push_back(cfg_path);
    if (cfg.format == OutputFormat::json) {
        const auto path = cfg.out / (stem + ".json");
        write_file(path, render_json(cfg, outcome));
        written.push_back(path);
    } else {
        for (const auto& t : outcome.tables) {
            const auto path = cfg.out / (t.name + ".csv");
            write_file(path, to_csv(t));
            written.push_back(path);
        }
    }
    return written;
}

int main_entry(int argc, char** argv) {
    CLI::App app{"Continuous-variable position-verification simulator and security-bound calculator"};
    app.set_version_flag("--version", std::string("cvqpv ") + kVersion);
    std::string command;
    app.add_option("command", command, "feasibility | bounds | resources | rounds | simulate | sweep")->required();
    std::string config_path;
    app.add_option("--config", config_path, "flat key = value config file (flags override it)");
    unsigned threads = 1;
    app.add_option("--threads", threads, "worker threads (does not affect results)")->check(CLI::PositiveNumber);
    bool trace = false;
    auto* trace_flag = app.add_flag("--trace", trace, "emit per-round traces (simulate)");

    std::map<std::string, std::string> flag_values;
    std::map<std::string, CLI::Option*> flag_opts;
    for (const auto& key : setting_keys()) {
        if (key == "command" || key == "trace") continue;
        flag_opts[key] = app.add_option("--" + key, flag_values[key]);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    std::vector<std::string> errors;
    Settings settings;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            errors.push_back("config: cannot read '" + config_path + "'");
        } else {
            std::stringstream ss;
            ss << in.rdbuf();
            try {
                settings = parse_config_text(ss.str());
            } catch (const std::exception& e) {
                errors.push_back(std::string("config: ") + e.what());
            }
        }
    }
    settings["command"] = command;
    for (const auto& [key, opt] : flag_opts) {
        if (opt->count() > 0) settings[key] = flag_values[key];
    }
    if (trace_flag->count() > 0) settings["trace"] = trace ? "true" : "false";

    RunConfig cfg = resolve_config(settings, errors);
    cfg.threads = threads;
    if (!errors.empty()) {
        std::cerr << "invalid configuration:\n";
        for (const auto& e : errors) std::cerr << "  - " << e << "\n";
        return 1;
    }

    try {
        const CommandOutcome outcome = run_command(cfg);
        for (const auto& line : outcome.summary) std::cout << line << "\n";
        for (const auto& w : outcome.warnings) std::cerr << "warning: " << w << "\n";
        for (const auto& p : write_outputs(cfg, outcome)) std::cout << "wrote " << p.string() << "\n";
        return outcome.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace cvqpv::cli
