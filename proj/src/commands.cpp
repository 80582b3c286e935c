#include "lrace/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <thread>

#include "lrace/errors.hpp"
#include "lrace/payoff.hpp"
#include "lrace/render.hpp"
#include "lrace/simulate.hpp"

namespace lrace {
namespace {

const char* regime_name(Regime regime) {
    switch (regime) {
        case Regime::Tie: return "TIE";
        case Regime::Win: return "WIN";
        case Regime::Asymmetric: return "ASYMMETRIC";
        case Regime::None: return "NONE";
    }
    return "NONE";
}

const char* mode_name(Mode mode) { return mode == Mode::Exact ? "EXACT" : "APPROX"; }

FirmConfig resolve_firm(const FirmSpecConfig& spec, const GameParams& params, Mode mode,
                        FirmLabel label) {
    const double snr = spec.auto_snr ? optimal_power(params, spec.snr_max, mode) : spec.snr;
    return FirmConfig{ChannelSpec::make(snr, spec.snr_max, spec.noise_power, mode), label};
}

void write_pair_array(JsonWriter& w, const std::vector<StrategyPair>& pairs) {
    w.begin_array();
    for (const StrategyPair& p : pairs) {
        w.begin_array().value(p.t_a).value(p.t_b).end_array();
    }
    w.end_array();
}

void write_report(JsonWriter& w, const EquilibriumReport& report) {
    w.key("regime").value(std::string_view(regime_name(report.regime)));
    w.key("t_star");
    if (report.t_star) {
        w.value(*report.t_star);
    } else {
        w.null();
    }
    w.key("equilibria");
    write_pair_array(w, report.equilibria);
    w.key("verified").value(report.verified);
    if (report.crossing) {
        w.key("crossing").value(*report.crossing);
    }
    if (report.f_around) {
        w.key("f").begin_object();
        w.key("below_crossing").value((*report.f_around)[0]);
        w.key("at_crossing").value((*report.f_around)[1]);
        w.key("above_crossing").value((*report.f_around)[2]);
        w.end_object();
        w.key("conditions").begin_object();
        w.key("tie_at_crossing").value(report.tie_condition);
        w.key("tie_above_crossing").value(report.tie_condition_above);
        w.key("win_at_crossing").value(report.win_condition);
        w.end_object();
    }
    if (!report.reason.empty()) {
        w.key("reason").value(std::string_view(report.reason));
    }
    if (report.failing_deviation) {
        const Deviation& dev = *report.failing_deviation;
        w.key("failing_deviation").begin_object();
        w.key("firm").value(dev.firm == FirmLabel::A ? std::string_view("A")
                                                     : std::string_view("B"));
        w.key("from").begin_array().value(dev.from.t_a).value(dev.from.t_b).end_array();
        w.key("to").value(dev.to);
        w.key("gain").value(dev.gain);
        w.end_object();
    }
}

}  // namespace

ResolvedFirms resolve_firms(const RunConfig& cfg) {
    return ResolvedFirms{resolve_firm(cfg.firm_a, cfg.params, cfg.mode, FirmLabel::A),
                         resolve_firm(cfg.firm_b, cfg.params, cfg.mode, FirmLabel::B)};
}

std::string cmd_solve(const RunConfig& cfg) {
    const ResolvedFirms firms = resolve_firms(cfg);
    const TwoFirmGame game = TwoFirmGame::make(cfg.params, firms.a, firms.b, cfg.mode);

    EquilibriumReport report;
    if (game.symmetric()) {
        report = classify_regime(game.f_a, game.params);
        if (report.precondition_failed) {
            throw precondition_error("solve: " + report.reason);
        }
    } else {
        report = asymmetric_equilibrium(game);
    }

    std::string out;
    JsonWriter w(&out);
    w.begin_object();
    w.key("schema_version").value(kSchemaVersion);
    w.key("command").value(std::string_view("solve"));
    w.key("mode").value(std::string_view(mode_name(cfg.mode)));
    w.key("snr_a").value(game.firm_a.channel.snr);
    w.key("snr_b").value(game.firm_b.channel.snr);
    write_report(w, report);
    if (!report.equilibria.empty()) {
        w.key("payoffs").begin_array();
        for (const StrategyPair& p : report.equilibria) {
            w.begin_array()
                .value(payoff_from_table(p.t_a, p.t_b, game.f_a, game.params).total)
                .value(payoff_from_table(p.t_b, p.t_a, game.f_b, game.params).total)
                .end_array();
        }
        w.end_array();
    }
    w.end_object();
    out.push_back('\n');
    return out;
}

std::string cmd_sweep(const RunConfig& cfg, int jobs) {
    if (!cfg.sweep) {
        throw config_error("sweep: config has no 'sweep' section");
    }
    const SweepSpec& sweep = *cfg.sweep;

    const auto point_value = [&](int i) {
        const double span = sweep.to - sweep.from;
        double v = sweep.from + span * static_cast<double>(i) /
                                    static_cast<double>(sweep.steps - 1);
        if (sweep.axis == "t0") {
            v = std::max(1.0, std::round(v));
        }
        return v;
    };

    const auto compute_row = [&](int i) {
        const double v = point_value(i);
        RunConfig point = cfg;
        if (sweep.axis == "snr") {
            point.firm_a.auto_snr = false;
            point.firm_a.snr = v;
            point.firm_b.auto_snr = false;
            point.firm_b.snr = v;
        } else if (sweep.axis == "c") {
            point.params.c = v;
        } else if (sweep.axis == "d") {
            point.params.d = v;
        } else if (sweep.axis == "t0") {
            point.params.t0 = static_cast<int>(v);
        } else if (sweep.axis == "p1") {
            point.params.p1 = v;
            point.params.p2 = 1.0 - v;
        } else if (sweep.axis == "v1") {
            point.params.v1 = v;
        } else {
            point.params.v2 = v;
        }

        const ResolvedFirms firms = resolve_firms(point);
        const TwoFirmGame game = TwoFirmGame::make(point.params, firms.a, firms.b, point.mode);
        const EquilibriumReport report = classify_regime(game.f_a, game.params);

        std::string row;
        row += std::to_string(kSchemaVersion);
        row += ',';
        row += sweep.axis;
        row += ',';
        row += format_double(v);
        row += ',';
        row += regime_name(report.regime);
        row += ',';
        row += std::to_string(report.t_star ? *report.t_star : -1);
        row += ',';
        row += std::to_string(report.equilibria.size());
        row += ',';
        for (std::size_t k = 0; k < report.equilibria.size(); ++k) {
            if (k > 0) row += ';';
            row += std::to_string(report.equilibria[k].t_a);
            row += ':';
            row += std::to_string(report.equilibria[k].t_b);
        }
        row += ',';
        const double nan = std::numeric_limits<double>::quiet_NaN();
        row += format_double(report.t_star ? game.f_a.at(*report.t_star) : nan);
        row += ',';
        if (!report.equilibria.empty()) {
            const StrategyPair& eq = report.equilibria.front();
            row += format_double(payoff_from_table(eq.t_a, eq.t_b, game.f_a, game.params).total);
            row += ',';
            row += format_double(payoff_from_table(eq.t_b, eq.t_a, game.f_b, game.params).total);
        } else {
            row += format_double(nan);
            row += ',';
            row += format_double(nan);
        }
        row += '\n';
        return row;
    };

    std::vector<std::string> rows(static_cast<std::size_t>(sweep.steps));
    int workers = jobs > 0 ? jobs : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, sweep.steps);

    if (workers == 1) {
        for (int i = 0; i < sweep.steps; ++i) {
            rows[static_cast<std::size_t>(i)] = compute_row(i);
        }
    } else {
        std::atomic<int> next{0};
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int wi = 0; wi < workers; ++wi) {
            pool.emplace_back([&, wi] {
                try {
                    for (int i = next.fetch_add(1); i < sweep.steps; i = next.fetch_add(1)) {
                        rows[static_cast<std::size_t>(i)] = compute_row(i);
                    }
                } catch (...) {
                    errors[static_cast<std::size_t>(wi)] = std::current_exception();
                }
            });
        }
        for (std::thread& t : pool) t.join();
        for (const std::exception_ptr& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    std::string out =
        "schema_version,axis,value,regime,t_star,n_equilibria,equilibria,f_t_star,payoff_a,"
        "payoff_b\n";
    for (const std::string& row : rows) out += row;
    return out;
}

std::string cmd_dynamics(const RunConfig& cfg) {
    if (!cfg.dynamics) {
        throw config_error("dynamics: config has no 'dynamics' section");
    }
    const DynamicsSpec& dyn = *cfg.dynamics;
    const ResolvedFirms firms = resolve_firms(cfg);
    const TwoFirmGame game = TwoFirmGame::make(cfg.params, firms.a, firms.b, cfg.mode);
    const int budget = dyn.max_steps > 0 ? dyn.max_steps
                                         : (cfg.params.t0 + 2) * (cfg.params.t0 + 2);
    const DynamicsTrace trace = run_dynamics(dyn.start, game, dyn.updates, budget);

    std::string out;
    for (std::size_t i = 0; i < trace.path.size(); ++i) {
        const StrategyPair& p = trace.path[i];
        std::string_view mover = "";
        if (i > 0) {
            if (trace.updates == UpdateRule::Simultaneous) {
                mover = "AB";
            } else {
                mover = (trace.path[i].t_a != trace.path[i - 1].t_a) ? "A" : "B";
            }
        }
        JsonWriter w(&out);
        w.begin_object();
        w.key("schema_version").value(kSchemaVersion);
        w.key("step").value(static_cast<long long>(i));
        w.key("t_a").value(p.t_a);
        w.key("t_b").value(p.t_b);
        w.key("mover").value(mover);
        w.key("payoff_a").value(payoff_from_table(p.t_a, p.t_b, game.f_a, game.params).total);
        w.key("payoff_b").value(payoff_from_table(p.t_b, p.t_a, game.f_b, game.params).total);
        w.end_object();
        out.push_back('\n');
    }
    JsonWriter w(&out);
    w.begin_object();
    w.key("schema_version").value(kSchemaVersion);
    w.key("status").value(trace.status == TraceStatus::Sink ? std::string_view("SINK")
                                                            : std::string_view("CYCLE"));
    w.key("steps").value(static_cast<long long>(trace.path.size() - 1));
    w.end_object();
    out.push_back('\n');
    return out;
}

std::string cmd_simulate(const RunConfig& cfg) {
    if (!cfg.simulate) {
        throw config_error("simulate: config has no 'simulate' section");
    }
    const SimulateSpec& sim = *cfg.simulate;
    const ResolvedFirms firms = resolve_firms(cfg);
    const GameParams& params = cfg.params;

    const SimReport report = monte_carlo_game(sim.strategies, firms.a, firms.b, params, cfg.mode,
                                              sim.trials, RngStream(cfg.seed));

    const double analytic_a =
        expected_payoff(sim.strategies.t_a, sim.strategies.t_b, firms.a, params, cfg.mode).total;
    const double analytic_b =
        expected_payoff(sim.strategies.t_b, sim.strategies.t_a, firms.b, params, cfg.mode).total;
    const auto analytic_pe = [&](const FirmConfig& firm, int t) {
        const double h =
            (t == 0) ? 0.0 : optimal_threshold(t, firm.channel.snr, params, cfg.mode).threshold;
        return error_probabilities(static_cast<double>(t), firm.channel, h);
    };
    const ErrorPair pe_a = analytic_pe(firms.a, sim.strategies.t_a);
    const ErrorPair pe_b = analytic_pe(firms.b, sim.strategies.t_b);

    const auto z_mean = [](double empirical, double analytic, double se) {
        return se > 0.0 ? (empirical - analytic) / se
                        : std::numeric_limits<double>::quiet_NaN();
    };
    const auto z_binomial = [](double empirical, double p, long long trials) {
        if (trials <= 0) return std::numeric_limits<double>::quiet_NaN();
        const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
        return se > 0.0 ? (empirical - p) / se : std::numeric_limits<double>::quiet_NaN();
    };
    const long long n_sell = report.n_trials - report.n_buy;

    std::string out;
    JsonWriter w(&out);
    w.begin_object();
    w.key("schema_version").value(kSchemaVersion);
    w.key("command").value(std::string_view("simulate"));
    w.key("mode").value(std::string_view(mode_name(cfg.mode)));
    w.key("seed").value(cfg.seed);
    w.key("n_trials").value(report.n_trials);
    w.key("strategies").begin_array().value(sim.strategies.t_a).value(sim.strategies.t_b)
        .end_array();
    w.key("snr_a").value(firms.a.channel.snr);
    w.key("snr_b").value(firms.b.channel.snr);

    w.key("empirical").begin_object();
    w.key("payoff_a").begin_object();
    w.key("mean").value(report.payoff_a);
    w.key("se").value(report.payoff_a_se);
    w.end_object();
    w.key("payoff_b").begin_object();
    w.key("mean").value(report.payoff_b);
    w.key("se").value(report.payoff_b_se);
    w.end_object();
    w.key("win_a").value(report.win_a);
    w.key("win_b").value(report.win_b);
    w.key("tie").value(report.tie);
    w.key("n_buy").value(report.n_buy);
    w.key("pe1_a").value(report.pe1_a);
    w.key("pe2_a").value(report.pe2_a);
    w.key("pe1_b").value(report.pe1_b);
    w.key("pe2_b").value(report.pe2_b);
    w.end_object();

    w.key("analytic").begin_object();
    w.key("payoff_a").value(analytic_a);
    w.key("payoff_b").value(analytic_b);
    w.key("pe1_a").value(pe_a.pe1);
    w.key("pe2_a").value(pe_a.pe2);
    w.key("pe1_b").value(pe_b.pe1);
    w.key("pe2_b").value(pe_b.pe2);
    w.end_object();

    w.key("z_scores").begin_object();
    w.key("payoff_a").value(z_mean(report.payoff_a, analytic_a, report.payoff_a_se));
    w.key("payoff_b").value(z_mean(report.payoff_b, analytic_b, report.payoff_b_se));
    w.key("pe1_a").value(z_binomial(report.pe1_a, pe_a.pe1, report.n_buy));
    w.key("pe2_a").value(z_binomial(report.pe2_a, pe_a.pe2, n_sell));
    w.key("pe1_b").value(z_binomial(report.pe1_b, pe_b.pe1, report.n_buy));
    w.key("pe2_b").value(z_binomial(report.pe2_b, pe_b.pe2, n_sell));
    w.end_object();

    w.end_object();
    out.push_back('\n');
    return out;
}

int run_cli(const CliOptions& options, std::ostream& out, std::ostream& err) {
    try {
        const RunConfig cfg = load_run_config(options.config_path, options.overrides);
        std::string result;
        if (options.command == "solve") {
            result = cmd_solve(cfg);
        } else if (options.command == "sweep") {
            result = cmd_sweep(cfg, options.jobs);
        } else if (options.command == "dynamics") {
            result = cmd_dynamics(cfg);
        } else if (options.command == "simulate") {
            result = cmd_simulate(cfg);
        } else {
            err << "error: unknown command '" << options.command << "'\n";
            return 2;
        }
        if (!options.out_path.empty()) {
            std::ofstream file(options.out_path, std::ios::binary);
            if (!file) {
                err << "error: cannot open output file: " << options.out_path << "\n";
                return 1;
            }
            file << result;
        } else {
            out << result;
        }
        return 0;
    } catch (const config_error& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const precondition_error& e) {
        err << "precondition violated: " << e.what() << "\n";
        return 3;
    } catch (const budget_error& e) {
        err << "budget exhausted: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace lrace
