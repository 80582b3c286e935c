#include "lrace/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "lrace/errors.hpp"

namespace lrace {
namespace {

std::string format_bound_failure(const char* bound, double lhs, double rhs) {
    std::ostringstream oss;
    oss << "precondition " << bound << " failed (" << lhs << " vs " << rhs << ")";
    return oss.str();
}

std::optional<Deviation> find_deviation(StrategyPair pair, const ValueTable& f_a,
                                        const ValueTable& f_b, const GameParams& params,
                                        int t_max) {
    const double base_a = payoff_from_table(pair.t_a, pair.t_b, f_a, params).total;
    const double base_b = payoff_from_table(pair.t_b, pair.t_a, f_b, params).total;
    for (int t = 0; t <= t_max; ++t) {
        if (t != pair.t_a) {
            const double alt = payoff_from_table(t, pair.t_b, f_a, params).total;
            if (alt > base_a) {
                return Deviation{FirmLabel::A, pair, t, alt - base_a};
            }
        }
        if (t != pair.t_b) {
            const double alt = payoff_from_table(t, pair.t_a, f_b, params).total;
            if (alt > base_b) {
                return Deviation{FirmLabel::B, pair, t, alt - base_b};
            }
        }
    }
    return std::nullopt;
}

std::string describe_deviation(const Deviation& dev) {
    std::ostringstream oss;
    oss << "firm " << (dev.firm == FirmLabel::A ? 'A' : 'B') << " deviates from ("
        << dev.from.t_a << "," << dev.from.t_b << ") to t=" << dev.to << " gaining " << dev.gain;
    return oss.str();
}

}  // namespace

TwoFirmGame TwoFirmGame::make(const GameParams& params, const FirmConfig& a, const FirmConfig& b,
                              Mode mode) {
    params.validate();
    a.channel.validate();
    b.channel.validate();
    const int t_hi = params.t0 + 1;
    return TwoFirmGame{params, a, b, mode,
                       ValueTable(a.channel.snr, params, mode, t_hi),
                       ValueTable(b.channel.snr, params, mode, t_hi)};
}

int best_response(int t_other, const ValueTable& f, const GameParams& params) {
    if (t_other < 0) {
        throw std::domain_error("best_response: t_other must be >= 0");
    }
    const int m = std::min(t_other, params.t0);
    const double half = f.at(m) / 2.0;
    if (m == 0) {
        return (half >= params.c) ? 0 : 1;
    }
    const double prev = f.at(m - 1);
    if (half >= std::max(prev, params.c)) return m;
    if (prev >= std::max(params.c, half)) return m - 1;
    return m + 1;
}

int best_response(int t_other, const FirmConfig& self, const GameParams& params, Mode mode) {
    const ValueTable f(self.channel.snr, params, mode, params.t0);
    return best_response(t_other, f, params);
}

std::optional<Deviation> find_profitable_deviation(StrategyPair pair, const TwoFirmGame& game) {
    return find_deviation(pair, game.f_a, game.f_b, game.params, game.t_max());
}

EquilibriumReport classify_regime(const ValueTable& f, const GameParams& params) {
    if (f.t_hi() < params.t0 + 1) {
        throw std::domain_error("classify_regime: value table must extend through t0 + 1");
    }
    EquilibriumReport report;
    const double c = params.c;
    const double f0 = f.at(0);
    const double ft0 = f.at(params.t0);
    if (!(f0 < c)) {
        report.precondition_failed = true;
        report.reason = format_bound_failure("F(0) < c", f0, c);
        return report;
    }
    if (!(c < ft0)) {
        report.precondition_failed = true;
        report.reason = format_bound_failure("c < F(T0)", c, ft0);
        return report;
    }

    // First crossing of the transaction cost; unique under strict monotonicity.
    int ts = params.t0;
    for (int t = 1; t <= params.t0; ++t) {
        if (c < f.at(t)) {
            ts = t;
            break;
        }
    }
    const double f_prev = f.at(ts - 1);
    const double f_here = f.at(ts);
    const double f_next = f.at(ts + 1);
    report.crossing = ts;
    report.f_around = std::array<double, 3>{f_prev, f_here, f_next};
    report.tie_condition = f_here / 2.0 >= std::max(f_prev, c);
    report.tie_condition_above = f_next / 2.0 >= std::max(f_here, c);
    report.win_condition = c <= f_here && f_here <= 2.0 * c && f_next <= 2.0 * f_here &&
                           f_prev <= c;

    if (report.tie_condition) {
        report.regime = Regime::Tie;
        report.t_star = ts;
        report.equilibria = {StrategyPair{ts, ts}};
    } else if (report.tie_condition_above) {
        report.regime = Regime::Tie;
        report.t_star = ts + 1;
        report.equilibria = {StrategyPair{ts + 1, ts + 1}};
    } else if (report.win_condition) {
        report.regime = Regime::Win;
        report.t_star = ts;
        report.equilibria = {StrategyPair{ts, ts + 1}, StrategyPair{ts + 1, ts}};
    } else {
        report.reason = "no equilibrium condition set held at the crossing";
        return report;
    }

    for (const StrategyPair& pair : report.equilibria) {
        const auto dev = find_deviation(pair, f, f, params, params.t0 + 1);
        if (dev) {
            report.failing_deviation = dev;
            report.reason = "verification failed: " + describe_deviation(*dev);
            report.regime = Regime::None;
            report.t_star.reset();
            report.equilibria.clear();
            return report;
        }
    }
    report.verified = true;
    return report;
}

EquilibriumReport classify_regime(const GameParams& params, const FirmConfig& firm, Mode mode) {
    const ValueTable f(firm.channel.snr, params, mode, params.t0 + 1);
    return classify_regime(f, params);
}

DynamicsTrace run_dynamics(StrategyPair start, const TwoFirmGame& game, UpdateRule updates,
                           int max_steps) {
    if (max_steps < 1) {
        throw std::domain_error("run_dynamics: max_steps must be >= 1");
    }
    const int t_max = game.t_max();
    if (start.t_a < 0 || start.t_a > t_max || start.t_b < 0 || start.t_b > t_max) {
        throw std::domain_error("run_dynamics: start outside [0, t0 + 1]^2");
    }
    DynamicsTrace trace;
    trace.updates = updates;
    trace.path.push_back(start);

    const auto reply_a = [&](int tb) { return best_response(tb, game.f_a, game.params); };
    const auto reply_b = [&](int ta) { return best_response(ta, game.f_b, game.params); };
    // state key: pair id plus (for alternating play) whose turn is next
    const auto key = [&](StrategyPair p, int mover) {
        return static_cast<long long>(p.t_a * (t_max + 1) + p.t_b) * 2 + mover;
    };
    std::unordered_set<long long> seen;
    StrategyPair cur = start;

    if (updates == UpdateRule::Simultaneous) {
        seen.insert(key(cur, 0));
        for (int step = 0; step < max_steps; ++step) {
            const StrategyPair next{reply_a(cur.t_b), reply_b(cur.t_a)};
            if (next == cur) {
                trace.status = TraceStatus::Sink;
                return trace;
            }
            cur = next;
            trace.path.push_back(cur);
            if (!seen.insert(key(cur, 0)).second) {
                trace.status = TraceStatus::Cycle;
                return trace;
            }
        }
        throw budget_error("run_dynamics: step budget exhausted");
    }

    int mover = 0;  // 0 = A, 1 = B; A moves first
    seen.insert(key(cur, mover));
    for (int step = 0; step < max_steps; ++step) {
        if (reply_a(cur.t_b) == cur.t_a && reply_b(cur.t_a) == cur.t_b) {
            trace.status = TraceStatus::Sink;
            return trace;
        }
        StrategyPair next = cur;
        if (mover == 0) {
            next.t_a = reply_a(cur.t_b);
        } else {
            next.t_b = reply_b(cur.t_a);
        }
        mover = 1 - mover;
        if (next != cur) {
            cur = next;
            trace.path.push_back(cur);
            if (!seen.insert(key(cur, mover)).second) {
                trace.status = TraceStatus::Cycle;
                return trace;
            }
        }
    }
    throw budget_error("run_dynamics: step budget exhausted");
}

StateGraph build_state_graph(const TwoFirmGame& game) {
    const int t_max = game.t_max();
    if (t_max > 10000) {
        throw budget_error("build_state_graph: t_max exceeds 10^4");
    }
    const int n = t_max + 1;
    std::vector<int> reply_a(n), reply_b(n);
    for (int t = 0; t < n; ++t) {
        reply_a[t] = best_response(t, game.f_a, game.params);
        reply_b[t] = best_response(t, game.f_b, game.params);
    }

    StateGraph graph;
    graph.t_max = t_max;
    graph.out.assign(static_cast<std::size_t>(n) * n, {-1, -1});
    for (int ta = 0; ta < n; ++ta) {
        for (int tb = 0; tb < n; ++tb) {
            const int id = ta * n + tb;
            if (reply_a[tb] != ta) {
                graph.out[id][0] = reply_a[tb] * n + tb;
            }
            if (reply_b[ta] != tb) {
                graph.out[id][1] = ta * n + reply_b[ta];
            }
            if (graph.out[id][0] < 0 && graph.out[id][1] < 0) {
                graph.sinks.push_back({ta, tb});
            }
        }
    }
    return graph;
}

bool improving_subgraph_acyclic(const StateGraph& graph, const TwoFirmGame& game) {
    const int n = graph.node_count();
    // Strictly improving edges only: a best-response move can tie (e.g.
    // between two stay-out times) and tie moves are not descent steps.
    const auto improving_targets = [&](int id, std::array<int, 2>& targets) {
        const StrategyPair p = graph.pair_of(id);
        int count = 0;
        if (graph.out[id][0] >= 0) {
            const StrategyPair q = graph.pair_of(graph.out[id][0]);
            const double before = payoff_from_table(p.t_a, p.t_b, game.f_a, game.params).total;
            const double after = payoff_from_table(q.t_a, q.t_b, game.f_a, game.params).total;
            if (after > before) targets[count++] = graph.out[id][0];
        }
        if (graph.out[id][1] >= 0) {
            const StrategyPair q = graph.pair_of(graph.out[id][1]);
            const double before = payoff_from_table(p.t_b, p.t_a, game.f_b, game.params).total;
            const double after = payoff_from_table(q.t_b, q.t_a, game.f_b, game.params).total;
            if (after > before) targets[count++] = graph.out[id][1];
        }
        return count;
    };

    enum : unsigned char { White, Gray, Black };
    std::vector<unsigned char> color(static_cast<std::size_t>(n), White);
    std::vector<std::pair<int, int>> stack;  // node, next edge index to expand
    for (int root = 0; root < n; ++root) {
        if (color[root] != White) continue;
        color[root] = Gray;
        stack.emplace_back(root, 0);
        while (!stack.empty()) {
            auto& [id, edge] = stack.back();
            std::array<int, 2> targets{-1, -1};
            const int count = improving_targets(id, targets);
            if (edge >= count) {
                color[id] = Black;
                stack.pop_back();
                continue;
            }
            const int next = targets[edge++];
            if (color[next] == Gray) return false;
            if (color[next] == White) {
                color[next] = Gray;
                stack.emplace_back(next, 0);
            }
        }
    }
    return true;
}

EquilibriumReport asymmetric_equilibrium(const TwoFirmGame& game) {
    const GameParams& params = game.params;
    const auto check_firm = [&](const ValueTable& f, char name) {
        if (!(f.at(0) < params.c)) {
            throw precondition_error(std::string("asymmetric_equilibrium: firm ") + name +
                                     " fails F(0) < c");
        }
        if (!(params.c < f.at(params.t0))) {
            throw precondition_error(std::string("asymmetric_equilibrium: firm ") + name +
                                     " fails c < F(T0)");
        }
    };
    check_firm(game.f_a, 'A');
    check_firm(game.f_b, 'B');

    const double inv_a = firm_value_inverse(params.c, game.firm_a.channel.snr, params, game.mode);
    const double inv_b = firm_value_inverse(params.c, game.firm_b.channel.snr, params, game.mode);
    if (inv_a == inv_b) {
        throw precondition_error(
            "asymmetric_equilibrium: firms reach the transaction cost at the same time");
    }

    const bool a_weaker = inv_a > inv_b;  // weaker channel needs more time to reach value c
    const int k = static_cast<int>(std::floor(a_weaker ? inv_a : inv_b));
    EquilibriumReport report;
    report.t_star = k;
    const StrategyPair pair = a_weaker ? StrategyPair{k + 1, k} : StrategyPair{k, k + 1};
    report.equilibria = {pair};

    const auto dev = find_profitable_deviation(pair, game);
    if (dev) {
        report.regime = Regime::None;
        report.failing_deviation = dev;
        report.reason = "verification failed: " + describe_deviation(*dev);
        report.equilibria.clear();
        report.t_star.reset();
        return report;
    }
    report.regime = Regime::Asymmetric;
    report.verified = true;
    return report;
}

}  // namespace lrace
