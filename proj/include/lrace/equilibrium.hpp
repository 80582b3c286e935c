#pragma once

#include <array>
#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "lrace/decoder.hpp"
#include "lrace/payoff.hpp"

namespace lrace {

/// A pure-strategy profile: both decision times. Strategies are capped at
/// t_max = t0 + 1, the canonical non-compete representative (every slower
/// time yields the same payoff, -d*S).
struct StrategyPair {
    int t_a = 0;
    int t_b = 0;
    auto operator<=>(const StrategyPair&) const = default;
};

enum class Regime { Tie, Win, Asymmetric, None };

enum class UpdateRule { Alternating, Simultaneous };

enum class TraceStatus { Sink, Cycle };

/// A strictly profitable unilateral move found by the verification scan.
struct Deviation {
    FirmLabel firm = FirmLabel::A;
    StrategyPair from;
    int to = 0;
    double gain = 0.0;
};

/// Classified equilibrium set plus the evidence behind the call. Reports
/// with regime != None always carry verified = true: every emitted
/// equilibrium has survived the exhaustive unilateral-deviation check,
/// which is the definition-level Nash test.
struct EquilibriumReport {
    Regime regime = Regime::None;
    std::optional<int> t_star;    // equilibrium time of the emitted set
    std::optional<int> crossing;  // first t with F(t-1) <= c < F(t) (symmetric path)
    std::vector<StrategyPair> equilibria;
    bool verified = false;
    bool precondition_failed = false;  // F(0) < c < F(t0) did not hold
    std::string reason;                // filled for None reports
    std::optional<Deviation> failing_deviation;
    bool tie_condition = false;        // F(T*)/2 >= max(F(T*-1), c)
    bool tie_condition_above = false;  // same test one step later
    bool win_condition = false;        // c <= F(T*) <= 2c, F(T*+1) <= 2F(T*), F(T*-1) <= c
    std::optional<std::array<double, 3>> f_around;  // F at crossing-1, crossing, crossing+1
};

struct DynamicsTrace {
    std::vector<StrategyPair> path;  // visited states, start included
    TraceStatus status = TraceStatus::Sink;
    UpdateRule updates = UpdateRule::Alternating;
};

/// Immutable game context: parameters, both firms, and their cached value
/// tables (built through t0 + 1). Everything downstream reads from the
/// tables, so a context is cheap to share across searches and workers.
struct TwoFirmGame {
    GameParams params;
    FirmConfig firm_a;
    FirmConfig firm_b;
    Mode mode = Mode::Exact;
    ValueTable f_a;
    ValueTable f_b;

    static TwoFirmGame make(const GameParams& params, const FirmConfig& a, const FirmConfig& b,
                            Mode mode);

    int t_max() const { return params.t0 + 1; }
    bool symmetric() const { return firm_a.channel.snr == firm_b.channel.snr; }
    const ValueTable& table(FirmLabel label) const {
        return label == FirmLabel::A ? f_a : f_b;
    }
};

/// Optimal reply to an opponent deciding at t_other. With m = min(t_other,
/// t0): tie at m when F(m)/2 >= max(F(m-1), c); undercut to m-1 when
/// F(m-1) >= max(c, F(m)/2); otherwise stay out at m+1. Boundary ties are
/// broken tie > undercut > non-compete, and the undercut branch does not
/// exist at m = 0.
int best_response(int t_other, const ValueTable& f, const GameParams& params);
int best_response(int t_other, const FirmConfig& self, const GameParams& params, Mode mode);

/// Scans every unilateral deviation of both firms over [0, t_max]; returns
/// the first strictly profitable one, or nullopt when the pair is Nash.
std::optional<Deviation> find_profitable_deviation(StrategyPair pair, const TwoFirmGame& game);

/// Symmetric-game equilibrium classification. Requires F(0) < c < F(t0)
/// (reported as a None regime naming the failed inequality otherwise),
/// locates the crossing T* with F(T*-1) <= c < F(T*), applies the tie/win
/// condition sets, and verifies the claimed equilibria exhaustively before
/// emitting them. The table must extend through t0 + 1.
EquilibriumReport classify_regime(const ValueTable& f, const GameParams& params);
EquilibriumReport classify_regime(const GameParams& params, const FirmConfig& firm, Mode mode);

/// Best-response dynamics from a starting profile. Alternating updates move
/// one firm per step (A first); simultaneous updates move both. Terminates
/// at a fixed point (Sink) or on the first repeated state (Cycle); throws
/// budget_error when max_steps is exhausted first. Simultaneous play can
/// legitimately cycle; that is data, not an error.
DynamicsTrace run_dynamics(StrategyPair start, const TwoFirmGame& game, UpdateRule updates,
                           int max_steps);

/// Directed graph over all strategy pairs in [0, t_max]^2 whose edges are
/// single-firm best-response moves (self-loops omitted, so each node has at
/// most two out-edges). Sinks are exactly the pure Nash equilibria.
struct StateGraph {
    int t_max = 0;
    std::vector<std::array<int, 2>> out;  // per node: {A-move target, B-move target}, -1 = none
    std::vector<StrategyPair> sinks;

    int node_count() const { return static_cast<int>(out.size()); }
    int node_id(StrategyPair p) const { return p.t_a * (t_max + 1) + p.t_b; }
    StrategyPair pair_of(int id) const { return {id / (t_max + 1), id % (t_max + 1)}; }
};

/// Throws budget_error when t_max exceeds 10^4 (the graph is (t_max+1)^2 nodes).
StateGraph build_state_graph(const TwoFirmGame& game);

/// Cycle check restricted to edges whose move strictly improves the mover's
/// payoff (best-response edges can tie, e.g. between two stay-out times).
bool improving_subgraph_acyclic(const StateGraph& graph, const TwoFirmGame& game);

/// Equilibrium of the non-identical-channel game. The firm whose value
/// function reaches c later (the weaker channel) stays out one step behind
/// the stronger firm: with k = floor(F_weak^{-1}(c)), the candidate is
/// (k+1, k) oriented so the stronger firm takes the k slot. The candidate
/// is verified, never trusted: on a profitable deviation the report is
/// None with the deviation attached. Throws precondition_error when either
/// firm fails F(0) < c < F(t0) or the value inverses coincide.
EquilibriumReport asymmetric_equilibrium(const TwoFirmGame& game);

}  // namespace lrace
