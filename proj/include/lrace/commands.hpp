#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lrace/config.hpp"
#include "lrace/equilibrium.hpp"

namespace lrace {

/// Per-firm channels after resolving "auto" SNRs through the optimal power
/// search.
struct ResolvedFirms {
    FirmConfig a;
    FirmConfig b;
};

ResolvedFirms resolve_firms(const RunConfig& cfg);

/// Equilibrium solve rendered as a single JSON document. Symmetric channels
/// go through regime classification, distinct channels through the
/// asymmetric equilibrium. Throws precondition_error when F(0) < c < F(t0)
/// fails, naming the violated inequality.
std::string cmd_solve(const RunConfig& cfg);

/// One CSV row per grid point of the configured one-axis sweep. Points are
/// independent and are computed by `jobs` workers; rows are emitted in grid
/// order regardless of completion order. Header:
/// schema_version,axis,value,regime,t_star,n_equilibria,equilibria,f_t_star,payoff_a,payoff_b
/// (equilibria are `ta:tb` pairs joined by `;`).
std::string cmd_sweep(const RunConfig& cfg, int jobs);

/// Best-response dynamics trace as JSON lines: one line per visited state
/// plus a terminal status line (SINK or CYCLE). Throws budget_error when
/// the step budget runs out.
std::string cmd_dynamics(const RunConfig& cfg);

/// Monte Carlo race validation: the empirical report, the analytic
/// predictions side by side, and their z-scores.
std::string cmd_simulate(const RunConfig& cfg);

struct CliOptions {
    std::string command;  // solve | sweep | dynamics | simulate
    std::string config_path;
    std::vector<std::string> overrides;
    int jobs = 0;  // 0 = machine parallelism
    std::string out_path;  // empty = stdout
};

/// Loads the config, dispatches, and writes the result to --out or the
/// given stream. Returns the process exit code: 0 success, 2 config error,
/// 3 model precondition violation, 4 iteration budget, 1 internal error.
int run_cli(const CliOptions& options, std::ostream& out, std::ostream& err);

}  // namespace lrace
