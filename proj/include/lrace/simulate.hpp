#pragma once

#include "lrace/channel.hpp"
#include "lrace/decoder.hpp"
#include "lrace/equilibrium.hpp"
#include "lrace/payoff.hpp"
#include "lrace/rng.hpp"

namespace lrace {

/// Empirical race statistics over n independent trials.
///
/// win_a / win_b count trials where that firm acted strictly first within
/// the horizon; tie covers the remainder (simultaneous action, or nobody
/// acting in time), so the three frequencies always sum to 1. Error
/// frequencies pe1/pe2 are conditioned on the transmitted message (type 1 =
/// wrong on Buy, type 2 = wrong on Sell).
struct SimReport {
    long long n_trials = 0;
    long long n_buy = 0;
    double payoff_a = 0.0;
    double payoff_a_se = 0.0;
    double payoff_b = 0.0;
    double payoff_b_se = 0.0;
    double win_a = 0.0;
    double win_b = 0.0;
    double tie = 0.0;
    double pe1_a = 0.0;
    double pe2_a = 0.0;
    double pe1_b = 0.0;
    double pe2_b = 0.0;
};

/// Fraction of n trials in which the threshold rule (decide Buy iff the
/// received mean is >= h * amplitude) misdecodes the given message.
/// Deterministic given the stream seed; trials are drawn from fixed-size
/// substream blocks so any block partition reproduces the same count.
double monte_carlo_error_rate(int t, const ChannelSpec& spec, double threshold, Message message,
                              long long n, const RngStream& rng);

/// Full race simulation. Each trial draws a message from the priors, runs
/// both firms' channels independently, decodes at each firm's decision time
/// with its optimal threshold, assigns roles by time priority clipped at
/// t0, and scores: the first actor books +-V (sign by decode correctness)
/// minus the transaction cost, ties halve the +-V, the late firm books
/// nothing; both always pay the sunk channel fee d*S. A firm deciding at
/// t = 0 has no symbols and decodes by fair coin, matching the exact-mode
/// error probability of one half. Accumulation uses compensated sums, so
/// block merges introduce no meaningful order drift.
SimReport monte_carlo_game(StrategyPair strategies, const FirmConfig& firm_a,
                           const FirmConfig& firm_b, const GameParams& params, Mode mode,
                           long long n, const RngStream& rng);

}  // namespace lrace
