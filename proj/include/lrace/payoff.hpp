#pragma once

#include "lrace/channel.hpp"
#include "lrace/decoder.hpp"

namespace lrace {

enum class FirmLabel { A, B };

struct FirmConfig {
    ChannelSpec channel;
    FirmLabel label = FirmLabel::A;
};

/// Who captured the arbitrage: acted strictly first, tied at the earliest
/// effective time, or arrived after the opportunity was gone.
enum class Role { First, Tie, Second };

/// π decomposed: total = gross - transaction_cost - channel_cost, where the
/// tie role halves the gross and the second role books only the sunk
/// channel fee (no transaction, gross = 0).
struct PayoffBreakdown {
    double total = 0.0;
    Role role = Role::Second;
    double gross = 0.0;
    double transaction_cost = 0.0;
    double channel_cost = 0.0;
};

/// Expected payoff of a firm deciding at t_self against an opponent deciding
/// at t_other. The role comparison is against min(t_other, t0): after the
/// horizon the market is efficient, so a rival slower than t0 is equivalent
/// to one acting at t0.
PayoffBreakdown expected_payoff(int t_self, int t_other, const FirmConfig& self,
                                const GameParams& params, Mode mode);

/// Same computation with the firm's cached value table (table.snr() is the
/// firm's SNR). Used by the equilibrium search loops.
PayoffBreakdown payoff_from_table(int t_self, int t_other, const ValueTable& table,
                                  const GameParams& params);

/// The tie-split objective firm_value(t0, S)/2 - c - d*S that optimal power
/// provisioning maximizes; threshold is re-optimized inside firm_value for
/// every S. Exposed for the oracle tests.
double power_objective(double snr, const GameParams& params, Mode mode);

/// Allocated SNR S* = argmax of power_objective over (0, snr_max]:
/// a deterministic 1000-point grid pass followed by golden-section to
/// 1e-8*snr_max. The search never proposes less than the smallest grid
/// point; if the boundary value snr_max is at least as good as the interior
/// candidate, snr_max is returned exactly. grid_offset shifts the grid
/// phase and exists for robustness testing only.
double optimal_power(const GameParams& params, double snr_max, Mode mode,
                     double grid_offset = 0.0);

}  // namespace lrace
