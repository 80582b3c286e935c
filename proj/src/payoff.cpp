#include "lrace/payoff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lrace/optimize.hpp"

namespace lrace {
namespace {

PayoffBreakdown build_breakdown(Role role, double gross, const GameParams& params, double snr) {
    PayoffBreakdown out;
    out.role = role;
    out.channel_cost = params.d * snr;
    switch (role) {
        case Role::First:
            out.gross = gross;
            out.transaction_cost = params.c;
            out.total = gross - params.c - out.channel_cost;
            break;
        case Role::Tie:
            out.gross = gross;
            out.transaction_cost = params.c;
            out.total = gross / 2.0 - params.c - out.channel_cost;
            break;
        case Role::Second:
            out.gross = 0.0;
            out.transaction_cost = 0.0;
            out.total = -out.channel_cost;
            break;
    }
    return out;
}

Role role_of(int t_self, int t_other, int t0) {
    const int m = std::min(t_other, t0);
    if (t_self < m) return Role::First;
    if (t_self == m) return Role::Tie;
    return Role::Second;
}

}  // namespace

PayoffBreakdown expected_payoff(int t_self, int t_other, const FirmConfig& self,
                                const GameParams& params, Mode mode) {
    if (t_self < 0 || t_other < 0) {
        throw std::domain_error("expected_payoff: decision times must be >= 0");
    }
    const Role role = role_of(t_self, t_other, params.t0);
    const double gross =
        (role == Role::Second)
            ? 0.0
            : firm_value(static_cast<double>(t_self), self.channel.snr, params, mode);
    return build_breakdown(role, gross, params, self.channel.snr);
}

PayoffBreakdown payoff_from_table(int t_self, int t_other, const ValueTable& table,
                                  const GameParams& params) {
    const Role role = role_of(t_self, t_other, params.t0);
    const double gross = (role == Role::Second) ? 0.0 : table.at(t_self);
    return build_breakdown(role, gross, params, table.snr());
}

double power_objective(double snr, const GameParams& params, Mode mode) {
    return firm_value(static_cast<double>(params.t0), snr, params, mode) / 2.0 - params.c -
           params.d * snr;
}

double optimal_power(const GameParams& params, double snr_max, Mode mode, double grid_offset) {
    if (!(snr_max > 0.0) || !std::isfinite(snr_max)) {
        throw std::domain_error("optimal_power: snr_max must be finite and > 0");
    }
    const auto objective = [&](double s) { return power_objective(s, params, mode); };

    constexpr int kGridPoints = 1000;
    const double step = snr_max / static_cast<double>(kGridPoints);
    int best_k = 1;
    double best_f = -std::numeric_limits<double>::infinity();
    for (int k = 1; k <= kGridPoints; ++k) {
        const double s = std::min(snr_max, grid_offset + static_cast<double>(k) * step);
        const double f = objective(s);
        if (f > best_f) {
            best_f = f;
            best_k = k;
        }
    }
    const auto grid_point = [&](int k) {
        return std::min(snr_max, grid_offset + static_cast<double>(k) * step);
    };
    const double lo = grid_point(std::max(1, best_k - 1));
    const double hi = grid_point(std::min(kGridPoints, best_k + 1));
    double best_s = grid_point(best_k);
    if (hi > lo) {
        const auto [gs, gf] = golden_section_max(objective, lo, hi, 1e-8 * snr_max);
        if (gf >= best_f) {
            best_s = gs;
            best_f = gf;
        }
    }
    // Boundary rule: the full allocation wins ties at the top.
    if (objective(snr_max) >= best_f) {
        return snr_max;
    }
    return best_s;
}

}  // namespace lrace
