#pragma once

#include <optional>
#include <vector>

#include "lrace/channel.hpp"

namespace lrace {

/// Economic and market constants shared by both firms.
///
/// p1/p2     prior probabilities of the Buy / Sell message (sum to 1)
/// v1/v2     dollar value of a correct Buy / Sell trade (a wrong decode
///           loses the same amount)
/// c         transaction cost in dollars, paid by every acting firm
/// d         channel cost rate in dollars per unit SNR (the fee d*S is sunk)
/// t0        efficient-market horizon in symbols: after t0 the arbitrage
///           opportunity is gone
struct GameParams {
    double p1 = 0.5;
    double p2 = 0.5;
    double v1 = 1.0;
    double v2 = 1.0;
    double c = 0.0;
    double d = 0.0;
    int t0 = 1;

    void validate() const;

    /// p1*v1 + p2*v2: the supremum of the gross trade value.
    double value_sum() const { return p1 * v1 + p2 * v2; }
};

enum class ThresholdMethod { ClosedForm, NumericFallback };

struct ThresholdResult {
    double threshold = 0.0;  // in (-1, 1)
    ErrorExponents exponents;
    double objective = 0.0;  // per-trade expected value at `threshold`
    ThresholdMethod method = ThresholdMethod::NumericFallback;
};

/// Expected per-trade value p1*v1*(1-2*pe1) + p2*v2*(1-2*pe2) after t
/// symbols at SNR snr, decoding with the given threshold.
double decode_objective(double t, double snr, const GameParams& params, Mode mode,
                        double threshold);

/// Algebraic threshold (p1*v1 - p2*v2) / (p1*v1 + (1 - 2*t*snr)*p2*v2).
/// Empty when the denominator is not positive or the value falls outside
/// (-1, 1). Note the formula is only trusted where it verifiably optimizes;
/// see optimal_threshold.
std::optional<double> closed_form_threshold(double t, double snr, const GameParams& params);

/// Maximizes decode_objective over thresholds in (-1, 1): a 1e-3-step grid
/// pass brackets the optimum, golden-section refines it to a 1e-10 interval.
/// The closed form is returned (method ClosedForm) only when it is in domain
/// and its objective is within 1e-9 of the numeric optimum; otherwise the
/// numeric result is returned flagged NumericFallback. Requires t > 0.
ThresholdResult optimal_threshold(double t, double snr, const GameParams& params, Mode mode);

/// The firm value function: expected gross trade value when acting first at
/// time t with the optimal threshold for (t, snr). Strictly increasing in t.
/// t is real-valued (continuous extension); at t = 0 the threshold
/// optimization is degenerate and the value is evaluated at threshold 0,
/// which gives 0 in Exact mode (coin-flip trading nets zero gross).
double firm_value(double t, double snr, const GameParams& params, Mode mode);

/// Real-valued t with firm_value(t) = y, by bisection to |dt| <= 1e-9.
/// Requires firm_value(0) < y < p1*v1 + p2*v2; throws precondition_error
/// otherwise.
double firm_value_inverse(double y, double snr, const GameParams& params, Mode mode);

/// firm_value cached at integer times 0..t_hi. All equilibrium machinery
/// operates off this table so repeated queries cost one array lookup.
class ValueTable {
public:
    ValueTable(double snr, const GameParams& params, Mode mode, int t_hi);

    double at(int t) const { return values_[static_cast<std::size_t>(t)]; }
    int t_hi() const { return static_cast<int>(values_.size()) - 1; }
    double snr() const { return snr_; }
    Mode mode() const { return mode_; }

private:
    double snr_;
    Mode mode_;
    std::vector<double> values_;
};

}  // namespace lrace
