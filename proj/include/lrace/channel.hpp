#pragma once

#include "lrace/rng.hpp"

namespace lrace {

/// How error probabilities are evaluated: the exact Gaussian tail, or the
/// exponential upper bound exp(-T*S*gamma) used by the closed-form analysis.
enum class Mode { Exact, Approx };

enum class Message { Buy, Sell };

/// One firm's physical channel: BPSK repetition signalling over AWGN.
///
/// snr        S  = P / N0, dimensionless, 0 < S <= snr_max
/// snr_max    S0, the largest SNR the channel can be provisioned at
/// noise_power N0, variance per received symbol
/// amplitude  a  = sqrt(P) = sqrt(S * N0), signal level in volts
struct ChannelSpec {
    double snr = 1.0;
    double snr_max = 1.0;
    double noise_power = 1.0;
    double amplitude = 1.0;
    Mode mode = Mode::Exact;

    static ChannelSpec make(double snr, double snr_max, double noise_power, Mode mode);

    /// Throws std::domain_error when any field is out of range or the
    /// amplitude is inconsistent with snr * noise_power.
    void validate() const;
};

/// Error probabilities of the two decode-failure events:
/// pe1 = P(decide Sell | Buy sent), pe2 = P(decide Buy | Sell sent).
struct ErrorPair {
    double pe1 = 0.0;
    double pe2 = 0.0;
};

/// Decay exponents of the two error events at decoding threshold h:
/// type1 = (1-h)^2 / 2, type2 = (1+h)^2 / 2.
struct ErrorExponents {
    double type1 = 0.0;
    double type2 = 0.0;
};

/// Tail probability of the standard normal, P(Z > x).
/// Relative error <= 1e-12 over |x| <= 38; clamped to 0/1 beyond that.
/// Throws std::domain_error for non-finite input.
double q_function(double x);

ErrorExponents error_exponents(double threshold);

/// Decode error probabilities after t received symbols at threshold h.
/// Exact mode: pe_i = Q(sqrt(2 t S gamma_i)). Approx mode:
/// pe_i = min(1, exp(-t S gamma_i)); the min keeps the bound a probability
/// at t = 0 where the raw exponential reaches 1 on both events.
/// t is real-valued so the same formulas serve the continuous-time
/// extension; throws std::domain_error for t < 0 or non-finite inputs.
ErrorPair error_probabilities(double t, const ChannelSpec& spec, double threshold);

/// Sufficient statistic of one transmission: the mean of t received symbols
/// y_i ~ Normal(+-a, N0), sign per message. Deterministic given the stream
/// state. Throws std::domain_error for t < 1.
double sample_received_mean(Message message, int t, const ChannelSpec& spec, RngStream& rng);

}  // namespace lrace
