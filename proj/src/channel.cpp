#include "lrace/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lrace {

ChannelSpec ChannelSpec::make(double snr, double snr_max, double noise_power, Mode mode) {
    ChannelSpec spec;
    spec.snr = snr;
    spec.snr_max = snr_max;
    spec.noise_power = noise_power;
    spec.amplitude = std::sqrt(snr * noise_power);
    spec.mode = mode;
    spec.validate();
    return spec;
}

void ChannelSpec::validate() const {
    if (!(snr > 0.0) || !std::isfinite(snr)) {
        throw std::domain_error("ChannelSpec: snr must be finite and > 0");
    }
    if (!(snr_max > 0.0) || !std::isfinite(snr_max)) {
        throw std::domain_error("ChannelSpec: snr_max must be finite and > 0");
    }
    if (snr > snr_max) {
        throw std::domain_error("ChannelSpec: snr exceeds snr_max");
    }
    if (!(noise_power > 0.0) || !std::isfinite(noise_power)) {
        throw std::domain_error("ChannelSpec: noise_power must be finite and > 0");
    }
    const double implied = amplitude * amplitude / noise_power;
    if (!(std::abs(implied - snr) <= 1e-12 * snr)) {
        throw std::domain_error("ChannelSpec: amplitude inconsistent with snr * noise_power");
    }
}

double q_function(double x) {
    if (!std::isfinite(x)) {
        throw std::domain_error("q_function: non-finite argument");
    }
    // Beyond |x| = 38 erfc underflows through the denormal range; clamp.
    if (x > 38.0) return 0.0;
    if (x < -38.0) return 1.0;
    constexpr double inv_sqrt2 = 0.70710678118654752440084436210485;
    return 0.5 * std::erfc(x * inv_sqrt2);
}

ErrorExponents error_exponents(double threshold) {
    if (!std::isfinite(threshold)) {
        throw std::domain_error("error_exponents: non-finite threshold");
    }
    return ErrorExponents{
        (1.0 - threshold) * (1.0 - threshold) / 2.0,
        (1.0 + threshold) * (1.0 + threshold) / 2.0,
    };
}

ErrorPair error_probabilities(double t, const ChannelSpec& spec, double threshold) {
    if (!std::isfinite(t) || t < 0.0) {
        throw std::domain_error("error_probabilities: t must be finite and >= 0");
    }
    const ErrorExponents g = error_exponents(threshold);
    const double ts = t * spec.snr;
    if (spec.mode == Mode::Exact) {
        return ErrorPair{
            q_function(std::sqrt(2.0 * ts * g.type1)),
            q_function(std::sqrt(2.0 * ts * g.type2)),
        };
    }
    return ErrorPair{
        std::min(1.0, std::exp(-ts * g.type1)),
        std::min(1.0, std::exp(-ts * g.type2)),
    };
}

double sample_received_mean(Message message, int t, const ChannelSpec& spec, RngStream& rng) {
    if (t < 1) {
        throw std::domain_error("sample_received_mean: need at least one symbol");
    }
    const double mean = (message == Message::Buy) ? spec.amplitude : -spec.amplitude;
    const double stddev = std::sqrt(spec.noise_power);
    double sum = 0.0;
    for (int i = 0; i < t; ++i) {
        sum += rng.next_normal(mean, stddev);
    }
    return sum / static_cast<double>(t);
}

}  // namespace lrace
