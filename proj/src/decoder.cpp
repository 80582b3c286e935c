#include "lrace/decoder.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "lrace/errors.hpp"
#include "lrace/optimize.hpp"

namespace lrace {
namespace {

constexpr double kGridStep = 1e-3;
constexpr double kGoldenTol = 1e-10;
constexpr double kClosedFormWindow = 1e-9;

ErrorPair error_probabilities_at(double t, double snr, Mode mode, double threshold) {
    ChannelSpec spec;  // analytic path: only snr and mode matter
    spec.snr = snr;
    spec.snr_max = snr;
    spec.noise_power = 1.0;
    spec.amplitude = std::sqrt(snr);
    spec.mode = mode;
    return error_probabilities(t, spec, threshold);
}

}  // namespace

void GameParams::validate() const {
    if (!(p1 > 0.0 && p1 < 1.0) || !(p2 > 0.0 && p2 < 1.0)) {
        throw std::domain_error("GameParams: priors must lie in (0, 1)");
    }
    if (!(std::abs(p1 + p2 - 1.0) <= 1e-12)) {
        throw std::domain_error("GameParams: priors must sum to 1");
    }
    if (!(v1 > 0.0) || !std::isfinite(v1) || !(v2 > 0.0) || !std::isfinite(v2)) {
        throw std::domain_error("GameParams: trade values must be finite and > 0");
    }
    if (!(c >= 0.0) || !std::isfinite(c)) {
        throw std::domain_error("GameParams: transaction cost must be finite and >= 0");
    }
    if (!(d >= 0.0) || !std::isfinite(d)) {
        throw std::domain_error("GameParams: channel cost rate must be finite and >= 0");
    }
    if (t0 < 1) {
        throw std::domain_error("GameParams: efficient-market horizon must be >= 1");
    }
}

double decode_objective(double t, double snr, const GameParams& params, Mode mode,
                        double threshold) {
    const ErrorPair pe = error_probabilities_at(t, snr, mode, threshold);
    return params.p1 * params.v1 * (1.0 - 2.0 * pe.pe1) +
           params.p2 * params.v2 * (1.0 - 2.0 * pe.pe2);
}

std::optional<double> closed_form_threshold(double t, double snr, const GameParams& params) {
    const double num = params.p1 * params.v1 - params.p2 * params.v2;
    const double den = params.p1 * params.v1 + (1.0 - 2.0 * t * snr) * params.p2 * params.v2;
    if (!(den > 0.0)) return std::nullopt;
    const double h = num / den;
    if (!(h > -1.0 && h < 1.0)) return std::nullopt;
    return h;
}

ThresholdResult optimal_threshold(double t, double snr, const GameParams& params, Mode mode) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw std::domain_error("optimal_threshold: t must be > 0");
    }
    if (!(snr > 0.0) || !std::isfinite(snr)) {
        throw std::domain_error("optimal_threshold: snr must be > 0");
    }
    const auto objective = [&](double h) { return decode_objective(t, snr, params, mode, h); };

    // Bracketing pass over the fixed grid -1 + k*step, k = 1..1999.
    double best_h = 0.0;
    double best_f = -std::numeric_limits<double>::infinity();
    for (int k = 1; k < 2000; ++k) {
        const double h = -1.0 + static_cast<double>(k) * kGridStep;
        const double f = objective(h);
        if (f > best_f) {
            best_f = f;
            best_h = h;
        }
    }
    const auto [gh, gf] = golden_section_max(objective, best_h - kGridStep, best_h + kGridStep,
                                             kGoldenTol);
    double numeric_h = best_h;
    double numeric_f = best_f;
    if (gf >= numeric_f) {
        numeric_h = gh;
        numeric_f = gf;
    }

    ThresholdResult result;
    const std::optional<double> closed = closed_form_threshold(t, snr, params);
    if (closed && objective(*closed) >= numeric_f - kClosedFormWindow) {
        result.threshold = *closed;
        result.objective = objective(*closed);
        result.method = ThresholdMethod::ClosedForm;
    } else {
        result.threshold = numeric_h;
        result.objective = numeric_f;
        result.method = ThresholdMethod::NumericFallback;
    }
    result.exponents = error_exponents(result.threshold);
    return result;
}

double firm_value(double t, double snr, const GameParams& params, Mode mode) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw std::domain_error("firm_value: t must be finite and >= 0");
    }
    if (t == 0.0) {
        return decode_objective(0.0, snr, params, mode, 0.0);
    }
    return optimal_threshold(t, snr, params, mode).objective;
}

double firm_value_inverse(double y, double snr, const GameParams& params, Mode mode) {
    const double f0 = firm_value(0.0, snr, params, mode);
    const double sup = params.value_sum();
    if (!(y > f0 && y < sup)) {
        throw precondition_error("firm_value_inverse: target outside (F(0), p1*v1 + p2*v2)");
    }
    double lo = 0.0;
    double hi = static_cast<double>(params.t0);
    int doublings = 0;
    while (firm_value(hi, snr, params, mode) < y) {
        lo = hi;
        hi *= 2.0;
        if (++doublings > 200) {
            throw std::logic_error("firm_value_inverse: failed to bracket target");
        }
    }
    while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        if (firm_value(mid, snr, params, mode) < y) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

ValueTable::ValueTable(double snr, const GameParams& params, Mode mode, int t_hi)
    : snr_(snr), mode_(mode) {
    if (t_hi < 0) {
        throw std::domain_error("ValueTable: t_hi must be >= 0");
    }
    values_.reserve(static_cast<std::size_t>(t_hi) + 1);
    for (int t = 0; t <= t_hi; ++t) {
        values_.push_back(firm_value(static_cast<double>(t), snr, params, mode));
    }
}

}  // namespace lrace
