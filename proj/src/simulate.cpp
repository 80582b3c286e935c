#include "lrace/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lrace {
namespace {

constexpr long long kBlockTrials = 1 << 14;

struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

// Decide Buy iff the sufficient statistic clears h * amplitude. t = 0 means
// no observation: a fair coin, consistent with the exact error probability
// Q(0) = 1/2 on both messages.
bool decode_buy(Message message, int t, const ChannelSpec& spec, double threshold,
                RngStream& rng) {
    if (t == 0) {
        return rng.next_uniform() < 0.5;
    }
    const double mean = sample_received_mean(message, t, spec, rng);
    return mean >= threshold * spec.amplitude;
}

double standard_error(const KahanSum& sum, const KahanSum& sumsq, long long n) {
    if (n < 2) return 0.0;
    const double mean = sum.sum / static_cast<double>(n);
    const double var =
        std::max(0.0, (sumsq.sum - static_cast<double>(n) * mean * mean) /
                          static_cast<double>(n - 1));
    return std::sqrt(var / static_cast<double>(n));
}

}  // namespace

double monte_carlo_error_rate(int t, const ChannelSpec& spec, double threshold, Message message,
                              long long n, const RngStream& rng) {
    if (n < 1) {
        throw std::domain_error("monte_carlo_error_rate: need at least one trial");
    }
    if (t < 1) {
        throw std::domain_error("monte_carlo_error_rate: need at least one symbol");
    }
    long long errors = 0;
    long long done = 0;
    for (std::uint64_t block = 0; done < n; ++block) {
        RngStream sub = rng.substream(block);
        const long long batch = std::min(kBlockTrials, n - done);
        for (long long i = 0; i < batch; ++i) {
            const bool buy = decode_buy(message, t, spec, threshold, sub);
            const bool wrong = (message == Message::Buy) ? !buy : buy;
            errors += wrong ? 1 : 0;
        }
        done += batch;
    }
    return static_cast<double>(errors) / static_cast<double>(n);
}

SimReport monte_carlo_game(StrategyPair strategies, const FirmConfig& firm_a,
                           const FirmConfig& firm_b, const GameParams& params, Mode mode,
                           long long n, const RngStream& rng) {
    if (n < 1) {
        throw std::domain_error("monte_carlo_game: need at least one trial");
    }
    params.validate();
    firm_a.channel.validate();
    firm_b.channel.validate();
    const int t_a = strategies.t_a;
    const int t_b = strategies.t_b;
    if (t_a < 0 || t_b < 0) {
        throw std::domain_error("monte_carlo_game: decision times must be >= 0");
    }

    const double h_a =
        (t_a == 0) ? 0.0 : optimal_threshold(t_a, firm_a.channel.snr, params, mode).threshold;
    const double h_b =
        (t_b == 0) ? 0.0 : optimal_threshold(t_b, firm_b.channel.snr, params, mode).threshold;

    const int m_a = std::min(t_b, params.t0);
    const int m_b = std::min(t_a, params.t0);
    const Role role_a = (t_a < m_a) ? Role::First : (t_a == m_a ? Role::Tie : Role::Second);
    const Role role_b = (t_b < m_b) ? Role::First : (t_b == m_b ? Role::Tie : Role::Second);
    const double channel_cost_a = params.d * firm_a.channel.snr;
    const double channel_cost_b = params.d * firm_b.channel.snr;

    const auto trial_payoff = [&](Role role, bool correct, double value, double channel_cost) {
        switch (role) {
            case Role::First:
                return (correct ? value : -value) - params.c - channel_cost;
            case Role::Tie:
                return (correct ? value : -value) / 2.0 - params.c - channel_cost;
            case Role::Second:
                return -channel_cost;
        }
        return 0.0;
    };

    KahanSum pay_a, pay_b, pay_a_sq, pay_b_sq;
    long long n_buy = 0;
    long long err1_a = 0, err2_a = 0, err1_b = 0, err2_b = 0;

    long long done = 0;
    for (std::uint64_t block = 0; done < n; ++block) {
        RngStream sub = rng.substream(block);
        const long long batch = std::min(kBlockTrials, n - done);
        for (long long i = 0; i < batch; ++i) {
            const Message msg =
                (sub.next_uniform() < params.p1) ? Message::Buy : Message::Sell;
            const bool buy_a = decode_buy(msg, t_a, firm_a.channel, h_a, sub);
            const bool buy_b = decode_buy(msg, t_b, firm_b.channel, h_b, sub);
            const bool correct_a = (msg == Message::Buy) == buy_a;
            const bool correct_b = (msg == Message::Buy) == buy_b;
            const double value = (msg == Message::Buy) ? params.v1 : params.v2;

            if (msg == Message::Buy) {
                ++n_buy;
                err1_a += correct_a ? 0 : 1;
                err1_b += correct_b ? 0 : 1;
            } else {
                err2_a += correct_a ? 0 : 1;
                err2_b += correct_b ? 0 : 1;
            }

            const double pa = trial_payoff(role_a, correct_a, value, channel_cost_a);
            const double pb = trial_payoff(role_b, correct_b, value, channel_cost_b);
            pay_a.add(pa);
            pay_a_sq.add(pa * pa);
            pay_b.add(pb);
            pay_b_sq.add(pb * pb);
        }
        done += batch;
    }

    SimReport report;
    report.n_trials = n;
    report.n_buy = n_buy;
    report.payoff_a = pay_a.sum / static_cast<double>(n);
    report.payoff_b = pay_b.sum / static_cast<double>(n);
    report.payoff_a_se = standard_error(pay_a, pay_a_sq, n);
    report.payoff_b_se = standard_error(pay_b, pay_b_sq, n);
    report.win_a = (role_a == Role::First) ? 1.0 : 0.0;
    report.win_b = (role_b == Role::First) ? 1.0 : 0.0;
    report.tie = 1.0 - report.win_a - report.win_b;
    const long long n_sell = n - n_buy;
    report.pe1_a = (n_buy > 0) ? static_cast<double>(err1_a) / static_cast<double>(n_buy) : 0.0;
    report.pe1_b = (n_buy > 0) ? static_cast<double>(err1_b) / static_cast<double>(n_buy) : 0.0;
    report.pe2_a = (n_sell > 0) ? static_cast<double>(err2_a) / static_cast<double>(n_sell) : 0.0;
    report.pe2_b = (n_sell > 0) ? static_cast<double>(err2_b) / static_cast<double>(n_sell) : 0.0;
    return report;
}

}  // namespace lrace
