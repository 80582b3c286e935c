#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lrace/simulate.hpp"
#include "test_util.hpp"

using namespace lrace;

namespace {

GameParams base_params() {
    GameParams p;
    p.p1 = 0.6;
    p.p2 = 0.4;
    p.v1 = 1.5;
    p.v2 = 1.0;
    p.c = 0.1;
    p.d = 0.02;
    p.t0 = 8;
    return p;
}

FirmConfig firm(double snr, FirmLabel label) {
    return FirmConfig{ChannelSpec::make(snr, 8.0, 1.0, Mode::Exact), label};
}

}  // namespace

TEST_CASE("noiseless decoding never errs") {
    const ChannelSpec quiet = ChannelSpec::make(1e300, 1e300, 1e-300, Mode::Exact);
    CHECK(monte_carlo_error_rate(3, quiet, 0.0, Message::Buy, 1000, RngStream(1)) == 0.0);
    CHECK(monte_carlo_error_rate(3, quiet, 0.0, Message::Sell, 1000, RngStream(1)) == 0.0);
}

TEST_CASE("symmetric threshold errs equally on both messages") {
    const ChannelSpec spec = ChannelSpec::make(0.8, 2.0, 1.0, Mode::Exact);
    const long long n = 200'000;
    const double buy = monte_carlo_error_rate(6, spec, 0.0, Message::Buy, n, RngStream(2));
    const double sell = monte_carlo_error_rate(6, spec, 0.0, Message::Sell, n, RngStream(3));
    const double p = error_probabilities(6, spec, 0.0).pe1;
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    CHECK(std::abs(buy - sell) <= 3.0 * std::sqrt(2.0) * se);
}

TEST_CASE("error frequency tracks the analytic rate") {
    const ChannelSpec spec = ChannelSpec::make(1.0, 2.0, 1.0, Mode::Exact);
    const long long n = 1'000'000;
    const double h = 0.2;
    const int t = 10;
    const ErrorPair pe = error_probabilities(t, spec, h);
    const double freq = monte_carlo_error_rate(t, spec, h, Message::Buy, n, RngStream(4));
    const double se = std::sqrt(pe.pe1 * (1.0 - pe.pe1) / static_cast<double>(n));
    CHECK(std::abs(freq - pe.pe1) <= 3.0 * se);
}

TEST_CASE("race roles are degenerate in the strategy times") {
    const GameParams p = base_params();
    const SimReport report = monte_carlo_game({2, 5}, firm(0.8, FirmLabel::A),
                                              firm(0.8, FirmLabel::B), p, Mode::Exact, 2000,
                                              RngStream(5));
    CHECK(report.win_a == 1.0);
    CHECK(report.win_b == 0.0);
    CHECK(report.tie == 0.0);

    const SimReport tie_report = monte_carlo_game({4, 4}, firm(0.8, FirmLabel::A),
                                                  firm(0.8, FirmLabel::B), p, Mode::Exact, 2000,
                                                  RngStream(6));
    CHECK(tie_report.tie == 1.0);
    CHECK(tie_report.win_a + tie_report.win_b + tie_report.tie == 1.0);
}

TEST_CASE("near-certain message on a perfect channel pays exactly") {
    // Dyadic constants keep every per-trial payoff and partial sum exactly
    // representable, so the empirical mean must equal the analytic payoff
    // bit for bit.
    GameParams p = base_params();
    p.p1 = 1.0 - 1e-15;  // effectively always Buy under any finite sample
    p.p2 = 1e-15;
    p.v1 = 1.5;
    p.c = 0.25;
    p.d = 0.0009765625;  // 2^-10, so d * snr = 1 exactly
    const FirmConfig a{ChannelSpec::make(1024.0, 1024.0, 1.0, Mode::Exact), FirmLabel::A};
    const FirmConfig b{ChannelSpec::make(1024.0, 1024.0, 1.0, Mode::Exact), FirmLabel::B};
    const SimReport report =
        monte_carlo_game({2, 5}, a, b, p, Mode::Exact, 100'000, RngStream(7));
    const double sunk = 1.0;
    CHECK(report.payoff_a == p.v1 - p.c - sunk);
    CHECK(report.payoff_a_se == 0.0);
    CHECK(report.payoff_b == -sunk);
    CHECK(report.pe1_a == 0.0);
}

TEST_CASE("empirical payoffs agree with the analytic expectation") {
    const GameParams p = base_params();
    const FirmConfig a = firm(0.7, FirmLabel::A);
    const FirmConfig b = firm(1.1, FirmLabel::B);
    const StrategyPair strategies{3, 4};
    const long long n = 200'000;
    const SimReport report =
        monte_carlo_game(strategies, a, b, p, Mode::Exact, n, RngStream(8));

    const double analytic_a =
        expected_payoff(strategies.t_a, strategies.t_b, a, p, Mode::Exact).total;
    const double analytic_b =
        expected_payoff(strategies.t_b, strategies.t_a, b, p, Mode::Exact).total;
    CHECK(std::abs(report.payoff_a - analytic_a) <= 4.0 * report.payoff_a_se);
    CHECK(std::abs(report.payoff_b - analytic_b) <= 4.0 * report.payoff_b_se);

    // and the conditional error frequencies match the channel model
    const ErrorPair pe_a = error_probabilities(
        strategies.t_a, a.channel,
        optimal_threshold(strategies.t_a, a.channel.snr, p, Mode::Exact).threshold);
    const double se1 =
        std::sqrt(pe_a.pe1 * (1.0 - pe_a.pe1) / static_cast<double>(report.n_buy));
    CHECK(std::abs(report.pe1_a - pe_a.pe1) <= 4.0 * se1);
}

TEST_CASE("tied race splits the gross value") {
    const GameParams p = base_params();
    const FirmConfig a = firm(0.9, FirmLabel::A);
    const FirmConfig b = firm(0.9, FirmLabel::B);
    const long long n = 200'000;
    const SimReport report = monte_carlo_game({4, 4}, a, b, p, Mode::Exact, n, RngStream(9));
    const double analytic = expected_payoff(4, 4, a, p, Mode::Exact).total;
    CHECK(std::abs(report.payoff_a - analytic) <= 4.0 * report.payoff_a_se);
    CHECK(std::abs(report.payoff_b - analytic) <= 4.0 * report.payoff_b_se);
}

TEST_CASE("identical seeds give identical reports") {
    const GameParams p = base_params();
    const FirmConfig a = firm(0.7, FirmLabel::A);
    const FirmConfig b = firm(1.1, FirmLabel::B);
    const SimReport r1 = monte_carlo_game({3, 4}, a, b, p, Mode::Exact, 50'000, RngStream(10));
    const SimReport r2 = monte_carlo_game({3, 4}, a, b, p, Mode::Exact, 50'000, RngStream(10));
    CHECK(r1.payoff_a == r2.payoff_a);
    CHECK(r1.payoff_b == r2.payoff_b);
    CHECK(r1.payoff_a_se == r2.payoff_a_se);
    CHECK(r1.pe1_a == r2.pe1_a);
    CHECK(r1.pe2_b == r2.pe2_b);
    CHECK(r1.n_buy == r2.n_buy);
}

TEST_CASE("standard errors shrink like the square root of the trial count") {
    const GameParams p = base_params();
    const FirmConfig a = firm(0.7, FirmLabel::A);
    const FirmConfig b = firm(0.7, FirmLabel::B);
    const long long n = 40'000;
    for (const std::uint64_t seed : {11u, 12u, 13u}) {
        const SimReport small =
            monte_carlo_game({3, 4}, a, b, p, Mode::Exact, n, RngStream(seed));
        const SimReport large =
            monte_carlo_game({3, 4}, a, b, p, Mode::Exact, 4 * n, RngStream(seed + 100));
        const double ratio = large.payoff_a_se / small.payoff_a_se;
        CHECK(ratio >= 0.45);
        CHECK(ratio <= 0.55);
    }
}
