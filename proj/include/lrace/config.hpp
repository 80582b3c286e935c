#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lrace/channel.hpp"
#include "lrace/decoder.hpp"
#include "lrace/equilibrium.hpp"

namespace lrace {

inline constexpr int kSchemaVersion = 1;

/// Where a firm's SNR comes from: pinned in the config, or allocated by the
/// optimal power search at load time.
struct FirmSpecConfig {
    bool auto_snr = false;
    double snr = 0.0;  // meaningful when !auto_snr
    double snr_max = 1.0;
    double noise_power = 1.0;

    bool operator==(const FirmSpecConfig&) const = default;
};

struct SweepSpec {
    std::string axis;  // one of: snr c d t0 p1 v1 v2
    double from = 0.0;
    double to = 0.0;
    int steps = 0;
};

struct DynamicsSpec {
    StrategyPair start;
    UpdateRule updates = UpdateRule::Alternating;
    int max_steps = 0;  // 0 = default budget (t0 + 2)^2
};

struct SimulateSpec {
    StrategyPair strategies;
    long long trials = 0;
};

/// Fully validated run configuration. Parsing is strict: unknown keys are
/// rejected, and every referenced domain invariant is checked before a
/// config is handed to a command.
struct RunConfig {
    GameParams params;
    FirmSpecConfig firm_a;
    FirmSpecConfig firm_b;
    Mode mode = Mode::Exact;
    std::uint64_t seed = 0;
    std::optional<SweepSpec> sweep;
    std::optional<DynamicsSpec> dynamics;
    std::optional<SimulateSpec> simulate;
};

/// Parses and validates a config document. Throws config_error; parse
/// failures carry the line and column of the offending byte.
RunConfig parse_run_config(const std::string& json_text);

/// Reads the file, applies dotted-path overrides ("params.c=0.25",
/// "firm_a.snr=auto") to the raw document, then parses. Override values are
/// interpreted as JSON scalars when possible and as strings otherwise.
RunConfig load_run_config(const std::string& path, const std::vector<std::string>& overrides);

}  // namespace lrace
