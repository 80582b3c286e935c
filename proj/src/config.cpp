#include "lrace/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lrace/errors.hpp"

namespace lrace {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw config_error(msg); }

void reject_unknown_keys(const json& obj, const std::string& where,
                         const std::set<std::string>& allowed) {
    for (const auto& item : obj.items()) {
        if (!allowed.contains(item.key())) {
            fail("unknown key '" + item.key() + "' in " + where);
        }
    }
}

const json* find(const json& obj, const char* key) {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

double require_number(const json& obj, const std::string& where, const char* key) {
    const json* v = find(obj, key);
    if (!v) fail(where + ": missing required key '" + key + "'");
    if (!v->is_number()) fail(where + "." + key + ": expected a number");
    return v->get<double>();
}

double number_or(const json& obj, const std::string& where, const char* key, double fallback) {
    const json* v = find(obj, key);
    if (!v) return fallback;
    if (!v->is_number()) fail(where + "." + key + ": expected a number");
    return v->get<double>();
}

long long require_integer(const json& obj, const std::string& where, const char* key) {
    const json* v = find(obj, key);
    if (!v) fail(where + ": missing required key '" + key + "'");
    if (!v->is_number_integer()) fail(where + "." + key + ": expected an integer");
    return v->get<long long>();
}

GameParams parse_params(const json& obj) {
    if (!obj.is_object()) fail("params: expected an object");
    reject_unknown_keys(obj, "params", {"p1", "p2", "v1", "v2", "c", "d", "t0"});
    GameParams p;
    p.p1 = require_number(obj, "params", "p1");
    p.p2 = number_or(obj, "params", "p2", 1.0 - p.p1);
    p.v1 = require_number(obj, "params", "v1");
    p.v2 = require_number(obj, "params", "v2");
    p.c = require_number(obj, "params", "c");
    p.d = require_number(obj, "params", "d");
    const long long t0 = require_integer(obj, "params", "t0");
    if (t0 < 1 || t0 > 1'000'000) fail("params.t0: must be an integer in [1, 10^6]");
    p.t0 = static_cast<int>(t0);
    try {
        p.validate();
    } catch (const std::exception& e) {
        fail(std::string("params: ") + e.what());
    }
    return p;
}

FirmSpecConfig parse_firm(const json& obj, const std::string& where) {
    if (!obj.is_object()) fail(where + ": expected an object");
    reject_unknown_keys(obj, where, {"snr", "snr_max", "noise_power"});
    FirmSpecConfig firm;
    firm.snr_max = require_number(obj, where, "snr_max");
    firm.noise_power = number_or(obj, where, "noise_power", 1.0);
    if (!(firm.snr_max > 0.0) || !std::isfinite(firm.snr_max)) {
        fail(where + ".snr_max: must be finite and > 0");
    }
    if (!(firm.noise_power > 0.0) || !std::isfinite(firm.noise_power)) {
        fail(where + ".noise_power: must be finite and > 0");
    }

    const json* snr = find(obj, "snr");
    if (!snr) fail(where + ": missing required key 'snr'");
    if (snr->is_number()) {
        firm.snr = snr->get<double>();
    } else if (snr->is_string()) {
        const std::string s = snr->get<std::string>();
        if (s == "auto") {
            firm.auto_snr = true;
        } else if (s.rfind("fixed:", 0) == 0) {
            std::size_t used = 0;
            try {
                firm.snr = std::stod(s.substr(6), &used);
            } catch (const std::exception&) {
                fail(where + ".snr: cannot parse '" + s + "'");
            }
            if (used != s.size() - 6) fail(where + ".snr: cannot parse '" + s + "'");
        } else {
            fail(where + ".snr: expected a number, 'auto', or 'fixed:<value>'");
        }
    } else {
        fail(where + ".snr: expected a number, 'auto', or 'fixed:<value>'");
    }
    if (!firm.auto_snr) {
        if (!(firm.snr > 0.0) || !std::isfinite(firm.snr)) {
            fail(where + ".snr: must be finite and > 0");
        }
        if (firm.snr > firm.snr_max) fail(where + ".snr: exceeds snr_max");
    }
    return firm;
}

StrategyPair parse_pair(const json& v, const std::string& where, int t_max) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() ||
        !v[1].is_number_integer()) {
        fail(where + ": expected an array of two integers");
    }
    StrategyPair pair{v[0].get<int>(), v[1].get<int>()};
    if (pair.t_a < 0 || pair.t_a > t_max || pair.t_b < 0 || pair.t_b > t_max) {
        fail(where + ": decision times must lie in [0, t0 + 1]");
    }
    return pair;
}

SweepSpec parse_sweep(const json& obj, const RunConfig& cfg) {
    if (!obj.is_object()) fail("sweep: expected an object");
    reject_unknown_keys(obj, "sweep", {"axis", "from", "to", "steps"});
    SweepSpec sweep;
    const json* axis = find(obj, "axis");
    if (!axis || !axis->is_string()) fail("sweep.axis: expected a string");
    sweep.axis = axis->get<std::string>();
    static const std::set<std::string> kAxes{"snr", "c", "d", "t0", "p1", "v1", "v2"};
    if (!kAxes.contains(sweep.axis)) {
        fail("sweep.axis: '" + sweep.axis + "' is not one of snr, c, d, t0, p1, v1, v2");
    }
    sweep.from = require_number(obj, "sweep", "from");
    sweep.to = require_number(obj, "sweep", "to");
    const long long steps = require_integer(obj, "sweep", "steps");
    if (steps < 2 || steps > 10'000'000) fail("sweep.steps: must be an integer in [2, 10^7]");
    sweep.steps = static_cast<int>(steps);
    if (!std::isfinite(sweep.from) || !std::isfinite(sweep.to)) {
        fail("sweep range must be finite");
    }

    const double lo = std::min(sweep.from, sweep.to);
    const double hi = std::max(sweep.from, sweep.to);
    if (sweep.axis == "snr") {
        if (!(lo > 0.0)) fail("sweep over snr requires values > 0");
        if (hi > std::min(cfg.firm_a.snr_max, cfg.firm_b.snr_max)) {
            fail("sweep over snr exceeds a firm's snr_max");
        }
    } else if (sweep.axis == "c" || sweep.axis == "d") {
        if (!(lo >= 0.0)) fail("sweep over " + sweep.axis + " requires values >= 0");
    } else if (sweep.axis == "p1") {
        if (!(lo > 0.0 && hi < 1.0)) fail("sweep over p1 requires values in (0, 1)");
    } else if (sweep.axis == "v1" || sweep.axis == "v2") {
        if (!(lo > 0.0)) fail("sweep over " + sweep.axis + " requires values > 0");
    } else if (sweep.axis == "t0") {
        if (!(lo >= 1.0)) fail("sweep over t0 requires values >= 1");
    }
    // Regime classification is defined for the symmetric game.
    if (!(cfg.firm_a == cfg.firm_b)) {
        fail("sweep requires identical firm_a and firm_b");
    }
    return sweep;
}

DynamicsSpec parse_dynamics(const json& obj, const RunConfig& cfg) {
    if (!obj.is_object()) fail("dynamics: expected an object");
    reject_unknown_keys(obj, "dynamics", {"start", "updates", "max_steps"});
    DynamicsSpec dyn;
    const json* start = find(obj, "start");
    if (!start) fail("dynamics: missing required key 'start'");
    dyn.start = parse_pair(*start, "dynamics.start", cfg.params.t0 + 1);
    if (const json* upd = find(obj, "updates")) {
        if (!upd->is_string()) fail("dynamics.updates: expected a string");
        const std::string s = upd->get<std::string>();
        if (s == "ALTERNATING") {
            dyn.updates = UpdateRule::Alternating;
        } else if (s == "SIMULTANEOUS") {
            dyn.updates = UpdateRule::Simultaneous;
        } else {
            fail("dynamics.updates: expected ALTERNATING or SIMULTANEOUS");
        }
    }
    if (find(obj, "max_steps")) {
        const long long ms = require_integer(obj, "dynamics", "max_steps");
        if (ms < 1 || ms > 1'000'000'000) fail("dynamics.max_steps: must be in [1, 10^9]");
        dyn.max_steps = static_cast<int>(ms);
    }
    return dyn;
}

SimulateSpec parse_simulate(const json& obj, const RunConfig& cfg) {
    if (!obj.is_object()) fail("simulate: expected an object");
    reject_unknown_keys(obj, "simulate", {"strategies", "trials"});
    SimulateSpec sim;
    const json* strategies = find(obj, "strategies");
    if (!strategies) fail("simulate: missing required key 'strategies'");
    sim.strategies = parse_pair(*strategies, "simulate.strategies", cfg.params.t0 + 1);
    sim.trials = require_integer(obj, "simulate", "trials");
    if (sim.trials < 1) fail("simulate.trials: must be >= 1");
    return sim;
}

std::pair<int, int> line_and_column(const std::string& text, std::size_t byte) {
    int line = 1;
    int col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_and_column(json_text, e.byte > 0 ? e.byte - 1 : 0);
        std::ostringstream oss;
        oss << "line " << line << ", column " << col << ": " << e.what();
        fail(oss.str());
    }
    if (!doc.is_object()) fail("config: top level must be an object");
    reject_unknown_keys(doc, "config",
                        {"schema_version", "params", "firm_a", "firm_b", "mode", "seed", "sweep",
                         "dynamics", "simulate"});

    if (const json* sv = find(doc, "schema_version")) {
        if (!sv->is_number_integer() || sv->get<long long>() != kSchemaVersion) {
            fail("schema_version: this build reads version " + std::to_string(kSchemaVersion));
        }
    }

    RunConfig cfg;
    const json* params = find(doc, "params");
    if (!params) fail("config: missing required key 'params'");
    cfg.params = parse_params(*params);

    const json* firm_a = find(doc, "firm_a");
    if (!firm_a) fail("config: missing required key 'firm_a'");
    cfg.firm_a = parse_firm(*firm_a, "firm_a");
    const json* firm_b = find(doc, "firm_b");
    if (!firm_b) fail("config: missing required key 'firm_b'");
    cfg.firm_b = parse_firm(*firm_b, "firm_b");

    if (const json* mode = find(doc, "mode")) {
        if (!mode->is_string()) fail("mode: expected a string");
        const std::string s = mode->get<std::string>();
        if (s == "EXACT") {
            cfg.mode = Mode::Exact;
        } else if (s == "APPROX") {
            cfg.mode = Mode::Approx;
        } else {
            fail("mode: expected EXACT or APPROX");
        }
    }
    if (const json* seed = find(doc, "seed")) {
        if (seed->is_number_unsigned()) {
            cfg.seed = seed->get<std::uint64_t>();
        } else if (seed->is_number_integer() && seed->get<long long>() >= 0) {
            cfg.seed = static_cast<std::uint64_t>(seed->get<long long>());
        } else {
            fail("seed: expected a non-negative integer");
        }
    }

    if (const json* sweep = find(doc, "sweep")) cfg.sweep = parse_sweep(*sweep, cfg);
    if (const json* dyn = find(doc, "dynamics")) cfg.dynamics = parse_dynamics(*dyn, cfg);
    if (const json* sim = find(doc, "simulate")) cfg.simulate = parse_simulate(*sim, cfg);
    return cfg;
}

RunConfig load_run_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    std::string text = buffer.str();

    if (!overrides.empty()) {
        json doc;
        try {
            doc = json::parse(text);
        } catch (const json::parse_error& e) {
            const auto [line, col] = line_and_column(text, e.byte > 0 ? e.byte - 1 : 0);
            std::ostringstream oss;
            oss << "line " << line << ", column " << col << ": " << e.what();
            fail(oss.str());
        }
        for (const std::string& entry : overrides) {
            const std::size_t eq = entry.find('=');
            if (eq == std::string::npos || eq == 0) {
                fail("--set expects key=value, got '" + entry + "'");
            }
            const std::string dotted = entry.substr(0, eq);
            const std::string value_text = entry.substr(eq + 1);
            json value;
            try {
                value = json::parse(value_text);
            } catch (const json::parse_error&) {
                value = value_text;  // bare words become strings, e.g. snr=auto
            }
            json* node = &doc;
            std::size_t pos = 0;
            while (true) {
                const std::size_t dot = dotted.find('.', pos);
                const std::string part = dotted.substr(pos, dot - pos);
                if (part.empty()) fail("--set: empty path segment in '" + dotted + "'");
                if (!node->is_object()) {
                    fail("--set: '" + dotted + "' does not address an object member");
                }
                if (dot == std::string::npos) {
                    (*node)[part] = value;
                    break;
                }
                node = &(*node)[part];
                pos = dot + 1;
            }
        }
        text = doc.dump();
    }
    return parse_run_config(text);
}

}  // namespace lrace
