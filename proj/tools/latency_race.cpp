#include <iostream>

#include <CLI11.hpp>

#include "lrace/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"latency-race: solver and simulator for the two-firm decoding race"};
    app.require_subcommand(1);

    lrace::CliOptions options;
    for (const auto& [name, description] :
         {std::pair{"solve", "classify the equilibrium set for one configuration"},
          std::pair{"sweep", "classify equilibria along a one-axis parameter grid (CSV)"},
          std::pair{"dynamics", "trace best-response dynamics (JSON lines)"},
          std::pair{"simulate", "Monte Carlo race validation against the analytic model"}}) {
        CLI::App* sub = app.add_subcommand(name, description);
        sub->add_option("--config", options.config_path, "JSON configuration file")->required();
        sub->add_option("--set", options.overrides,
                        "dotted-path override, e.g. --set params.c=0.25");
        sub->add_option("--jobs", options.jobs, "worker count for sweeps (default: all cores)");
        sub->add_option("--out", options.out_path, "write output to a file instead of stdout");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            return app.exit(e);
        }
        app.exit(e);
        return 2;
    }

    options.command = app.get_subcommands().front()->get_name();
    return lrace::run_cli(options, std::cout, std::cerr);
}
