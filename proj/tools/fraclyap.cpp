#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "app.hpp"

int main(int argc, char** argv) {
    CLI::App cli{"fraclyap: fractional operators, Lyapunov estimates and SEIR stability"};
    cli.require_subcommand(1);

    std::string config;
    std::string out;
    fraclyap::app::RunOptions opts;
    if (const char* seed = std::getenv("FRACLYAP_SEED")) {
        try {
            opts.seed = std::stoull(seed);
        } catch (const std::exception&) {
            std::cerr << "config error: FRACLYAP_SEED must be a non-negative integer\n";
            return fraclyap::app::kExitConfig;
        }
    }

    const char* commands[][2] = {
        {"simulate", "integrate the SEIR model and write a t,S,E,I,R CSV"},
        {"verify", "check fractional Lyapunov estimates over a trajectory corpus (JSON)"},
        {"equilibria", "report R0 and the equilibria (JSON)"},
        {"stability", "simulate a seeded corpus of initial states to the attractor (JSON)"},
        {"sweep", "stability over a parameter axis (CSV)"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = cli.add_subcommand(name, help);
        sub->add_option("--config", config, "JSON config file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out, "output file (default: stdout)");
        sub->add_option("--refine", opts.refine, "divide every dt by k")
            ->check(CLI::PositiveNumber);
        if (std::string(name) == "verify") {
            sub->add_flag("--debug-swap-sides", opts.swap_sides,
                          "compare rhs <= lhs instead (harness self-test)");
        }
    }

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = cli.exit(e);
        return code == 0 ? 0 : fraclyap::app::kExitConfig;
    }
    const std::string command = cli.get_subcommands().front()->get_name();
    return fraclyap::app::run(command, config, out, opts, std::cout, std::cerr);
}
