#include "posminimax/cli.hpp"
#include "posminimax/io.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    using namespace posminimax::cli;

    CLI::App app{"Minimax-optimal state feedback for positive linear systems"};
    app.set_version_flag("--version", posminimax::io::version());
    app.require_subcommand(1);

    std::string path;
    CheckOptions check_opts;
    auto* check = app.add_subcommand("check", "Verify A >= |B|E and s > E'|r|");
    check->add_option("instance", path, "Instance JSON file")->required();
    check->add_option("--strict-eps", check_opts.strict_eps, "Margin required for s > E'|r|");

    SynthOptions synth_opts;
    auto* synth = app.add_subcommand("synth", "Solve the synthesis LP and emit a certificate");
    synth->add_option("instance", path, "Instance JSON file")->required();
    synth->add_flag("--force", synth_opts.force, "Continue when hypotheses fail");
    synth->add_option("--gamma-override", synth_opts.gamma_override,
                      "Replace gamma (one value broadcasts)")
        ->delimiter(',');
    synth->add_option("--report", synth_opts.report_path, "Write JSON report ('-' for stdout)");
    synth->add_option("--tol", synth_opts.tol, "Feasibility tolerance");
    synth->add_flag("--iterate", synth_opts.with_iteration,
                    "Include a value-iteration cross-check in the report");

    IterateOptions iter_opts;
    auto* iterate = app.add_subcommand("iterate", "Run value iteration from p = 0");
    iterate->add_option("instance", path, "Instance JSON file")->required();
    iterate->add_flag("--force", iter_opts.force, "Continue when hypotheses fail");
    iterate->add_option("--gamma-override", iter_opts.gamma_override, "Replace gamma")
        ->delimiter(',');
    iterate->add_option("--tol", iter_opts.tol, "Convergence tolerance on |p_k - p_k-1|");
    iterate->add_option("--max-iter", iter_opts.max_iter, "Iteration limit");
    iterate->add_option("--divergence-bound", iter_opts.divergence_bound,
                        "Declare divergence when |p_k| exceeds this");

    SimulateOptions sim_opts;
    auto* simulate = app.add_subcommand("simulate", "Roll out the synthesized closed loop");
    simulate->add_option("instance", path, "Instance JSON file")->required();
    simulate->add_flag("--force", sim_opts.force, "Continue when hypotheses fail");
    simulate->add_option("--gamma-override", sim_opts.gamma_override, "Replace gamma")
        ->delimiter(',');
    simulate->add_option("--horizon", sim_opts.horizon, "Number of steps");
    simulate->add_option("--seed", sim_opts.seed, "Seed for --disturbance random");
    simulate->add_option("--disturbance", sim_opts.disturbance,
                         "zero | random | adversarial | <csv file>");
    simulate->add_option("--amplitude", sim_opts.amplitude, "Upper bound of random disturbances");
    simulate->add_option("--csv", sim_opts.csv_path, "Write trajectory CSV ('-' for stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kInputError;
    }

    if (*check) return cmd_check(path, check_opts, std::cout, std::cerr);
    if (*synth) return cmd_synth(path, synth_opts, std::cout, std::cerr);
    if (*iterate) return cmd_iterate(path, iter_opts, std::cout, std::cerr);
    return cmd_simulate(path, sim_opts, std::cout, std::cerr);
}
