#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace posminimax::cli {

/// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kInputError = 1,
    kHypothesisViolation = 2,
    kGammaViolation = 3,
    kNoFiniteValue = 4,
    kSolverLimit = 5,
};

struct CheckOptions {
    double strict_eps = 0.0;
};

struct SynthOptions {
    bool force = false;
    std::vector<double> gamma_override;  // one value broadcasts to every component
    std::string report_path;             // "-" writes the JSON report to stdout
    double tol = 1e-8;
    bool with_iteration = false;
};

struct IterateOptions {
    bool force = false;
    std::vector<double> gamma_override;
    double tol = 1e-10;
    std::size_t max_iter = 100000;
    double divergence_bound = 1e12;
};

struct SimulateOptions {
    bool force = false;
    std::vector<double> gamma_override;
    long horizon = 400;
    std::uint64_t seed = 0;
    /// "zero", "random", "adversarial" or a path to a disturbance CSV.
    std::string disturbance = "zero";
    double amplitude = 1.0;
    std::string csv_path;  // "-" writes to stdout
};

int cmd_check(const std::string& path, const CheckOptions& opts, std::ostream& out,
              std::ostream& err);
int cmd_synth(const std::string& path, const SynthOptions& opts, std::ostream& out,
              std::ostream& err);
int cmd_iterate(const std::string& path, const IterateOptions& opts, std::ostream& out,
                std::ostream& err);
int cmd_simulate(const std::string& path, const SimulateOptions& opts, std::ostream& out,
                 std::ostream& err);

}  // namespace posminimax::cli
