#include "posminimax/cli.hpp"

#include "posminimax/bellman.hpp"
#include "posminimax/io.hpp"
#include "posminimax/simulate.hpp"
#include "posminimax/synthesis.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <fstream>
#include <iostream>
#include <sstream>

namespace posminimax::cli {

namespace {

std::string fmt_vec(const Eigen::VectorXd& v) {
    std::string s = "[";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += fmt::format("{:.4g}", v(i));
    }
    return s + "]";
}

std::string fmt_mat(const Eigen::MatrixXd& M) {
    std::string s = "[";
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        if (i) s += ", ";
        s += fmt_vec(M.row(i).transpose());
    }
    return s + "]";
}

// Loads, validates and applies --gamma-override. Returns nullopt after
// reporting the problem on `err`.
std::optional<io::LoadedInstance> load(const std::string& path,
                                       const std::vector<double>& gamma_override,
                                       std::ostream& err) {
    try {
        io::LoadedInstance loaded = io::load_instance(path);
        if (!gamma_override.empty()) {
            ProblemInstance& inst = loaded.instance;
            if (gamma_override.size() == 1) {
                inst.gamma.setConstant(gamma_override.front());
            } else if (static_cast<Eigen::Index>(gamma_override.size()) == inst.l()) {
                inst.gamma = Eigen::Map<const Eigen::VectorXd>(
                    gamma_override.data(), static_cast<Eigen::Index>(gamma_override.size()));
            } else {
                fmt::print(err, "error: --gamma-override needs 1 or {} values, got {}\n",
                           inst.l(), gamma_override.size());
                return std::nullopt;
            }
            if (const auto errors = validate(inst); !errors.empty()) {
                fmt::print(err, "error: {}\n", errors.front().describe());
                return std::nullopt;
            }
        }
        return loaded;
    } catch (const std::exception& e) {
        fmt::print(err, "error: {}: {}\n", path, e.what());
        return std::nullopt;
    }
}

void print_hypotheses(std::ostream& out, const HypothesisReport& rep) {
    fmt::print(out, "A - |B|E  = {}  ({})\n", fmt_mat(rep.positivity_margin),
               rep.positivity_ok ? "ok" : "VIOLATED");
    fmt::print(out, "s - E'|r| = {}  ({})\n", fmt_vec(rep.penalty_margin),
               rep.penalty_ok ? "ok" : "VIOLATED");
    for (const auto& v : rep.violations) {
        if (v.col >= 0) {
            fmt::print(out, "  violation {} at ({}, {}): {:.4g}\n", to_string(v.id), v.row,
                       v.col, v.value);
        } else {
            fmt::print(out, "  violation {} at {}: {:.4g}\n", to_string(v.id), v.row, v.value);
        }
    }
}

void print_certificate(std::ostream& out, const SynthesisCertificate& cert) {
    fmt::print(out, "status    : {}\n", to_string(cert.status));
    fmt::print(out, "lp        : {} ({} pivots)\n", lp::to_string(cert.lp_status),
               cert.lp_iterations);
    if (cert.status == SynthesisStatus::NoFiniteValue) {
        fmt::print(out, "note      : LP unbounded along ray {}; no finite value\n",
                   fmt_vec(cert.unbounded_ray));
    }
    if (cert.status != SynthesisStatus::Synthesized) return;
    fmt::print(out, "p         : {}\n", fmt_vec(cert.p));
    fmt::print(out, "zeta      : {}\n", fmt_vec(cert.zeta));
    fmt::print(out, "gamma_min : {}  (gamma {})\n", fmt_vec(cert.gamma_min),
               cert.gamma_ok ? "ok" : "BELOW THRESHOLD");
    fmt::print(out, "K         : {}\n", fmt_mat(cert.K));
    fmt::print(out, "residual  : {}\n", fmt_vec(cert.bellman_residual));
}

bool write_text(const std::string& path, const std::string& text, std::ostream& out,
                std::ostream& err) {
    if (path == "-") {
        out << text;
        return true;
    }
    std::ofstream f(path);
    if (!f) {
        fmt::print(err, "error: cannot write {}\n", path);
        return false;
    }
    f << text;
    return static_cast<bool>(f);
}

struct SynthOutcome {
    int code = kOk;
    SynthesisCertificate cert;
};

SynthOutcome run_synthesis(const ProblemInstance& inst, bool force, double tol,
                           std::ostream& out, std::ostream& err) {
    SynthOutcome res;
    SynthesisOptions opts;
    opts.force = force;
    opts.feas_tol = tol;
    opts.lp.feas_tol = tol;
    try {
        res.cert = synthesize(inst, opts);
    } catch (const lp::MaxPivotsExceeded& e) {
        fmt::print(err, "error: {}\n", e.what());
        res.code = kSolverLimit;
        return res;
    }
    switch (res.cert.status) {
        case SynthesisStatus::HypothesesViolated:
            print_hypotheses(out, res.cert.hypotheses);
            fmt::print(err, "error: hypotheses violated (use --force to continue)\n");
            res.code = kHypothesisViolation;
            break;
        case SynthesisStatus::NoFiniteValue:
            res.code = kNoFiniteValue;
            break;
        case SynthesisStatus::SolverDefect:
            fmt::print(err, "error: synthesis LP reported infeasible (solver defect)\n");
            res.code = kSolverLimit;
            break;
        case SynthesisStatus::Synthesized:
            res.code = res.cert.gamma_ok ? kOk : kGammaViolation;
            break;
    }
    return res;
}

std::optional<SpectralRadius> closed_loop_radius(const ProblemInstance& inst,
                                                 const Eigen::MatrixXd& K) {
    const Eigen::MatrixXd closed = inst.A - inst.B * K;
    if ((closed.array() < 0.0).any()) return std::nullopt;
    return spectral_radius(closed);
}

}  // namespace

int cmd_check(const std::string& path, const CheckOptions& opts, std::ostream& out,
              std::ostream& err) {
    const auto loaded = load(path, {}, err);
    if (!loaded) return kInputError;
    const HypothesisReport rep = check_hypotheses(loaded->instance, opts.strict_eps);
    print_hypotheses(out, rep);
    return rep.ok() ? kOk : kHypothesisViolation;
}

int cmd_synth(const std::string& path, const SynthOptions& opts, std::ostream& out,
              std::ostream& err) {
    const auto loaded = load(path, opts.gamma_override, err);
    if (!loaded) return kInputError;
    const ProblemInstance& inst = loaded->instance;

    SynthOutcome res = run_synthesis(inst, opts.force, opts.tol, out, err);
    if (res.code == kSolverLimit) return res.code;

    io::ReportExtras extras;
    extras.input_digest = loaded->digest;
    if (res.cert.status == SynthesisStatus::Synthesized) {
        extras.closed_loop_radius = closed_loop_radius(inst, res.cert.K);
        if (opts.with_iteration) {
            ValueIterationOptions vi;
            vi.keep_iterates = false;
            vi.feas_tol = opts.tol;
            extras.value_iteration = value_iterate(inst, vi);
        }
    }
    if (opts.report_path != "-") {
        print_certificate(out, res.cert);
        if (extras.closed_loop_radius) {
            fmt::print(out, "rho(A-BK) : [{:.4g}, {:.4g}]\n", extras.closed_loop_radius->lower,
                       extras.closed_loop_radius->upper);
        }
        if (extras.value_iteration) {
            fmt::print(out, "iteration : {} after {} steps\n",
                       to_string(extras.value_iteration->verdict),
                       extras.value_iteration->iterations);
        }
    }
    if (!opts.report_path.empty() && res.cert.status != SynthesisStatus::HypothesesViolated) {
        const std::string text = io::make_report(inst, res.cert, extras).dump(2) + "\n";
        if (!write_text(opts.report_path, text, out, err)) return kInputError;
    }
    return res.code;
}

int cmd_iterate(const std::string& path, const IterateOptions& opts, std::ostream& out,
                std::ostream& err) {
    const auto loaded = load(path, opts.gamma_override, err);
    if (!loaded) return kInputError;
    const ProblemInstance& inst = loaded->instance;

    const HypothesisReport rep = check_hypotheses(inst);
    if (!rep.ok() && !opts.force) {
        print_hypotheses(out, rep);
        fmt::print(err, "error: hypotheses violated (use --force to continue)\n");
        return kHypothesisViolation;
    }

    ValueIterationOptions vi;
    vi.tol = opts.tol;
    vi.max_iter = opts.max_iter;
    vi.divergence_bound = opts.divergence_bound;
    vi.keep_iterates = false;
    const ValueIterationTrace trace = value_iterate(inst, vi);

    fmt::print(out, "verdict     : {}\n", to_string(trace.verdict));
    fmt::print(out, "iterations  : {}\n", trace.iterations);
    fmt::print(out, "final_delta : {:.4g}\n", trace.final_delta);
    fmt::print(out, "final p     : {}\n", fmt_vec(trace.final_iterate()));
    switch (trace.verdict) {
        case IterationVerdict::Converged:
            return kOk;
        case IterationVerdict::GammaViolated:
            fmt::print(out, "violated at : iteration {} (component {}, F'p - gamma = {:.4g})\n",
                       trace.violated_at, trace.violation->component, trace.violation->excess);
            return kGammaViolation;
        case IterationVerdict::Diverging:
            return kNoFiniteValue;
        case IterationVerdict::MaxIterExceeded:
            return kSolverLimit;
    }
    return kSolverLimit;
}

int cmd_simulate(const std::string& path, const SimulateOptions& opts, std::ostream& out,
                 std::ostream& err) {
    const auto loaded = load(path, opts.gamma_override, err);
    if (!loaded) return kInputError;
    const ProblemInstance& inst = loaded->instance;
    if (opts.horizon < 0) {
        fmt::print(err, "error: --horizon must be nonnegative\n");
        return kInputError;
    }

    SynthOutcome res = run_synthesis(inst, opts.force, 1e-8, out, err);
    if (res.code == kHypothesisViolation || res.code == kSolverLimit) return res.code;
    if (res.cert.status != SynthesisStatus::Synthesized) {
        print_certificate(out, res.cert);
        fmt::print(err, "error: synthesis failed; nothing to simulate\n");
        return kNoFiniteValue;
    }
    const SynthesisCertificate& cert = res.cert;
    const Eigen::VectorXd x0 = loaded->x0.value_or(Eigen::VectorXd::Ones(inst.n()));
    const double value = cert.p.dot(x0);

    Eigen::MatrixXd W;
    std::optional<UnboundednessWitness> witness;
    try {
        if (opts.disturbance == "zero") {
            W = Eigen::MatrixXd::Zero(inst.l(), opts.horizon);
        } else if (opts.disturbance == "random") {
            W = random_disturbances(inst.l(), opts.horizon, opts.seed, opts.amplitude);
        } else if (opts.disturbance == "adversarial") {
            if (cert.gamma_ok) {
                // w = 0 maximizes (F'p - gamma)'w when gamma >= F'p.
                W = Eigen::MatrixXd::Zero(inst.l(), opts.horizon);
            } else {
                witness = demonstrate_unboundedness(inst, cert.K, x0, 10.0 * value);
                W = witness->disturbance.replicate(
                    1, static_cast<Eigen::Index>(witness->t_exceed));
            }
        } else {
            W = io::read_disturbance_csv(opts.disturbance, inst.l());
            if (opts.horizon < W.cols()) W.conservativeResize(Eigen::NoChange, opts.horizon);
        }
    } catch (const UnboundednessNotShown& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kSolverLimit;
    } catch (const std::exception& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kInputError;
    }

    Trajectory traj;
    try {
        traj = rollout(inst, cert.K, x0, W);
    } catch (const std::exception& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kInputError;
    }

    if (opts.csv_path != "-") {
        fmt::print(out, "horizon       : {}\n", traj.horizon());
        fmt::print(out, "p'x0          : {:.4g}\n", value);
        fmt::print(out, "final cost    : {:.4g}\n", traj.partial_costs(traj.horizon()));
        fmt::print(out, "min state     : {:.4g}\n", traj.states.minCoeff());
        if (witness) {
            fmt::print(out, "adversary     : w = e_{} (growth {:.4g} per step)\n",
                       witness->component + 1, witness->growth_rate);
            fmt::print(out, "T_exceed      : {} (cost {:.4g} > {:.4g})\n", witness->t_exceed,
                       witness->cost_at_exceed, 10.0 * value);
        }
    }
    if (!opts.csv_path.empty()) {
        std::ostringstream csv;
        io::write_trajectory_csv(csv, traj);
        if (!write_text(opts.csv_path, csv.str(), out, err)) return kInputError;
    }
    return cert.gamma_ok ? kOk : kGammaViolation;
}

}  // namespace posminimax::cli
