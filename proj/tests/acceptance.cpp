// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include "posminimax/bellman.hpp"
#include "posminimax/cli.hpp"
#include "posminimax/io.hpp"
#include "posminimax/simulate.hpp"
#include "posminimax/synthesis.hpp"

#include "test_support.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace posminimax;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
};

fs::path scratch(const std::string& name) {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "posminimax_acceptance";
        fs::create_directories(d);
        return d;
    }();
    return dir / name;
}

std::string write_instance(const ProblemInstance& inst, const std::string& name) {
    const fs::path p = scratch(name + ".json");
    std::ofstream(p) << io::instance_to_json(inst).dump(2);
    return p.string();
}

struct Synthesized {
    ProblemInstance instance;
    SynthesisCertificate cert;
};

// Shared suite: 100 seeded random instances with gamma = F'p_LP + margin.
std::vector<Synthesized> random_suite() {
    std::vector<Synthesized> suite;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        ProblemInstance inst = fixtures::random_instance(20240000 + seed);
        const SynthesisCertificate base = synthesize(inst);
        inst.gamma = base.gamma_min.array() + 0.1;
        suite.push_back({inst, synthesize(inst)});
    }
    return suite;
}

const std::string kData = POSMINIMAX_DATA_DIR;

Outcome criterion1() {
    Outcome o;
    const auto t0 = Clock::now();
    const fs::path report_path = scratch("double_tank_report.json");
    cli::SynthOptions opts;
    opts.report_path = report_path.string();
    std::ostringstream out, err;
    const int code = cli::cmd_synth(kData + "/double_tank.json", opts, out, err);
    const double elapsed = seconds_since(t0);
    if (code != cli::kOk) {
        o.fail("exit code " + std::to_string(code));
        return o;
    }
    std::ifstream in(report_path);
    const nlohmann::json report = nlohmann::json::parse(in);
    const SynthesisCertificate cert = io::certificate_from_report(report);
    auto near = [](double a, double b) { return std::abs(a - b) <= 0.01; };
    if (!near(cert.p(0), 13.09) || !near(cert.p(1), 28.41)) o.fail("p off");
    if (!near(cert.zeta(0), 1.52)) o.fail("zeta off");
    if (!near(cert.gamma_min(0), 1.32)) o.fail("gamma_min off");
    Eigen::MatrixXd E(1, 2);
    E << 1.0, 0.0;
    if (cert.K != E) o.fail("K != E");
    if (elapsed >= 1.0) o.fail("runtime " + std::to_string(elapsed) + " s");
    char buf[160];
    std::snprintf(buf, sizeof buf, "p=[%.4f, %.4f] zeta=%.4f gamma_min=%.4f K=[%g, %g] %.3fs",
                  cert.p(0), cert.p(1), cert.zeta(0), cert.gamma_min(0), cert.K(0, 0),
                  cert.K(0, 1), elapsed);
    if (o.pass) o.detail = buf;
    return o;
}

Outcome criterion2(const std::vector<Synthesized>& suite) {
    Outcome o;
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (const auto& [inst, cert] : suite) {
        if (cert.status != SynthesisStatus::Synthesized) {
            o.fail(inst.name + " not synthesized");
            continue;
        }
        ValueIterationOptions vi;
        vi.keep_iterates = false;
        const ValueIterationTrace trace = value_iterate(inst, vi);
        if (trace.verdict != IterationVerdict::Converged) {
            o.fail(inst.name + " value iteration " + to_string(trace.verdict));
            continue;
        }
        const Eigen::ArrayXd rel =
            (trace.final_iterate() - cert.p).array().abs() / cert.p.array().abs();
        worst = std::max(worst, rel.maxCoeff());
        if (rel.maxCoeff() > 1e-6) o.fail(inst.name + " rel gap " + std::to_string(rel.maxCoeff()));
    }
    const double elapsed = seconds_since(t0);
    if (elapsed >= 30.0) o.fail("runtime " + std::to_string(elapsed) + " s");
    if (o.pass) {
        char buf[120];
        std::snprintf(buf, sizeof buf, "100 instances, worst relative gap %.2e, %.2fs", worst,
                      elapsed);
        o.detail = buf;
    }
    return o;
}

Outcome criterion3(const std::vector<Synthesized>& suite) {
    Outcome o;
    double worst = -1e300;
    for (const auto& [inst, cert] : suite) {
        if (cert.status != SynthesisStatus::Synthesized) continue;
        const double r = bellman_residual(cert.p, inst).maxCoeff();
        worst = std::max(worst, r);
        if (r > 1e-8) o.fail(inst.name + " residual " + std::to_string(r));
    }
    if (o.pass) {
        char buf[80];
        std::snprintf(buf, sizeof buf, "max residual %.2e", worst);
        o.detail = buf;
    }
    return o;
}

Outcome criterion4(const std::vector<Synthesized>& suite, double& min_state) {
    Outcome o;
    std::size_t max_t = 0;
    for (std::size_t k = 0; k < 20; ++k) {
        ProblemInstance inst = suite[k].instance;
        const Eigen::VectorXd gmin = suite[k].cert.gamma_min;

        inst.gamma = gmin.array() - 0.01;
        const std::string low_path = write_instance(inst, inst.name + "_low");
        std::ostringstream out, err;
        const int low_code = cli::cmd_iterate(low_path, {}, out, err);
        if (low_code != cli::kGammaViolation) {
            o.fail(inst.name + ": iterate exit " + std::to_string(low_code) + " with gamma lowered");
        }

        const SynthesisCertificate cert = synthesize(inst);
        const Eigen::VectorXd x0 = Eigen::VectorXd::Ones(inst.n());
        const double bound = 10.0 * cert.p.dot(x0);
        try {
            const UnboundednessWitness w = demonstrate_unboundedness(inst, cert.K, x0, bound);
            const Eigen::Index T = static_cast<Eigen::Index>(w.t_exceed);
            const Trajectory traj =
                rollout(inst, cert.K, x0, w.disturbance.replicate(1, T));
            if (!(traj.partial_costs(T) > bound)) o.fail(inst.name + ": rollout below bound");
            min_state = std::min(min_state, traj.states.minCoeff());
            max_t = std::max(max_t, w.t_exceed);
        } catch (const std::exception& e) {
            o.fail(inst.name + ": " + e.what());
        }

        inst.gamma = gmin;
        const std::string eq_path = write_instance(inst, inst.name + "_eq");
        const int eq_code = cli::cmd_iterate(eq_path, {}, out, err);
        if (eq_code != cli::kOk) {
            o.fail(inst.name + ": iterate exit " + std::to_string(eq_code) + " at gamma_min");
        }
    }
    if (o.pass) o.detail = "20 instances, longest T_exceed " + std::to_string(max_t);
    return o;
}

Outcome criterion5(const std::vector<Synthesized>& suite, double& min_state) {
    Outcome o;
    std::vector<Synthesized> cases;
    cases.push_back({double_tank(), synthesize(double_tank())});
    for (std::size_t k = 0; k < 20; ++k) cases.push_back(suite[k]);

    double worst_ratio = 0.0;
    std::uint64_t stream = 0;
    for (const auto& [inst, cert] : cases) {
        if (!cert.gamma_ok) o.fail(inst.name + ": gamma below threshold");
        const Eigen::VectorXd x0 = Eigen::VectorXd::Ones(inst.n());
        const double value = cert.p.dot(x0);
        for (int j = 0; j < 50; ++j) {
            const Eigen::MatrixXd W = random_disturbances(inst.l(), 2000, 7000 + stream++);
            const Trajectory traj = rollout(inst, cert.K, x0, W);
            const double peak = traj.partial_costs.maxCoeff();
            worst_ratio = std::max(worst_ratio, peak / value);
            if (peak > value * (1.0 + 1e-6)) o.fail(inst.name + ": partial cost above p'x0");
            min_state = std::min(min_state, traj.states.minCoeff());
        }
    }
    if (o.pass) {
        char buf[120];
        std::snprintf(buf, sizeof buf, "21 instances x 50 sequences, max c_T/p'x0 = %.6f",
                      worst_ratio);
        o.detail = buf;
    }
    return o;
}

Outcome criterion6(const std::vector<Synthesized>& suite) {
    Outcome o;
    std::mt19937_64 rng(606);
    std::size_t stable = 0;
    double worst = 1e300;
    for (const auto& [inst, cert] : suite) {
        for (int g = 0; g < 100; ++g) {
            const Eigen::MatrixXd L = fixtures::random_feasible_gain(inst, rng);
            const ClosedLoopCost cl = closed_loop_cost_vector(inst, L);
            if (!cl.stable) continue;
            ++stable;
            const double gap = (cl.p - cert.p).minCoeff();
            worst = std::min(worst, gap);
            if (gap < -1e-6) o.fail(inst.name + ": p_L below p by " + std::to_string(-gap));
        }
    }
    if (stable == 0) o.fail("no stable gains sampled");
    if (o.pass) {
        char buf[120];
        std::snprintf(buf, sizeof buf, "%zu stable gains, min(p_L - p) = %.3e", stable, worst);
        o.detail = buf;
    }
    return o;
}

Outcome criterion7(const std::vector<Synthesized>& suite, double min_state) {
    Outcome o;
    double worst_upper = 0.0;
    auto check = [&](const ProblemInstance& inst, const SynthesisCertificate& cert) {
        if (cert.status != SynthesisStatus::Synthesized) return;
        const SpectralRadius rho = spectral_radius(inst.A - inst.B * cert.K);
        worst_upper = std::max(worst_upper, rho.upper);
        if (!(rho.upper < 1.0 - 1e-9)) o.fail(inst.name + ": rho upper bound " + std::to_string(rho.upper));
    };
    check(double_tank(), synthesize(double_tank()));
    for (const auto& [inst, cert] : suite) check(inst, cert);
    if (min_state < -1e-9) o.fail("rollout state " + std::to_string(min_state));
    if (o.pass) {
        char buf[120];
        std::snprintf(buf, sizeof buf, "max rho upper %.6f, min rollout state %.3e", worst_upper,
                      min_state);
        o.detail = buf;
    }
    return o;
}

Outcome criterion8() {
    Outcome o;
    int optimal = 0, infeasible = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const lp::LpProblem p = fixtures::random_bounded_lp(880000 + seed);
        const auto oracle = fixtures::enumerate_vertices(p);
        const auto sol = lp::solve(p);
        if (!oracle.feasible) {
            ++infeasible;
            if (sol.status != lp::LpStatus::Infeasible) o.fail("seed " + std::to_string(seed) + ": expected infeasible");
            continue;
        }
        ++optimal;
        if (sol.status != lp::LpStatus::Optimal) {
            o.fail("seed " + std::to_string(seed) + ": " + lp::to_string(sol.status));
        } else if (std::abs(sol.objective - oracle.objective) > 1e-9) {
            o.fail("seed " + std::to_string(seed) + ": objective gap");
        }
    }
    lp::LpProblem unbounded{Eigen::VectorXd::Ones(1), -Eigen::MatrixXd::Ones(1, 1),
                            Eigen::VectorXd::Ones(1)};
    const auto u = lp::solve(unbounded);
    if (u.status != lp::LpStatus::Unbounded || u.ray.size() != 1 || u.ray(0) != 1.0) {
        o.fail("unbounded canary");
    }
    lp::LpProblem infeasible_lp{Eigen::VectorXd::Ones(1), Eigen::MatrixXd::Ones(1, 1),
                                -Eigen::VectorXd::Ones(1)};
    if (lp::solve(infeasible_lp).status != lp::LpStatus::Infeasible) o.fail("infeasible canary");
    if (o.pass) {
        o.detail = std::to_string(optimal) + " optimal + " + std::to_string(infeasible) +
                   " infeasible LPs match enumeration; canaries flagged";
    }
    return o;
}

}  // namespace

int main() {
    int failures = 0;
    auto report = [&](int id, const char* title, const Outcome& o) {
        std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << id << ". " << title << ": " << o.detail
                  << std::endl;
        if (!o.pass) ++failures;
    };

    report(1, "double-tank reproduction", criterion1());
    const std::vector<Synthesized> suite = random_suite();
    double min_state = 0.0;
    report(2, "LP / value-iteration equivalence", criterion2(suite));
    report(3, "Bellman feasibility", criterion3(suite));
    report(4, "gamma threshold iff-condition", criterion4(suite, min_state));
    report(5, "cost bound under random disturbances", criterion5(suite, min_state));
    report(6, "optimality over sampled linear gains", criterion6(suite));
    report(7, "positivity and stability", criterion7(suite, min_state));
    report(8, "simplex vs vertex enumeration", criterion8());

    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
