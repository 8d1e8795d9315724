#include "posminimax/cli.hpp"
#include "posminimax/io.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <random>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace posminimax;

namespace {

const std::string kData = POSMINIMAX_DATA_DIR;

std::string data(const std::string& name) { return kData + "/" + name; }

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("posminimax_test_" + name);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST(InstanceFile, DoubleTankParses) {
    const io::LoadedInstance loaded = io::load_instance(data("double_tank.json"));
    EXPECT_EQ(loaded.instance.name, "double_tank");
    EXPECT_EQ(loaded.instance.A, double_tank().A);
    EXPECT_EQ(loaded.instance.F, double_tank().F);
    ASSERT_TRUE(loaded.x0);
    EXPECT_EQ(*loaded.x0, Eigen::Vector2d(1.0, 1.0));
    EXPECT_EQ(loaded.digest.rfind("fnv1a64:", 0), 0u);
    EXPECT_EQ(loaded.digest.size(), 8u + 16u);
}

TEST(InstanceFile, ShortRowNamesKeyPath) {
    try {
        io::load_instance(data("malformed.json"));
        FAIL() << "expected InstanceFormatError";
    } catch (const io::InstanceFormatError& e) {
        EXPECT_NE(std::string(e.what()).find("A[1]"), std::string::npos) << e.what();
    }
}

TEST(InstanceFile, SyntaxErrorCarriesLine) {
    try {
        io::parse_instance("{\n  \"n\": 2,\n  \"m\": ]\n}");
        FAIL() << "expected InstanceFormatError";
    } catch (const io::InstanceFormatError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
}

TEST(InstanceFile, ValidationFailuresAreReported) {
    nlohmann::json doc = io::instance_to_json(double_tank());
    doc["E"][0][1] = -2.0;
    EXPECT_THROW(io::parse_instance(doc.dump()), io::InstanceFormatError);
    doc = io::instance_to_json(double_tank());
    doc["A"][0][0] = "x";
    try {
        io::parse_instance(doc.dump());
        FAIL();
    } catch (const io::InstanceFormatError& e) {
        EXPECT_NE(std::string(e.what()).find("A[0][0]"), std::string::npos);
    }
    doc = io::instance_to_json(double_tank());
    doc.erase("gamma");
    EXPECT_THROW(io::parse_instance(doc.dump()), io::InstanceFormatError);
}

TEST(InstanceFile, JsonRoundTrip) {
    const ProblemInstance inst = double_tank(1.5);
    const io::LoadedInstance back = io::parse_instance(io::instance_to_json(inst).dump());
    EXPECT_EQ(back.instance.A, inst.A);
    EXPECT_EQ(back.instance.gamma, inst.gamma);
    EXPECT_EQ(back.instance.name, inst.name);
}

TEST(Report, CertificateRoundTripsBitExactly) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    const ProblemInstance inst = double_tank();
    SynthesisCertificate cert = synthesize(inst);
    // Perturb to values with long decimal expansions.
    cert.p(0) = u(rng) / 3.0;
    cert.zeta(0) = std::nextafter(1.0, 2.0);
    cert.K(0, 0) = -1.0 / 7.0;
    const nlohmann::json report = io::make_report(inst, cert);
    const SynthesisCertificate back =
        io::certificate_from_report(nlohmann::json::parse(report.dump(2)));
    EXPECT_EQ(back.status, cert.status);
    EXPECT_EQ(back.p, cert.p);
    EXPECT_EQ(back.zeta, cert.zeta);
    EXPECT_EQ(back.K, cert.K);
    EXPECT_EQ(back.gamma_min, cert.gamma_min);
}

TEST(Report, CarriesExtras) {
    const ProblemInstance inst = double_tank();
    const SynthesisCertificate cert = synthesize(inst);
    io::ReportExtras extras;
    extras.input_digest = "fnv1a64:0000000000000000";
    extras.closed_loop_radius = spectral_radius(inst.A - inst.B * cert.K);
    extras.value_iteration = value_iterate(inst);
    const nlohmann::json report = io::make_report(inst, cert, extras);
    EXPECT_EQ(report["tool"], "posminimax");
    EXPECT_EQ(report["input_digest"], extras.input_digest);
    EXPECT_EQ(report["value_iteration"]["verdict"], "converged");
    EXPECT_EQ(report["lp"]["status"], "optimal");
    EXPECT_TRUE(report["hypotheses"]["positivity_ok"].get<bool>());
    EXPECT_LT(report["spectral_radius"]["upper"].get<double>(), 1.0);
}

TEST(TrajectoryCsv, HeaderAndShape) {
    const ProblemInstance inst = double_tank();
    const Trajectory traj =
        rollout(inst, inst.E, Eigen::Vector2d(1.0, 1.0), Eigen::MatrixXd::Zero(1, 3));
    std::ostringstream out;
    io::write_trajectory_csv(out, traj);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "t,x_1,x_2,u_1,w_1,partial_cost");
    int rows = 0;
    std::string last;
    while (std::getline(in, line)) {
        ++rows;
        last = line;
    }
    EXPECT_EQ(rows, 4);
    EXPECT_EQ(last.substr(0, 2), "3,");
    EXPECT_NE(last.find(",,,"), std::string::npos);
}

TEST(DisturbanceCsv, ReadsRowsAndSkipsHeader) {
    const auto path = temp_path("dist.csv");
    {
        std::ofstream f(path);
        f << "w_1,w_2\n0.5,0\n1,2.5\n";
    }
    const Eigen::MatrixXd W = io::read_disturbance_csv(path.string(), 2);
    ASSERT_EQ(W.cols(), 2);
    EXPECT_EQ(W(1, 1), 2.5);
    EXPECT_THROW(io::read_disturbance_csv(path.string(), 3), io::InstanceFormatError);
    std::filesystem::remove(path);
}

TEST(CliCheck, ExitCodes) {
    std::ostringstream out, err;
    EXPECT_EQ(cli::cmd_check(data("double_tank.json"), {}, out, err), cli::kOk);
    EXPECT_NE(out.str().find("0.8677"), std::string::npos) << out.str();
    EXPECT_EQ(cli::cmd_check(data("penalty_boundary.json"), {}, out, err),
              cli::kHypothesisViolation);
    std::ostringstream err2;
    EXPECT_EQ(cli::cmd_check(data("malformed.json"), {}, out, err2), cli::kInputError);
    EXPECT_NE(err2.str().find("A[1]"), std::string::npos);
    EXPECT_EQ(cli::cmd_check(data("does_not_exist.json"), {}, out, err), cli::kInputError);
}

TEST(CliSynth, DoubleTankReport) {
    const auto report_path = temp_path("synth_report.json");
    std::ostringstream out, err;
    cli::SynthOptions opts;
    opts.report_path = report_path.string();
    opts.with_iteration = true;
    ASSERT_EQ(cli::cmd_synth(data("double_tank.json"), opts, out, err), cli::kOk) << err.str();
    const auto report = nlohmann::json::parse(slurp(report_path));
    EXPECT_NEAR(report["p"][0].get<double>(), 13.09, 0.01);
    EXPECT_NEAR(report["p"][1].get<double>(), 28.41, 0.01);
    EXPECT_EQ(report["K"], nlohmann::json::parse("[[1.0, 0.0]]"));
    EXPECT_EQ(report["value_iteration"]["verdict"], "converged");
    std::filesystem::remove(report_path);
}

TEST(CliSynth, GammaOverrideAndFailureCodes) {
    const auto report_path = temp_path("synth_override.json");
    std::ostringstream out, err;
    cli::SynthOptions opts;
    opts.report_path = report_path.string();
    opts.gamma_override = {1.0};
    EXPECT_EQ(cli::cmd_synth(data("double_tank.json"), opts, out, err), cli::kGammaViolation);
    const auto report = nlohmann::json::parse(slurp(report_path));
    EXPECT_NEAR(report["gamma_min"][0].get<double>(), 1.32, 0.01);
    EXPECT_FALSE(report["gamma_ok"].get<bool>());

    cli::SynthOptions plain;
    EXPECT_EQ(cli::cmd_synth(data("scalar_unstable.json"), plain, out, err), cli::kNoFiniteValue);
    EXPECT_NE(out.str().find("unbounded"), std::string::npos);
    EXPECT_EQ(cli::cmd_synth(data("penalty_boundary.json"), plain, out, err),
              cli::kHypothesisViolation);
    cli::SynthOptions forced;
    forced.force = true;
    EXPECT_NE(cli::cmd_synth(data("penalty_boundary.json"), forced, out, err),
              cli::kHypothesisViolation);
    cli::SynthOptions wrong;
    wrong.gamma_override = {1.0, 2.0};
    EXPECT_EQ(cli::cmd_synth(data("double_tank.json"), wrong, out, err), cli::kInputError);
    std::filesystem::remove(report_path);
}

TEST(CliIterate, ExitCodes) {
    std::ostringstream out, err;
    EXPECT_EQ(cli::cmd_iterate(data("double_tank.json"), {}, out, err), cli::kOk);
    EXPECT_NE(out.str().find("13.09"), std::string::npos) << out.str();
    cli::IterateOptions low;
    low.gamma_override = {1.0};
    std::ostringstream out2;
    EXPECT_EQ(cli::cmd_iterate(data("double_tank.json"), low, out2, err), cli::kGammaViolation);
    EXPECT_NE(out2.str().find("iteration 33"), std::string::npos) << out2.str();
    EXPECT_EQ(cli::cmd_iterate(data("scalar_unstable.json"), {}, out, err), cli::kNoFiniteValue);
    cli::IterateOptions short_run;
    short_run.max_iter = 5;
    EXPECT_EQ(cli::cmd_iterate(data("double_tank.json"), short_run, out, err), cli::kSolverLimit);
}

TEST(CliSimulate, CsvIsDeterministicAndBounded) {
    const auto a = temp_path("sim_a.csv");
    const auto b = temp_path("sim_b.csv");
    std::ostringstream out, err;
    cli::SimulateOptions opts;
    opts.disturbance = "random";
    opts.seed = 99;
    opts.horizon = 300;
    opts.csv_path = a.string();
    ASSERT_EQ(cli::cmd_simulate(data("double_tank.json"), opts, out, err), cli::kOk) << err.str();
    opts.csv_path = b.string();
    ASSERT_EQ(cli::cmd_simulate(data("double_tank.json"), opts, out, err), cli::kOk);
    EXPECT_EQ(slurp(a), slurp(b));
    EXPECT_EQ(slurp(a).substr(0, slurp(a).find('\n')), "t,x_1,x_2,u_1,w_1,partial_cost");
    std::filesystem::remove(a);
    std::filesystem::remove(b);

    cli::SimulateOptions zero;
    zero.horizon = 400;
    zero.csv_path = "-";
    std::ostringstream csv;
    ASSERT_EQ(cli::cmd_simulate(data("double_tank.json"), zero, csv, err), cli::kOk);
    const std::string text = csv.str();
    const std::string last = text.substr(text.rfind('\n', text.size() - 2) + 1);
    const double final_cost = std::stod(last.substr(last.rfind(',') + 1));
    EXPECT_LE(final_cost, 41.49917543);
    EXPECT_GT(final_cost, 40.0);
}

TEST(CliSimulate, AdversarialBelowThreshold) {
    std::ostringstream out, err;
    cli::SimulateOptions opts;
    opts.disturbance = "adversarial";
    opts.gamma_override = {1.0};
    EXPECT_EQ(cli::cmd_simulate(data("double_tank.json"), opts, out, err), cli::kGammaViolation);
    EXPECT_NE(out.str().find("T_exceed"), std::string::npos) << out.str() << err.str();
    EXPECT_EQ(cli::cmd_simulate(data("scalar_unstable.json"), {}, out, err), cli::kNoFiniteValue);
}
