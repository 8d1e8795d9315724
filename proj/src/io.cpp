#include "posminimax/io.hpp"

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#ifndef POSMINIMAX_VERSION
#define POSMINIMAX_VERSION "0.0.0"
#endif

namespace posminimax::io {

using nlohmann::json;

namespace {

double number_at(const json& j, const std::string& path) {
    if (!j.is_number()) throw InstanceFormatError(path + ": expected a number");
    return j.get<double>();
}

Eigen::VectorXd parse_vector(const json& doc, const std::string& key, Eigen::Index expected) {
    if (!doc.contains(key)) throw InstanceFormatError(key + ": missing key");
    const json& arr = doc.at(key);
    if (!arr.is_array()) throw InstanceFormatError(key + ": expected an array");
    if (static_cast<Eigen::Index>(arr.size()) != expected) {
        throw InstanceFormatError(key + ": expected " + std::to_string(expected) +
                                  " entries, got " + std::to_string(arr.size()));
    }
    Eigen::VectorXd v(expected);
    for (Eigen::Index i = 0; i < expected; ++i) {
        v(i) = number_at(arr[static_cast<std::size_t>(i)], key + "[" + std::to_string(i) + "]");
    }
    return v;
}

Eigen::MatrixXd parse_matrix(const json& doc, const std::string& key, Eigen::Index rows,
                             Eigen::Index cols) {
    if (!doc.contains(key)) throw InstanceFormatError(key + ": missing key");
    const json& arr = doc.at(key);
    if (!arr.is_array()) throw InstanceFormatError(key + ": expected a nested array");
    if (static_cast<Eigen::Index>(arr.size()) != rows) {
        throw InstanceFormatError(key + ": expected " + std::to_string(rows) + " rows, got " +
                                  std::to_string(arr.size()));
    }
    Eigen::MatrixXd M(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const std::string row_path = key + "[" + std::to_string(i) + "]";
        const json& row = arr[static_cast<std::size_t>(i)];
        if (!row.is_array()) throw InstanceFormatError(row_path + ": expected an array");
        if (static_cast<Eigen::Index>(row.size()) != cols) {
            throw InstanceFormatError(row_path + ": expected " + std::to_string(cols) +
                                      " entries, got " + std::to_string(row.size()));
        }
        for (Eigen::Index j = 0; j < cols; ++j) {
            M(i, j) = number_at(row[static_cast<std::size_t>(j)],
                                row_path + "[" + std::to_string(j) + "]");
        }
    }
    return M;
}

Eigen::Index parse_dim(const json& doc, const std::string& key) {
    if (!doc.contains(key)) throw InstanceFormatError(key + ": missing key");
    const json& v = doc.at(key);
    if (!v.is_number_integer() || v.get<long long>() <= 0) {
        throw InstanceFormatError(key + ": expected a positive integer");
    }
    return static_cast<Eigen::Index>(v.get<long long>());
}

}  // namespace

std::string version() { return POSMINIMAX_VERSION; }

std::string digest(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string("fnv1a64:") + buf;
}

LoadedInstance parse_instance(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw InstanceFormatError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw InstanceFormatError("top level: expected an object");

    const Eigen::Index n = parse_dim(doc, "n");
    const Eigen::Index m = parse_dim(doc, "m");
    const Eigen::Index l = parse_dim(doc, "l");

    LoadedInstance out;
    ProblemInstance& inst = out.instance;
    inst.A = parse_matrix(doc, "A", n, n);
    inst.B = parse_matrix(doc, "B", n, m);
    inst.F = parse_matrix(doc, "F", n, l);
    inst.E = parse_matrix(doc, "E", m, n);
    inst.s = parse_vector(doc, "s", n);
    inst.r = parse_vector(doc, "r", m);
    inst.gamma = parse_vector(doc, "gamma", l);
    if (doc.contains("name")) {
        if (!doc.at("name").is_string()) throw InstanceFormatError("name: expected a string");
        inst.name = doc.at("name").get<std::string>();
    }
    if (doc.contains("x0")) {
        out.x0 = parse_vector(doc, "x0", n);
        if ((out.x0->array() < 0.0).any()) throw InstanceFormatError("x0: entries must be >= 0");
    }

    if (const auto errors = validate(inst); !errors.empty()) {
        std::string msg = "invalid instance:";
        for (const auto& e : errors) msg += "\n  " + e.describe();
        throw InstanceFormatError(msg);
    }
    out.digest = digest(text);
    return out;
}

LoadedInstance load_instance(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str());
}

json to_json(const Eigen::MatrixXd& M) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

json to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

Eigen::MatrixXd matrix_from_json(const json& j, const std::string& key) {
    const json& arr = j.at(key);
    const auto rows = static_cast<Eigen::Index>(arr.size());
    const Eigen::Index cols = rows > 0 ? static_cast<Eigen::Index>(arr[0].size()) : 0;
    return parse_matrix(j, key, rows, cols);
}

Eigen::VectorXd vector_from_json(const json& j, const std::string& key) {
    return parse_vector(j, key, static_cast<Eigen::Index>(j.at(key).size()));
}

json instance_to_json(const ProblemInstance& instance, const std::optional<Eigen::VectorXd>& x0) {
    json doc;
    if (!instance.name.empty()) doc["name"] = instance.name;
    doc["n"] = instance.n();
    doc["m"] = instance.m();
    doc["l"] = instance.l();
    doc["A"] = to_json(instance.A);
    doc["B"] = to_json(instance.B);
    doc["F"] = to_json(instance.F);
    doc["E"] = to_json(instance.E);
    doc["s"] = to_json(instance.s);
    doc["r"] = to_json(instance.r);
    doc["gamma"] = to_json(instance.gamma);
    if (x0) doc["x0"] = to_json(*x0);
    return doc;
}

json make_report(const ProblemInstance& instance, const SynthesisCertificate& cert,
                 const ReportExtras& extras) {
    json report;
    report["tool"] = "posminimax";
    report["version"] = version();
    report["input_digest"] = extras.input_digest;
    report["name"] = instance.name;
    report["status"] = to_string(cert.status);

    json hyp;
    hyp["positivity_ok"] = cert.hypotheses.positivity_ok;
    hyp["positivity_margin"] = to_json(cert.hypotheses.positivity_margin);
    hyp["penalty_ok"] = cert.hypotheses.penalty_ok;
    hyp["penalty_margin"] = to_json(cert.hypotheses.penalty_margin);
    json violations = json::array();
    for (const auto& v : cert.hypotheses.violations) {
        violations.push_back(
            {{"constraint", to_string(v.id)}, {"row", v.row}, {"col", v.col}, {"value", v.value}});
    }
    hyp["violations"] = std::move(violations);
    report["hypotheses"] = std::move(hyp);

    report["lp"] = {{"status", lp::to_string(cert.lp_status)},
                    {"iterations", cert.lp_iterations},
                    {"objective", cert.lp_objective}};
    report["gamma"] = to_json(instance.gamma);

    if (cert.status == SynthesisStatus::Synthesized) {
        report["p"] = to_json(cert.p);
        report["zeta"] = to_json(cert.zeta);
        report["gamma_min"] = to_json(cert.gamma_min);
        report["gamma_ok"] = cert.gamma_ok;
        report["K"] = to_json(cert.K);
        report["q"] = to_json(cert.q);
        report["bellman_residual"] = to_json(cert.bellman_residual);
    }
    if (cert.status == SynthesisStatus::NoFiniteValue) {
        report["unbounded_ray"] = to_json(cert.unbounded_ray);
    }
    if (extras.closed_loop_radius) {
        const SpectralRadius& rho = *extras.closed_loop_radius;
        report["spectral_radius"] = {{"estimate", rho.estimate},
                                     {"lower", rho.lower},
                                     {"upper", rho.upper},
                                     {"converged", rho.converged}};
    }
    if (extras.value_iteration) {
        const ValueIterationTrace& vi = *extras.value_iteration;
        json v = {{"verdict", to_string(vi.verdict)},
                  {"iterations", vi.iterations},
                  {"final_delta", vi.final_delta},
                  {"final_iterate", to_json(vi.final_iterate())}};
        if (vi.violation) {
            v["violated_at"] = vi.violated_at;
            v["violated_component"] = vi.violation->component;
        }
        report["value_iteration"] = std::move(v);
    }
    return report;
}

SynthesisCertificate certificate_from_report(const json& report) {
    SynthesisCertificate cert;
    const std::string status = report.at("status").get<std::string>();
    for (auto s : {SynthesisStatus::Synthesized, SynthesisStatus::NoFiniteValue,
                   SynthesisStatus::HypothesesViolated, SynthesisStatus::SolverDefect}) {
        if (to_string(s) == status) cert.status = s;
    }
    if (cert.status == SynthesisStatus::Synthesized) {
        cert.p = vector_from_json(report, "p");
        cert.zeta = vector_from_json(report, "zeta");
        cert.gamma_min = vector_from_json(report, "gamma_min");
        cert.gamma_ok = report.at("gamma_ok").get<bool>();
        cert.K = matrix_from_json(report, "K");
        cert.q = vector_from_json(report, "q");
        cert.bellman_residual = vector_from_json(report, "bellman_residual");
    }
    return cert;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    const Eigen::Index n = traj.states.rows();
    const Eigen::Index m = traj.inputs.rows();
    const Eigen::Index l = traj.disturbances.rows();
    const Eigen::Index T = traj.horizon();

    out << "t";
    for (Eigen::Index i = 1; i <= n; ++i) out << ",x_" << i;
    for (Eigen::Index i = 1; i <= m; ++i) out << ",u_" << i;
    for (Eigen::Index i = 1; i <= l; ++i) out << ",w_" << i;
    out << ",partial_cost\n";

    // Shortest round-trip formatting via the JSON serializer.
    auto num = [](double v) { return json(v).dump(); };
    for (Eigen::Index t = 0; t <= T; ++t) {
        out << t;
        for (Eigen::Index i = 0; i < n; ++i) out << ',' << num(traj.states(i, t));
        for (Eigen::Index i = 0; i < m; ++i) {
            out << ',';
            if (t < T) out << num(traj.inputs(i, t));
        }
        for (Eigen::Index i = 0; i < l; ++i) {
            out << ',';
            if (t < T) out << num(traj.disturbances(i, t));
        }
        out << ',' << num(traj.partial_costs(t)) << '\n';
    }
}

Eigen::MatrixXd read_disturbance_csv(const std::string& path, Eigen::Index l) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<Eigen::VectorXd> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const char c = line[first];
        if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '+')) {
            continue;
        }
        std::istringstream fields(line);
        std::string cell;
        Eigen::VectorXd w(l);
        Eigen::Index k = 0;
        while (std::getline(fields, cell, ',')) {
            if (k >= l) break;
            try {
                w(k++) = std::stod(cell);
            } catch (const std::exception&) {
                throw InstanceFormatError(path + ":" + std::to_string(lineno) +
                                          ": not a number: " + cell);
            }
        }
        if (k != l) {
            throw InstanceFormatError(path + ":" + std::to_string(lineno) + ": expected " +
                                      std::to_string(l) + " values");
        }
        rows.push_back(std::move(w));
    }
    Eigen::MatrixXd W(l, static_cast<Eigen::Index>(rows.size()));
    for (std::size_t t = 0; t < rows.size(); ++t) W.col(static_cast<Eigen::Index>(t)) = rows[t];
    return W;
}

}  // namespace posminimax::io
