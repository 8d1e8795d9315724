#pragma once

#include "posminimax/bellman.hpp"
#include "posminimax/model.hpp"
#include "posminimax/simulate.hpp"
#include "posminimax/synthesis.hpp"

#include <json.hpp>

#include <Eigen/Dense>

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace posminimax::io {

/// Malformed instance document. The message carries the offending key path
/// (e.g. "A[1][0]") or the parser's line/column.
class InstanceFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LoadedInstance {
    ProblemInstance instance;
    std::optional<Eigen::VectorXd> x0;
    std::string digest;
};

/// Parses an instance document ("n", "m", "l", "A", "B", "F", "E", "s", "r",
/// "gamma", optional "x0" and "name") and validates it.
LoadedInstance parse_instance(std::string_view text);
LoadedInstance load_instance(const std::string& path);

nlohmann::json instance_to_json(const ProblemInstance& instance,
                                const std::optional<Eigen::VectorXd>& x0 = std::nullopt);

/// 64-bit FNV-1a of the raw bytes, as "fnv1a64:<16 hex digits>".
std::string digest(std::string_view bytes);

nlohmann::json to_json(const Eigen::MatrixXd& M);
nlohmann::json to_json(const Eigen::VectorXd& v);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, const std::string& key);
Eigen::VectorXd vector_from_json(const nlohmann::json& j, const std::string& key);

struct ReportExtras {
    std::optional<ValueIterationTrace> value_iteration;
    std::optional<SpectralRadius> closed_loop_radius;
    std::string input_digest;
};

nlohmann::json make_report(const ProblemInstance& instance, const SynthesisCertificate& cert,
                           const ReportExtras& extras = {});

/// Reads back the numeric certificate fields of a report (p, zeta, K, q,
/// gamma_min, bellman_residual, gamma_ok, status).
SynthesisCertificate certificate_from_report(const nlohmann::json& report);

/// Header: t, x_1..x_n, u_1..u_m, w_1..w_l, partial_cost. Row t holds x(t),
/// u(t), w(t) and the cost accumulated before t; the last row (t = T) has
/// empty input and disturbance fields.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

/// Disturbance file: one row per step with l comma-separated nonnegative
/// values. Lines that do not start with a number (headers, comments) are skipped.
Eigen::MatrixXd read_disturbance_csv(const std::string& path, Eigen::Index l);

std::string version();

}  // namespace posminimax::io
