#include "posminimax/model.hpp"

#include <cmath>
#include <sstream>

namespace posminimax {

namespace {

void check_shape(std::vector<ValidationError>& errors, const char* field, Eigen::Index rows,
                 Eigen::Index cols, Eigen::Index want_rows, Eigen::Index want_cols) {
    if (rows != want_rows || cols != want_cols) {
        std::ostringstream what;
        what << "shape " << want_rows << "x" << want_cols << " expected, got " << rows << "x"
             << cols;
        errors.push_back({field, what.str(), -1, -1, 0.0});
    }
}

template <typename Derived>
void check_entries(std::vector<ValidationError>& errors, const char* field,
                   const Eigen::MatrixBase<Derived>& M, bool nonneg, bool strict) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
        for (Eigen::Index i = 0; i < M.rows(); ++i) {
            const double v = M(i, j);
            const Eigen::Index col = M.cols() == 1 ? -1 : j;
            if (!std::isfinite(v)) {
                errors.push_back({field, "finite", i, col, v});
            } else if (strict && !(v > 0.0)) {
                errors.push_back({field, "> 0", i, col, v});
            } else if (nonneg && v < 0.0) {
                errors.push_back({field, ">= 0", i, col, v});
            }
        }
    }
}

}  // namespace

std::string ValidationError::describe() const {
    std::ostringstream out;
    out << field;
    if (row >= 0) {
        out << "[" << row;
        if (col >= 0) out << "," << col;
        out << "]";
    }
    out << ": " << constraint;
    if (row >= 0) out << " (value " << value << ")";
    return out.str();
}

std::vector<ValidationError> validate(const ProblemInstance& instance) {
    std::vector<ValidationError> errors;
    const Eigen::Index n = instance.A.rows();
    const Eigen::Index m = instance.B.cols();
    const Eigen::Index l = instance.F.cols();

    if (n <= 0) errors.push_back({"n", "positive dimension", -1, -1, 0.0});
    if (m <= 0) errors.push_back({"m", "positive dimension", -1, -1, 0.0});
    if (l <= 0) errors.push_back({"l", "positive dimension", -1, -1, 0.0});

    check_shape(errors, "A", instance.A.rows(), instance.A.cols(), n, n);
    check_shape(errors, "B", instance.B.rows(), instance.B.cols(), n, m);
    check_shape(errors, "F", instance.F.rows(), instance.F.cols(), n, l);
    check_shape(errors, "E", instance.E.rows(), instance.E.cols(), m, n);
    check_shape(errors, "s", instance.s.size(), 1, n, 1);
    check_shape(errors, "r", instance.r.size(), 1, m, 1);
    check_shape(errors, "gamma", instance.gamma.size(), 1, l, 1);

    check_entries(errors, "A", instance.A, false, false);
    check_entries(errors, "B", instance.B, false, false);
    check_entries(errors, "F", instance.F, true, false);
    check_entries(errors, "E", instance.E, true, false);
    check_entries(errors, "s", instance.s, true, true);
    check_entries(errors, "r", instance.r, false, false);
    check_entries(errors, "gamma", instance.gamma, true, false);
    return errors;
}

HypothesisReport check_hypotheses(const ProblemInstance& instance, double strict_eps) {
    HypothesisReport report;
    report.positivity_margin = instance.A - instance.B.cwiseAbs() * instance.E;
    report.penalty_margin = instance.s - instance.E.transpose() * instance.r.cwiseAbs();

    report.positivity_ok = true;
    for (Eigen::Index j = 0; j < report.positivity_margin.cols(); ++j) {
        for (Eigen::Index i = 0; i < report.positivity_margin.rows(); ++i) {
            const double v = report.positivity_margin(i, j);
            if (!(v >= 0.0)) {
                report.positivity_ok = false;
                report.violations.push_back({HypothesisId::Positivity, i, j, v});
            }
        }
    }
    report.penalty_ok = true;
    for (Eigen::Index i = 0; i < report.penalty_margin.size(); ++i) {
        const double v = report.penalty_margin(i);
        if (!(v > strict_eps)) {
            report.penalty_ok = false;
            report.violations.push_back({HypothesisId::Penalty, i, -1, v});
        }
    }
    return report;
}

std::string to_string(HypothesisId id) {
    switch (id) {
        case HypothesisId::Positivity:
            return "A >= |B|E";
        case HypothesisId::Penalty:
            return "s > E'|r|";
    }
    return "unknown";
}

ProblemInstance double_tank(double gamma) {
    ProblemInstance p;
    p.name = "double_tank";
    p.A.resize(2, 2);
    p.A << 0.9648, 0.0, 0.0345, 0.9648;
    p.B.resize(2, 1);
    p.B << 0.0971, 0.0017;
    p.F = p.B;
    p.E.resize(1, 2);
    p.E << 1.0, 0.0;
    p.s = Eigen::Vector2d(1.0, 1.0);
    p.r = Eigen::VectorXd::Constant(1, 0.2);
    p.gamma = Eigen::VectorXd::Constant(1, gamma);
    return p;
}

}  // namespace posminimax
