#include "posminimax/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace posminimax::lp {

namespace {

// Dense tableau. The last row is the objective row holding z_j - c_j for a
// maximization; the last column is the right-hand side.
class Tableau {
public:
    Tableau(Eigen::Index rows, Eigen::Index cols)
        : T_(Eigen::MatrixXd::Zero(rows + 1, cols + 1)), basis_(static_cast<std::size_t>(rows)) {}

    Eigen::Index rows() const { return T_.rows() - 1; }
    Eigen::Index cols() const { return T_.cols() - 1; }
    Eigen::Index obj() const { return T_.rows() - 1; }
    Eigen::Index rhs() const { return T_.cols() - 1; }

    double& at(Eigen::Index i, Eigen::Index j) { return T_(i, j); }
    double at(Eigen::Index i, Eigen::Index j) const { return T_(i, j); }
    Eigen::Index basic(Eigen::Index i) const { return basis_[static_cast<std::size_t>(i)]; }
    void set_basic(Eigen::Index i, Eigen::Index j) { basis_[static_cast<std::size_t>(i)] = j; }

    // Loads an objective over the columns and prices out the current basis.
    void set_objective(const Eigen::VectorXd& cost) {
        T_.row(obj()).setZero();
        T_.row(obj()).head(cols()) = -cost.transpose();
        for (Eigen::Index i = 0; i < rows(); ++i) {
            const double cb = cost(basic(i));
            if (cb != 0.0) T_.row(obj()) += cb * T_.row(i);
        }
    }

    void pivot(Eigen::Index pr, Eigen::Index pc) {
        T_.row(pr) /= T_(pr, pc);
        T_(pr, pc) = 1.0;
        for (Eigen::Index i = 0; i < T_.rows(); ++i) {
            if (i == pr) continue;
            const double f = T_(i, pc);
            if (f != 0.0) {
                T_.row(i) -= f * T_.row(pr);
                T_(i, pc) = 0.0;
            }
        }
        set_basic(pr, pc);
    }

    void drop_row(Eigen::Index i) {
        const Eigen::Index last = T_.rows() - 1;
        Eigen::MatrixXd next(T_.rows() - 1, T_.cols());
        next.topRows(i) = T_.topRows(i);
        next.bottomRows(last - i) = T_.bottomRows(last - i);
        T_ = std::move(next);
        basis_.erase(basis_.begin() + i);
    }

    void drop_trailing_cols(Eigen::Index count) {
        Eigen::MatrixXd next(T_.rows(), T_.cols() - count);
        next.leftCols(cols() - count) = T_.leftCols(cols() - count);
        next.col(next.cols() - 1) = T_.col(rhs());
        T_ = std::move(next);
    }

private:
    Eigen::MatrixXd T_;
    std::vector<Eigen::Index> basis_;
};

enum class PhaseResult { Optimal, Unbounded };

struct Driver {
    const LpOptions& opts;
    std::size_t max_pivots;
    std::size_t pivots = 0;
    Eigen::Index unbounded_col = -1;

    // Bland's rule: lowest-index improving column, lowest basic index on ratio ties.
    PhaseResult run(Tableau& t, Eigen::Index active_cols) {
        for (;;) {
            Eigen::Index enter = -1;
            for (Eigen::Index j = 0; j < active_cols; ++j) {
                if (t.at(t.obj(), j) < -opts.pivot_tol) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return PhaseResult::Optimal;

            Eigen::Index leave = -1;
            double best = std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < t.rows(); ++i) {
                const double a = t.at(i, enter);
                if (a <= opts.pivot_tol) continue;
                const double ratio = t.at(i, t.rhs()) / a;
                const double slack = 1e-12 * std::max(1.0, std::abs(best));
                if (leave < 0 || ratio < best - slack) {
                    best = ratio;
                    leave = i;
                } else if (ratio <= best + slack && t.basic(i) < t.basic(leave)) {
                    leave = i;
                }
            }
            if (leave < 0) {
                unbounded_col = enter;
                return PhaseResult::Unbounded;
            }
            if (++pivots > max_pivots) throw MaxPivotsExceeded(pivots);
            t.pivot(leave, enter);
        }
    }
};

}  // namespace

MaxPivotsExceeded::MaxPivotsExceeded(std::size_t pivots)
    : std::runtime_error("simplex pivot limit exceeded after " + std::to_string(pivots) +
                         " pivots"),
      pivots_(pivots) {}

std::string to_string(LpStatus status) {
    switch (status) {
        case LpStatus::Optimal:
            return "optimal";
        case LpStatus::Unbounded:
            return "unbounded";
        case LpStatus::Infeasible:
            return "infeasible";
    }
    return "unknown";
}

void check_problem(const LpProblem& problem) {
    if (problem.G.rows() != problem.h.size() || problem.G.cols() != problem.c.size()) {
        throw std::invalid_argument("LP dimensions inconsistent: G is " +
                                    std::to_string(problem.G.rows()) + "x" +
                                    std::to_string(problem.G.cols()) + ", h has " +
                                    std::to_string(problem.h.size()) + ", c has " +
                                    std::to_string(problem.c.size()));
    }
    if (!problem.G.allFinite() || !problem.h.allFinite() || !problem.c.allFinite()) {
        throw std::invalid_argument("LP data contains non-finite entries");
    }
}

LpSolution solve(const LpProblem& problem, const LpOptions& options) {
    check_problem(problem);
    const Eigen::Index nv = problem.num_vars();
    const Eigen::Index nc = problem.num_constraints();

    std::vector<Eigen::Index> needs_art;
    for (Eigen::Index i = 0; i < nc; ++i) {
        if (problem.h(i) < 0.0) needs_art.push_back(i);
    }
    const auto na = static_cast<Eigen::Index>(needs_art.size());
    const Eigen::Index structural = nv + nc;  // original + slack columns

    Tableau t(nc, structural + na);
    for (Eigen::Index i = 0; i < nc; ++i) {
        const double sign = problem.h(i) < 0.0 ? -1.0 : 1.0;
        for (Eigen::Index j = 0; j < nv; ++j) t.at(i, j) = sign * problem.G(i, j);
        t.at(i, nv + i) = sign;
        t.at(i, t.rhs()) = sign * problem.h(i);
        t.set_basic(i, nv + i);
    }
    for (Eigen::Index k = 0; k < na; ++k) {
        const Eigen::Index i = needs_art[static_cast<std::size_t>(k)];
        t.at(i, structural + k) = 1.0;
        t.set_basic(i, structural + k);
    }

    Driver driver{options,
                  options.max_pivots ? options.max_pivots
                                     : static_cast<std::size_t>(10000 * (nv + nc))};
    LpSolution sol;

    if (na > 0) {
        Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(t.cols());
        phase1.tail(na).setConstant(-1.0);
        t.set_objective(phase1);
        driver.run(t, t.cols());  // bounded below by 0, never unbounded
        const double infeas = -t.at(t.obj(), t.rhs());
        const double scale = 1.0 + problem.h.cwiseAbs().maxCoeff();
        if (infeas > options.feas_tol * scale) {
            sol.status = LpStatus::Infeasible;
            sol.iterations = driver.pivots;
            return sol;
        }
        // Drive zero-level artificials out of the basis; rows that cannot be
        // pivoted are linearly dependent and dropped.
        for (Eigen::Index i = t.rows() - 1; i >= 0; --i) {
            if (t.basic(i) < structural) continue;
            Eigen::Index col = -1;
            for (Eigen::Index j = 0; j < structural; ++j) {
                if (std::abs(t.at(i, j)) > options.pivot_tol) {
                    col = j;
                    break;
                }
            }
            if (col >= 0) {
                t.pivot(i, col);
            } else {
                t.drop_row(i);
            }
        }
        t.drop_trailing_cols(na);
    }

    Eigen::VectorXd cost = Eigen::VectorXd::Zero(t.cols());
    cost.head(nv) = problem.c;
    t.set_objective(cost);
    const PhaseResult result = driver.run(t, t.cols());
    sol.iterations = driver.pivots;

    if (result == PhaseResult::Unbounded) {
        sol.status = LpStatus::Unbounded;
        const Eigen::Index e = driver.unbounded_col;
        Eigen::VectorXd dir = Eigen::VectorXd::Zero(t.cols());
        dir(e) = 1.0;
        for (Eigen::Index i = 0; i < t.rows(); ++i) dir(t.basic(i)) = -t.at(i, e);
        sol.ray = dir.head(nv).cwiseMax(0.0);
        return sol;
    }

    sol.status = LpStatus::Optimal;
    sol.z = Eigen::VectorXd::Zero(nv);
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
        if (t.basic(i) < nv) sol.z(t.basic(i)) = t.at(i, t.rhs());
    }
    sol.objective = problem.c.dot(sol.z);
    return sol;
}

}  // namespace posminimax::lp
