#include "posminimax/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace posminimax {

void require_feasible_gain(const ProblemInstance& instance, const Eigen::MatrixXd& K) {
    if (K.rows() != instance.m() || K.cols() != instance.n()) {
        throw InfeasibleGain("gain must be " + std::to_string(instance.m()) + "x" +
                             std::to_string(instance.n()));
    }
    for (Eigen::Index i = 0; i < K.rows(); ++i) {
        for (Eigen::Index j = 0; j < K.cols(); ++j) {
            if (!(std::abs(K(i, j)) <= instance.E(i, j))) {
                throw InfeasibleGain("|K(" + std::to_string(i) + "," + std::to_string(j) +
                                     ")| exceeds E");
            }
        }
    }
}

Trajectory rollout(const ProblemInstance& instance, const Eigen::MatrixXd& K,
                   const Eigen::VectorXd& x0, const Eigen::MatrixXd& disturbances) {
    require_feasible_gain(instance, K);
    if (x0.size() != instance.n() || (x0.array() < 0.0).any()) {
        throw std::invalid_argument("x0 must be a nonnegative n-vector");
    }
    if (disturbances.rows() != instance.l() || (disturbances.array() < 0.0).any()) {
        throw std::invalid_argument("disturbances must be a nonnegative l x T matrix");
    }

    const Eigen::Index T = disturbances.cols();
    Trajectory traj;
    traj.states.resize(instance.n(), T + 1);
    traj.inputs.resize(instance.m(), T);
    traj.disturbances = disturbances;
    traj.partial_costs.resize(T + 1);

    traj.states.col(0) = x0;
    traj.partial_costs(0) = 0.0;
    for (Eigen::Index t = 0; t < T; ++t) {
        const auto x = traj.states.col(t);
        const auto w = disturbances.col(t);
        traj.inputs.col(t) = -K * x;
        const auto u = traj.inputs.col(t);
        traj.states.col(t + 1) = instance.A * x + instance.B * u + instance.F * w;
        traj.partial_costs(t + 1) = traj.partial_costs(t) + instance.s.dot(x) +
                                    instance.r.dot(u) - instance.gamma.dot(w);
    }
    return traj;
}

Eigen::MatrixXd random_disturbances(Eigen::Index l, Eigen::Index horizon, std::uint64_t seed,
                                    double amplitude) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, amplitude);
    Eigen::MatrixXd w(l, horizon);
    for (Eigen::Index t = 0; t < horizon; ++t) {
        for (Eigen::Index i = 0; i < l; ++i) w(i, t) = dist(rng);
    }
    return w;
}

namespace {

// Strongly connected components of the directed graph with edge i -> j
// whenever M(i, j) != 0, via transitive closure (desk-scale n).
std::vector<std::vector<Eigen::Index>> strong_components(const Eigen::MatrixXd& M) {
    const Eigen::Index n = M.rows();
    std::vector<std::vector<char>> reach(static_cast<std::size_t>(n),
                                         std::vector<char>(static_cast<std::size_t>(n), 0));
    auto R = [&](Eigen::Index i, Eigen::Index j) -> char& {
        return reach[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    };
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) R(i, j) = M(i, j) != 0.0;
    }
    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index i = 0; i < n; ++i) {
            if (!R(i, k)) continue;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (R(k, j)) R(i, j) = 1;
            }
        }
    }
    std::vector<std::vector<Eigen::Index>> comps;
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (seen[static_cast<std::size_t>(i)]) continue;
        std::vector<Eigen::Index> comp{i};
        seen[static_cast<std::size_t>(i)] = 1;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if (!seen[static_cast<std::size_t>(j)] && R(i, j) && R(j, i)) {
                comp.push_back(j);
                seen[static_cast<std::size_t>(j)] = 1;
            }
        }
        comps.push_back(std::move(comp));
    }
    return comps;
}

SpectralRadius irreducible_radius(const Eigen::MatrixXd& block, double tol,
                                  std::size_t max_iter) {
    SpectralRadius out;
    const Eigen::Index k = block.rows();
    if (k == 1) {
        out.estimate = out.lower = out.upper = block(0, 0);
        out.converged = true;
        return out;
    }
    // rho(M + I) = rho(M) + 1 and M + I is primitive, so iterates stay positive.
    const Eigen::MatrixXd shifted = block + Eigen::MatrixXd::Identity(k, k);
    Eigen::VectorXd v = Eigen::VectorXd::Ones(k);
    for (std::size_t it = 1; it <= max_iter; ++it) {
        const Eigen::VectorXd w = shifted * v;
        const Eigen::ArrayXd ratio = w.array() / v.array();
        out.lower = ratio.minCoeff() - 1.0;
        out.upper = ratio.maxCoeff() - 1.0;
        out.iterations = it;
        if (out.upper - out.lower <= tol) {
            out.converged = true;
            break;
        }
        v = w / w.maxCoeff();
    }
    out.lower = std::max(out.lower, 0.0);
    out.estimate = 0.5 * (out.lower + out.upper);
    return out;
}

}  // namespace

SpectralRadius spectral_radius(const Eigen::MatrixXd& M, double tol, std::size_t max_iter) {
    if (M.rows() != M.cols()) throw std::invalid_argument("spectral_radius: matrix not square");
    if ((M.array() < 0.0).any() || !M.allFinite()) {
        throw std::invalid_argument("spectral_radius: matrix must be finite and nonnegative");
    }
    SpectralRadius out;
    for (const auto& comp : strong_components(M)) {
        const auto k = static_cast<Eigen::Index>(comp.size());
        Eigen::MatrixXd block(k, k);
        for (Eigen::Index a = 0; a < k; ++a) {
            for (Eigen::Index b = 0; b < k; ++b) {
                block(a, b) = M(comp[static_cast<std::size_t>(a)], comp[static_cast<std::size_t>(b)]);
            }
        }
        const SpectralRadius part = irreducible_radius(block, tol, max_iter);
        out.lower = std::max(out.lower, part.lower);
        out.upper = std::max(out.upper, part.upper);
        out.iterations = std::max(out.iterations, part.iterations);
    }
    out.converged = out.upper - out.lower <= tol;
    out.estimate = 0.5 * (out.lower + out.upper);
    return out;
}

Eigen::VectorXd solve_dense(Eigen::MatrixXd M, Eigen::VectorXd b, double pivot_tol) {
    const Eigen::Index n = M.rows();
    if (M.cols() != n || b.size() != n) throw std::invalid_argument("solve_dense: bad shape");
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index piv = k;
        M.col(k).tail(n - k).cwiseAbs().maxCoeff(&piv);
        piv += k;
        if (std::abs(M(piv, k)) < pivot_tol) {
            throw SingularSystem("singular system: pivot " + std::to_string(k) + " is " +
                                 std::to_string(M(piv, k)));
        }
        if (piv != k) {
            M.row(k).swap(M.row(piv));
            std::swap(b(k), b(piv));
        }
        for (Eigen::Index i = k + 1; i < n; ++i) {
            const double f = M(i, k) / M(k, k);
            if (f == 0.0) continue;
            M.row(i).tail(n - k) -= f * M.row(k).tail(n - k);
            b(i) -= f * b(k);
        }
    }
    Eigen::VectorXd x(n);
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        x(i) = (b(i) - M.row(i).tail(n - i - 1).dot(x.tail(n - i - 1))) / M(i, i);
    }
    return x;
}

ClosedLoopCost closed_loop_cost_vector(const ProblemInstance& instance,
                                       const Eigen::MatrixXd& L) {
    require_feasible_gain(instance, L);
    const Eigen::MatrixXd closed = instance.A - instance.B * L;
    ClosedLoopCost out;
    out.rho = spectral_radius(closed);
    out.stable = out.rho.upper < 1.0;
    if (!out.stable) return out;
    const Eigen::Index n = instance.n();
    out.p = solve_dense(Eigen::MatrixXd::Identity(n, n) - closed.transpose(),
                        instance.s - L.transpose() * instance.r);
    return out;
}

UnboundednessWitness demonstrate_unboundedness(const ProblemInstance& instance,
                                               const Eigen::MatrixXd& K,
                                               const Eigen::VectorXd& x0, double bound,
                                               std::size_t max_horizon) {
    if (x0.size() != instance.n() || (x0.array() < 0.0).any()) {
        throw std::invalid_argument("x0 must be a nonnegative n-vector");
    }
    const ClosedLoopCost cl = closed_loop_cost_vector(instance, K);
    if (!cl.stable) throw UnboundednessNotShown("closed loop A - BK is not certified stable");

    UnboundednessWitness wit;
    wit.p_closed_loop = cl.p;
    const Eigen::VectorXd rate = instance.F.transpose() * cl.p - instance.gamma;
    wit.growth_rate = rate.maxCoeff(&wit.component);
    if (!(wit.growth_rate > 0.0)) {
        throw UnboundednessNotShown("gamma >= F'p_K componentwise; no disturbance direction grows");
    }
    wit.disturbance = Eigen::VectorXd::Zero(instance.l());
    wit.disturbance(wit.component) = 1.0;

    const Eigen::VectorXd Fw = instance.F.col(wit.component);
    const double gw = instance.gamma(wit.component);
    const Eigen::RowVectorXd stage = instance.s.transpose() - instance.r.transpose() * K;
    const Eigen::MatrixXd closed = instance.A - instance.B * K;

    Eigen::VectorXd x = x0;
    double cost = 0.0;
    for (std::size_t t = 1; t <= max_horizon; ++t) {
        cost += stage.dot(x) - gw;
        x = closed * x + Fw;
        if (cost > bound) {
            wit.t_exceed = t;
            wit.cost_at_exceed = cost;
            return wit;
        }
    }
    throw UnboundednessNotShown("partial cost stayed below bound for " +
                                std::to_string(max_horizon) + " steps");
}

}  // namespace posminimax
