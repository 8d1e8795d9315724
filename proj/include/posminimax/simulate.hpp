#pragma once

#include "posminimax/model.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <stdexcept>

namespace posminimax {

/// Closed-loop rollout under u(t) = -K x(t). Column t of each matrix is the
/// value at time t; partial_costs(T) is the cost accumulated over t < T.
struct Trajectory {
    Eigen::MatrixXd states;        // n x (T+1)
    Eigen::MatrixXd inputs;        // m x T
    Eigen::MatrixXd disturbances;  // l x T
    Eigen::VectorXd partial_costs;  // T+1, partial_costs(0) = 0

    Eigen::Index horizon() const { return inputs.cols(); }
};

/// |K| <= E fails somewhere, so u = -Kx may leave the admissible set.
class InfeasibleGain : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class SingularSystem : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a constant-disturbance witness of an infinite value cannot be built.
class UnboundednessNotShown : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Throws InfeasibleGain unless |K| <= E elementwise.
void require_feasible_gain(const ProblemInstance& instance, const Eigen::MatrixXd& K);

/// Throws InfeasibleGain for a bad gain, std::invalid_argument for negative x0 / w.
Trajectory rollout(const ProblemInstance& instance, const Eigen::MatrixXd& K,
                   const Eigen::VectorXd& x0, const Eigen::MatrixXd& disturbances);

/// l x T matrix of i.i.d. uniform [0, amplitude) entries from a seeded mt19937_64.
Eigen::MatrixXd random_disturbances(Eigen::Index l, Eigen::Index horizon, std::uint64_t seed,
                                    double amplitude = 1.0);

/// Collatz-Wielandt bracket  lower <= rho(M) <= upper.
struct SpectralRadius {
    double estimate = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Power iteration on each strongly connected block of a nonnegative matrix,
/// shifted by the identity so that periodic blocks converge. The bracket is
/// valid even when `converged` is false. Throws std::invalid_argument if M has
/// a negative entry or is not square.
SpectralRadius spectral_radius(const Eigen::MatrixXd& M, double tol = 1e-10,
                               std::size_t max_iter = 100000);

/// Gaussian elimination with partial pivoting. Throws SingularSystem when a
/// pivot magnitude falls below pivot_tol.
Eigen::VectorXd solve_dense(Eigen::MatrixXd M, Eigen::VectorXd b, double pivot_tol = 1e-12);

struct ClosedLoopCost {
    bool stable = false;
    Eigen::VectorXd p;  // set when stable
    SpectralRadius rho;
};

/// Cost vector of the fixed linear policy u = -Lx:
///   p_L = (s - L'r) + (A - BL)' p_L,
/// available when rho(A - BL) < 1 is certified by the bracket.
ClosedLoopCost closed_loop_cost_vector(const ProblemInstance& instance,
                                       const Eigen::MatrixXd& L);

struct UnboundednessWitness {
    Eigen::Index component = 0;
    Eigen::VectorXd disturbance;  // constant w(t) = e_component
    Eigen::VectorXd p_closed_loop;
    double growth_rate = 0.0;  // (F'p_K - gamma)_component
    std::size_t t_exceed = 0;
    double cost_at_exceed = 0.0;
};

/// Applies the constant disturbance e_j with j = argmax (F'p_K - gamma) and
/// returns the first horizon whose partial cost exceeds `bound`.
UnboundednessWitness demonstrate_unboundedness(const ProblemInstance& instance,
                                               const Eigen::MatrixXd& K,
                                               const Eigen::VectorXd& x0, double bound,
                                               std::size_t max_horizon = 100000000);

}  // namespace posminimax
