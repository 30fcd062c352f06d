#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "neurocactus/graph.hpp"

namespace neurocactus {

enum class Activation { Tanh, Softsign };

Activation activation_from_string(const std::string& name);
const char* to_string(Activation a);

// Odd sigmoid with range (-1,1) and phi(0)=0. Tanh is the default choice;
// Softsign is y/(1+|y|).
double phi(double y, Activation kind = Activation::Tanh);

// [y]_lo^hi; throws BadInterval if lo > hi.
double clip(double y, double lo, double hi);

struct NetworkParams {
  double c_n = 4.1;        // decay rate, > 0
  double c_a_plus = 0.9;   // retention factor for excitatory edges, in (0,1)
  double c_a_minus = 0.9;  // retention factor for inhibitory edges, in (0,1)
  double tau = 0.2;        // weight update period
  WeightBounds bounds{-1.0, -0.05, 0.05, 1.0};
  Activation activation = Activation::Tanh;
  double dt = 0.01;  // integration step; must divide tau

  void validate() const;        // throws BadArgument / StepMismatch
  int steps_per_slot() const;   // tau / dt, exact
};

struct NetworkState {
  double t = 0.0;
  Eigen::VectorXd x;
  Eigen::MatrixXd weights;  // symmetric, zero diagonal, zero off the edge set
};

// ---------------------------------------------------------------------------
// Inputs

struct ZeroInput {};
struct ImpulseInput {
  double amplitude = 0.0;
  double hold = 0.0;  // active on [0, hold); loaders default this to dt
};
struct SinusoidInput {
  double amplitude = 0.0;
  double angular_frequency = 0.0;
  double phase = 0.0;
};
struct ConstantInput {
  double value = 0.0;
};

using Channel = std::variant<ZeroInput, ImpulseInput, SinusoidInput, ConstantInput>;

double channel_value(const Channel& c, double t);
double channel_sup(const Channel& c);  // declared amplitude sup_t |u(t)|

// State feedback u = feedforward - gain * (x - target). `refresh`, when set,
// is invoked at every slot boundary with the current weight matrix so the law
// can be re-synthesized (gain scheduling).
struct FeedbackLaw {
  Eigen::MatrixXd gain;         // m x n
  Eigen::VectorXd target;       // n
  Eigen::VectorXd feedforward;  // m
  std::function<FeedbackLaw(const Eigen::MatrixXd& weights)> refresh;

  Eigen::VectorXd value(const Eigen::VectorXd& x) const {
    return feedforward - gain * (x - target);
  }
};

struct InputSignal {
  std::vector<Channel> channels;        // one per control node; empty means all zero
  std::optional<FeedbackLaw> feedback;  // when set, channels are ignored

  static InputSignal zero() { return {}; }
  static InputSignal open_loop(std::vector<Channel> ch) { return {std::move(ch), {}}; }

  // u(t, x) of length m (number of control nodes)
  Eigen::VectorXd value(double t, const Eigen::VectorXd& x, int m) const;
  // sup_t ||B u(t)||_inf from the declared amplitudes; nullopt for feedback laws
  std::optional<double> sup_bu(const SignedGraph& g) const;
};

// ---------------------------------------------------------------------------
// Trajectories and monitors

struct MonitorReport {
  double x_max = std::numeric_limits<double>::quiet_NaN();  // NaN when not applicable

  struct Violation {
    double t;
    int node;        // 1-based; 0 for matrix-level violations
    double value;
    std::string kind;  // "state_bound", "weight_bound", "symmetry", "zero_pattern"
  };
  std::vector<Violation> violations;

  double final_state_norm = 0.0;  // ||x(t_end)||_inf
  double final_weight_gap = 0.0;  // max edge |a_ij(t_end) - a_ij^eq|
};

struct Trajectory {
  std::vector<double> times;  // every dt step, starting at 0
  std::vector<Eigen::VectorXd> states;
  std::vector<double> snapshot_times;  // every full tau boundary, starting at 0
  std::vector<Eigen::MatrixXd> weight_snapshots;
  MonitorReport monitor;
};

// ---------------------------------------------------------------------------
// Operations

// Discrete clipped Hebbian map: for every edge (i,j) in E with sign s,
// a_ij <- clip(c_a^s a_ij + phi(x_i x_j), bounds of s); entries off the edge
// set stay exactly zero and the result is exactly symmetric.
Eigen::MatrixXd hebbian_update(const NetworkState& state, const SignedGraph& g,
                               const NetworkParams& p);

// -c_n x + A x + B u
Eigen::VectorXd state_derivative(const Eigen::VectorXd& x, const Eigen::MatrixXd& A,
                                 const Eigen::VectorXd& u, const NetworkParams& p,
                                 const SignedGraph& g);

// Advances the state over `horizon` (a multiple of dt, at most tau) with the
// weight matrix frozen, classical fixed-step RK4. `sink`, when non-null, is
// invoked after every completed step.
NetworkState integrate_slot(NetworkState state, const InputSignal& u, const NetworkParams& p,
                            const SignedGraph& g, double horizon,
                            const std::function<void(const NetworkState&)>* sink = nullptr);

// Full hybrid run: RK4 inside each tau slot, Hebbian weight update at every
// slot boundary (using the boundary state, then frozen for the next slot).
// t_end must be a multiple of dt; the final slot may be partial, in which case
// it ends without a weight update.
Trajectory simulate(const SignedGraph& g, const NetworkParams& p, const InputSignal& u,
                    Eigen::VectorXd x0, double t_end);

// ||Bu||_inf / (c_n - max{d_max * a_plus_hi, d_max * |a_minus_lo|});
// throws ConditionViolated when the denominator is not positive.
double x_max_bound(const SignedGraph& g, const NetworkParams& p, double bu_inf);

// Unique zero-input equilibrium: x = 0 and weights at a_plus_lo on positive
// edges, a_minus_hi on negative ones, zero elsewhere.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> equilibrium(const SignedGraph& g,
                                                        const WeightBounds& bounds);

}  // namespace neurocactus
