#include "neurocactus/dynamics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace neurocactus {

Activation activation_from_string(const std::string& name) {
  if (name == "tanh") return Activation::Tanh;
  if (name == "softsign") return Activation::Softsign;
  throw Error(Errc::BadArgument, "unknown activation '" + name + "'");
}

const char* to_string(Activation a) {
  return a == Activation::Tanh ? "tanh" : "softsign";
}

double phi(double y, Activation kind) {
  switch (kind) {
    case Activation::Tanh: return std::tanh(y);
    case Activation::Softsign: return y / (1.0 + std::abs(y));
  }
  return 0.0;
}

double clip(double y, double lo, double hi) {
  if (lo > hi) {
    std::ostringstream os;
    os << "clip interval [" << lo << ", " << hi << "] is empty";
    throw Error(Errc::BadInterval, os.str());
  }
  if (y > hi) return hi;
  if (y < lo) return lo;
  return y;
}

void NetworkParams::validate() const {
  if (!(c_n > 0.0)) throw Error(Errc::BadArgument, "c_n must be > 0");
  if (!(c_a_plus > 0.0 && c_a_plus < 1.0))
    throw Error(Errc::BadArgument, "c_a_plus must lie in (0, 1)");
  if (!(c_a_minus > 0.0 && c_a_minus < 1.0))
    throw Error(Errc::BadArgument, "c_a_minus must lie in (0, 1)");
  if (!(tau > 0.0)) throw Error(Errc::BadArgument, "tau must be > 0");
  if (!(dt > 0.0)) throw Error(Errc::BadArgument, "dt must be > 0");
  bounds.validate();
  double ratio = tau / dt;
  double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * rounded) {
    std::ostringstream os;
    os << "dt = " << dt << " does not divide tau = " << tau;
    throw Error(Errc::StepMismatch, os.str());
  }
}

int NetworkParams::steps_per_slot() const {
  return static_cast<int>(std::llround(tau / dt));
}

// ---------------------------------------------------------------------------

double channel_value(const Channel& c, double t) {
  return std::visit(
      [t](const auto& ch) -> double {
        using T = std::decay_t<decltype(ch)>;
        if constexpr (std::is_same_v<T, ZeroInput>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, ImpulseInput>) {
          return (t >= 0.0 && t < ch.hold) ? ch.amplitude : 0.0;
        } else if constexpr (std::is_same_v<T, SinusoidInput>) {
          return ch.amplitude * std::sin(ch.angular_frequency * t + ch.phase);
        } else {
          return ch.value;
        }
      },
      c);
}

double channel_sup(const Channel& c) {
  return std::visit(
      [](const auto& ch) -> double {
        using T = std::decay_t<decltype(ch)>;
        if constexpr (std::is_same_v<T, ZeroInput>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, ImpulseInput>) {
          return std::abs(ch.amplitude);
        } else if constexpr (std::is_same_v<T, SinusoidInput>) {
          return std::abs(ch.amplitude);
        } else {
          return std::abs(ch.value);
        }
      },
      c);
}

Eigen::VectorXd InputSignal::value(double t, const Eigen::VectorXd& x, int m) const {
  if (feedback) return feedback->value(x);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(m);
  if (channels.empty()) return u;
  if (static_cast<int>(channels.size()) != m)
    throw Error(Errc::DimensionMismatch, "one input channel per control node expected");
  for (int k = 0; k < m; ++k) u(k) = channel_value(channels[static_cast<std::size_t>(k)], t);
  return u;
}

std::optional<double> InputSignal::sup_bu(const SignedGraph& g) const {
  if (feedback) return std::nullopt;
  double sup = 0.0;
  const auto& controls = g.control_nodes();
  if (!channels.empty() && channels.size() != controls.size())
    throw Error(Errc::DimensionMismatch, "one input channel per control node expected");
  for (std::size_t k = 0; k < channels.size(); ++k)
    sup = std::max(sup, std::abs(controls[k].gain) * channel_sup(channels[k]));
  return sup;
}

// ---------------------------------------------------------------------------

Eigen::MatrixXd hebbian_update(const NetworkState& state, const SignedGraph& g,
                               const NetworkParams& p) {
  const int n = g.node_count();
  if (state.x.size() != n || state.weights.rows() != n || state.weights.cols() != n)
    throw Error(Errc::DimensionMismatch, "state does not match the graph");
  Eigen::MatrixXd next = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) {
    double retention = e.sign == EdgeSign::Plus ? p.c_a_plus : p.c_a_minus;
    double a = state.weights(e.i - 1, e.j - 1);
    double drive = phi(state.x(e.i - 1) * state.x(e.j - 1), p.activation);
    double v = clip(retention * a + drive, p.bounds.lo(e.sign), p.bounds.hi(e.sign));
    next(e.i - 1, e.j - 1) = v;
    next(e.j - 1, e.i - 1) = v;
  }
  return next;
}

Eigen::VectorXd state_derivative(const Eigen::VectorXd& x, const Eigen::MatrixXd& A,
                                 const Eigen::VectorXd& u, const NetworkParams& p,
                                 const SignedGraph& g) {
  const int n = g.node_count();
  if (x.size() != n || A.rows() != n || A.cols() != n)
    throw Error(Errc::DimensionMismatch, "state/weight dimensions do not match the graph");
  Eigen::MatrixXd B = g.input_matrix();
  if (u.size() != B.cols())
    throw Error(Errc::DimensionMismatch, "input dimension does not match control nodes");
  return -p.c_n * x + A * x + B * u;
}

NetworkState integrate_slot(NetworkState state, const InputSignal& u, const NetworkParams& p,
                            const SignedGraph& g, double horizon,
                            const std::function<void(const NetworkState&)>* sink) {
  p.validate();
  if (horizon > p.tau * (1.0 + 1e-12))
    throw Error(Errc::BadArgument, "slot horizon exceeds tau");
  double ratio = horizon / p.dt;
  double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, rounded)) {
    std::ostringstream os;
    os << "horizon " << horizon << " is not a multiple of dt = " << p.dt;
    throw Error(Errc::StepMismatch, os.str());
  }
  const long steps = std::lround(rounded);

  const int m = static_cast<int>(g.control_nodes().size());
  const Eigen::MatrixXd B = g.input_matrix();
  const Eigen::MatrixXd& A = state.weights;  // frozen over the slot
  const double t0 = state.t;
  const double dt = p.dt;

  auto f = [&](double t, const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return -p.c_n * x + A * x + B * u.value(t, x, m);
  };

  for (long s = 0; s < steps; ++s) {
    double t = t0 + static_cast<double>(s) * dt;
    Eigen::VectorXd k1 = f(t, state.x);
    Eigen::VectorXd k2 = f(t + dt / 2, state.x + (dt / 2) * k1);
    Eigen::VectorXd k3 = f(t + dt / 2, state.x + (dt / 2) * k2);
    Eigen::VectorXd k4 = f(t + dt, state.x + dt * k3);
    state.x += (dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
    state.t = t0 + static_cast<double>(s + 1) * dt;
    if (sink) (*sink)(state);
  }
  return state;
}

Trajectory simulate(const SignedGraph& g, const NetworkParams& p, const InputSignal& input,
                    Eigen::VectorXd x0, double t_end) {
  p.validate();
  const int n = g.node_count();
  if (x0.size() != n) throw Error(Errc::DimensionMismatch, "x0 length must equal node count");
  if (!(t_end > 0.0)) throw Error(Errc::BadArgument, "t_end must be > 0");
  {
    double ratio = t_end / p.dt;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, std::round(ratio)))
      throw Error(Errc::StepMismatch, "t_end is not a multiple of dt");
  }

  const long total_steps = std::lround(t_end / p.dt);
  const int per_slot = p.steps_per_slot();
  const long full_slots = total_steps / per_slot;
  const long rem_steps = total_steps % per_slot;

  InputSignal u = input;  // local copy so a feedback law can be refreshed

  NetworkState state;
  state.t = 0.0;
  state.x = std::move(x0);
  state.weights = g.initial_weights();

  Trajectory traj;
  traj.times.reserve(static_cast<std::size_t>(total_steps) + 1);
  traj.states.reserve(static_cast<std::size_t>(total_steps) + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(state.x);
  traj.snapshot_times.push_back(0.0);
  traj.weight_snapshots.push_back(state.weights);

  // bound monitor applies to open-loop inputs with a positive bound
  std::optional<double> bu = u.sup_bu(g);
  double x_max = std::numeric_limits<double>::quiet_NaN();
  if (bu && *bu > 0.0) {
    auto d_max = static_cast<double>(max_out_degree(g));
    double worst = std::max(d_max * p.bounds.a_plus_hi, d_max * std::abs(p.bounds.a_minus_lo));
    if (p.c_n > worst) x_max = *bu / (p.c_n - worst);
  }
  traj.monitor.x_max = x_max;

  const std::function<void(const NetworkState&)> sink = [&](const NetworkState& s) {
    traj.times.push_back(s.t);
    traj.states.push_back(s.x);
    if (!std::isnan(x_max)) {
      for (int i = 0; i < n; ++i) {
        if (std::abs(s.x(i)) > x_max + 1e-9)  // integration slack
          traj.monitor.violations.push_back({s.t, i + 1, s.x(i), "state_bound"});
      }
    }
  };

  auto check_weights = [&](const NetworkState& s) {
    for (const auto& e : g.edges()) {
      double w = s.weights(e.i - 1, e.j - 1);
      if (!p.bounds.contains(e.sign, w))
        traj.monitor.violations.push_back({s.t, 0, w, "weight_bound"});
      if (std::abs(w - s.weights(e.j - 1, e.i - 1)) > 1e-12)
        traj.monitor.violations.push_back({s.t, 0, w, "symmetry"});
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (s.weights(i, j) != 0.0 && !g.has_edge(i + 1, j + 1))
          traj.monitor.violations.push_back({s.t, 0, s.weights(i, j), "zero_pattern"});
  };

  auto refresh_law = [&u](const Eigen::MatrixXd& weights) {
    if (!u.feedback || !u.feedback->refresh) return;
    auto hook = u.feedback->refresh;  // survives the law replacement
    *u.feedback = hook(weights);
    u.feedback->refresh = hook;
  };

  for (long slot = 0; slot < full_slots; ++slot) {
    if (slot > 0) refresh_law(state.weights);
    state = integrate_slot(std::move(state), u, p, g, p.tau, &sink);
    state.weights = hebbian_update(state, g, p);
    traj.snapshot_times.push_back(state.t);
    traj.weight_snapshots.push_back(state.weights);
    check_weights(state);
  }
  if (rem_steps > 0) {
    if (full_slots > 0) refresh_law(state.weights);
    state = integrate_slot(std::move(state), u, p, g,
                           static_cast<double>(rem_steps) * p.dt, &sink);
  }

  traj.monitor.final_state_norm = state.x.lpNorm<Eigen::Infinity>();
  auto [x_eq, a_eq] = equilibrium(g, p.bounds);
  (void)x_eq;
  double gap = 0.0;
  for (const auto& e : g.edges())
    gap = std::max(gap, std::abs(state.weights(e.i - 1, e.j - 1) - a_eq(e.i - 1, e.j - 1)));
  traj.monitor.final_weight_gap = gap;
  return traj;
}

double x_max_bound(const SignedGraph& g, const NetworkParams& p, double bu_inf) {
  auto d_max = static_cast<double>(max_out_degree(g));
  double worst = std::max(d_max * p.bounds.a_plus_hi, d_max * std::abs(p.bounds.a_minus_lo));
  if (!(p.c_n > worst)) {
    std::ostringstream os;
    os << "c_n = " << p.c_n << " must exceed max{d_max*hi+, d_max*|lo-|} = " << worst;
    throw Error(Errc::ConditionViolated, os.str());
  }
  return bu_inf / (p.c_n - worst);
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> equilibrium(const SignedGraph& g,
                                                        const WeightBounds& bounds) {
  const int n = g.node_count();
  Eigen::MatrixXd a_eq = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) {
    double v = e.sign == EdgeSign::Plus ? bounds.a_plus_lo : bounds.a_minus_hi;
    a_eq(e.i - 1, e.j - 1) = v;
    a_eq(e.j - 1, e.i - 1) = v;
  }
  return {Eigen::VectorXd::Zero(n), std::move(a_eq)};
}

}  // namespace neurocactus
