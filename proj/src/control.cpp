#include "neurocactus/control.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "neurocactus/log.hpp"
#include "neurocactus/rng.hpp"

namespace neurocactus {

double TolerancePolicy::resolve(double sigma1, int rows, int cols) const {
  if (kind == Kind::Absolute) return value;
  return sigma1 * static_cast<double>(std::max(rows, cols)) *
         std::numeric_limits<double>::epsilon();
}

Eigen::MatrixXd controllability_matrix(const Eigen::MatrixXd& H, const Eigen::MatrixXd& B) {
  if (H.rows() != H.cols()) throw Error(Errc::DimensionMismatch, "H must be square");
  if (B.rows() != H.rows())
    throw Error(Errc::DimensionMismatch, "B must have as many rows as H");
  const auto n = H.rows();
  const auto m = B.cols();
  Eigen::MatrixXd C(n, n * m);
  Eigen::MatrixXd block = B;
  for (Eigen::Index k = 0; k < n; ++k) {
    C.middleCols(k * m, m) = block;
    if (k + 1 < n) block = H * block;
  }
  return C;
}

ControllabilityReport numerical_rank(const Eigen::MatrixXd& M, TolerancePolicy policy) {
  if (M.size() == 0) throw Error(Errc::BadArgument, "empty matrix");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  if (svd.info() != Eigen::Success)
    throw Error(Errc::NumericalFailure, "SVD did not converge");

  ControllabilityReport rep;
  rep.n = static_cast<int>(M.rows());
  const auto& sv = svd.singularValues();
  rep.singular_values.assign(sv.data(), sv.data() + sv.size());
  rep.tolerance =
      policy.resolve(sv.size() ? sv(0) : 0.0, static_cast<int>(M.rows()),
                     static_cast<int>(M.cols()));
  rep.rank = 0;
  for (double s : rep.singular_values)
    if (s > rep.tolerance) ++rep.rank;
  rep.controllable = rep.rank == rep.n;
  return rep;
}

ControllabilityReport krylov_rank_report(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                         TolerancePolicy policy) {
  return numerical_rank(controllability_matrix(A, B), policy);
}

ControllabilityReport structural_controllability_test(const SignedGraph& g,
                                                      const NetworkParams& p, int samples,
                                                      std::uint64_t rng_seed) {
  if (samples < 1) throw Error(Errc::BadArgument, "samples must be >= 1");
  const int n = g.node_count();
  const Eigen::MatrixXd B = g.input_matrix();

  int full = 0;
  ControllabilityReport best;
  double best_margin = -1.0;
  for (int s = 0; s < samples; ++s) {
    Rng rng(substream_seed(rng_seed, static_cast<std::uint64_t>(s)));
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : g.edges()) {
      double w = rng.uniform(p.bounds.lo(e.sign), p.bounds.hi(e.sign));
      A(e.i - 1, e.j - 1) = w;
      A(e.j - 1, e.i - 1) = w;
    }
    // rank of (-C_n + A, B) via the shift-equivalent Krylov matrix of A
    ControllabilityReport rep = krylov_rank_report(A, B);
    if (rep.controllable) ++full;
    double margin =
        rep.singular_values.empty() ? 0.0 : rep.singular_values.back() / rep.tolerance;
    if (margin > best_margin) {
      best_margin = margin;
      best = rep;
    }
  }
  best.sample_fraction_full_rank = static_cast<double>(full) / static_cast<double>(samples);
  best.controllable = full > 0 && best.rank == n;
  return best;
}

StabilityCertificate stability_certificate(const Eigen::MatrixXd& A, double c_n) {
  if (A.rows() != A.cols()) throw Error(Errc::DimensionMismatch, "A must be square");
  if ((A - A.transpose()).lpNorm<Eigen::Infinity>() > 1e-9)
    throw Error(Errc::BadArgument, "A must be symmetric");

  StabilityCertificate cert;
  cert.gershgorin_margin = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    double row = A.row(i).cwiseAbs().sum() - std::abs(A(i, i));
    cert.gershgorin_margin = std::min(cert.gershgorin_margin, c_n - row);
  }
  cert.diagonally_dominant = cert.gershgorin_margin > 0.0;

  Eigen::MatrixXd H = A;
  H.diagonal().array() -= c_n;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw Error(Errc::NumericalFailure, "eigen decomposition failed");
  cert.max_real_eigenvalue = es.eigenvalues().maxCoeff();
  cert.hurwitz = cert.max_real_eigenvalue < 0.0;
  return cert;
}

std::pair<bool, double> boundedness_condition(const SignedGraph& g, const NetworkParams& p) {
  auto d_max = static_cast<double>(max_out_degree(g));
  double worst = std::max(d_max * p.bounds.a_plus_hi, d_max * std::abs(p.bounds.a_minus_lo));
  double slack = p.c_n - worst;
  return {slack > 0.0, slack};
}

// ---------------------------------------------------------------------------
// CARE

namespace {

double care_residual_norm(const Eigen::MatrixXd& H, const Eigen::MatrixXd& G,
                          const Eigen::MatrixXd& Q, const Eigen::MatrixXd& P) {
  return (H.transpose() * P + P * H - P * G * P + Q).lpNorm<Eigen::Infinity>();
}

// A'X + XA = -M via the direct Kronecker formulation; fine at desk scale.
// Column-stacked vec gives (I (x) A' + A' (x) I) vec(X) = -vec(M).
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& M) {
  const auto n = A.rows();
  Eigen::MatrixXd lhs = Eigen::MatrixXd::Zero(n * n, n * n);
  for (Eigen::Index b = 0; b < n; ++b) lhs.block(b * n, b * n, n, n) = A.transpose();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      lhs.block(i * n, j * n, n, n) += A(j, i) * Eigen::MatrixXd::Identity(n, n);

  Eigen::VectorXd rhs(n * n);
  for (Eigen::Index col = 0; col < n; ++col) rhs.segment(col * n, n) = -M.col(col);
  Eigen::VectorXd x = lhs.partialPivLu().solve(rhs);
  Eigen::MatrixXd X(n, n);
  for (Eigen::Index col = 0; col < n; ++col) X.col(col) = x.segment(col * n, n);
  return 0.5 * (X + X.transpose());
}

}  // namespace

LqrSolution solve_care(const Eigen::MatrixXd& H, const Eigen::MatrixXd& B,
                       const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R) {
  const auto n = H.rows();
  if (H.cols() != n) throw Error(Errc::DimensionMismatch, "H must be square");
  if (B.rows() != n) throw Error(Errc::DimensionMismatch, "B row count != state dimension");
  if (Q.rows() != n || Q.cols() != n)
    throw Error(Errc::DimensionMismatch, "Q must be n x n");
  if (R.rows() != B.cols() || R.cols() != B.cols())
    throw Error(Errc::DimensionMismatch, "R must be m x m");

  Eigen::LLT<Eigen::MatrixXd> rllt(R);
  if (rllt.info() != Eigen::Success)
    throw Error(Errc::BadArgument, "R must be positive definite");
  Eigen::MatrixXd G = B * rllt.solve(B.transpose());  // B R^{-1} B'

  // stable invariant subspace of the Hamiltonian
  Eigen::MatrixXd Z(2 * n, 2 * n);
  Z.topLeftCorner(n, n) = H;
  Z.topRightCorner(n, n) = -G;
  Z.bottomLeftCorner(n, n) = -Q;
  Z.bottomRightCorner(n, n) = -H.transpose();

  Eigen::EigenSolver<Eigen::MatrixXd> es(Z);
  if (es.info() != Eigen::Success)
    throw Error(Errc::NumericalFailure, "Hamiltonian eigen decomposition failed");

  Eigen::MatrixXcd X1(n, n), X2(n, n);
  Eigen::Index taken = 0;
  for (Eigen::Index k = 0; k < 2 * n && taken < n; ++k) {
    if (es.eigenvalues()(k).real() < 0.0) {
      X1.col(taken) = es.eigenvectors().col(k).head(n);
      X2.col(taken) = es.eigenvectors().col(k).tail(n);
      ++taken;
    }
  }
  if (taken != n)
    throw Error(Errc::NotStabilizable,
                "Hamiltonian has no stable invariant subspace of dimension n");

  Eigen::FullPivLU<Eigen::MatrixXcd> lu(X1);
  if (!lu.isInvertible())
    throw Error(Errc::NotStabilizable, "stable subspace is not a graph over the state space");
  Eigen::MatrixXd P = (X2 * lu.inverse()).real();
  P = 0.5 * (P + P.transpose());

  // Newton-Kleinman polish
  const double target = 1e-8;
  double residual = care_residual_norm(H, G, Q, P);
  for (int it = 0; it < 25 && residual > 1e-13; ++it) {
    Eigen::MatrixXd Acl = H - G * P;
    Eigen::VectorXcd cls = Eigen::EigenSolver<Eigen::MatrixXd>(Acl).eigenvalues();
    if (cls.real().maxCoeff() >= 0.0) break;  // keep the best stabilizing iterate
    Eigen::MatrixXd Pn = solve_lyapunov(Acl, Q + P * G * P);
    double rn = care_residual_norm(H, G, Q, Pn);
    if (!(rn < residual)) break;
    P = Pn;
    residual = rn;
  }
  if (residual > target) {
    std::ostringstream os;
    os << "CARE residual " << residual << " above " << target;
    throw Error(Errc::IllConditioned, os.str());
  }

  LqrSolution sol;
  sol.P = P;
  sol.K = rllt.solve(B.transpose() * P);
  sol.care_residual = residual;
  sol.q_weight = Q;
  sol.r_weight = R;
  Eigen::MatrixXd Acl = H - B * sol.K;
  Eigen::VectorXcd cls = Eigen::EigenSolver<Eigen::MatrixXd>(Acl).eigenvalues();
  sol.closed_loop_spectrum.assign(cls.data(), cls.data() + cls.size());
  return sol;
}

RegulatorDesign lqr_regulate(const SignedGraph& g, const NetworkParams& p,
                             const Eigen::VectorXd& target, bool recompute_each_slot) {
  const int n = g.node_count();
  if (target.size() != n)
    throw Error(Errc::DimensionMismatch, "target length must equal node count");
  const Eigen::MatrixXd B = g.input_matrix();
  const Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd R = Eigen::MatrixXd::Identity(B.cols(), B.cols());

  auto design_for = [=](const Eigen::MatrixXd& A) {
    Eigen::MatrixXd H = A;
    H.diagonal().array() -= p.c_n;
    LqrSolution sol = solve_care(H, B, Q, R);
    // feedforward: least squares of B u_ff = -H target
    Eigen::VectorXd rhs = -H * target;
    Eigen::VectorXd u_ff = B.colPivHouseholderQr().solve(rhs);
    double resid = (H * target + B * u_ff).lpNorm<Eigen::Infinity>();
    return std::tuple(std::move(sol), std::move(u_ff), resid);
  };

  auto [sol, u_ff, resid] = design_for(g.initial_weights());

  FeedbackLaw law;
  law.gain = sol.K;
  law.target = target;
  law.feedforward = u_ff;
  if (recompute_each_slot) {
    law.refresh = [design_for, target](const Eigen::MatrixXd& weights) {
      auto [s, ff, r] = design_for(weights);
      (void)r;
      FeedbackLaw next;
      next.gain = s.K;
      next.target = target;
      next.feedforward = ff;
      return next;
    };
  }

  RegulatorDesign design;
  design.lqr = std::move(sol);
  design.feedforward = std::move(u_ff);
  design.target_residual = resid;
  design.input.feedback = std::move(law);
  if (design.target_residual > 1e-9) {
    std::ostringstream os;
    os << "target not exactly sustainable; ||(A - C_n) target + B u_ff||_inf = "
       << design.target_residual;
    log_info(os.str());
  }
  return design;
}

}  // namespace neurocactus
