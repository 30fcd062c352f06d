#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "neurocactus/dynamics.hpp"
#include "neurocactus/graph.hpp"

namespace neurocactus {

struct TolerancePolicy {
  enum class Kind { Spectral, Absolute };
  Kind kind = Kind::Spectral;
  double value = 0.0;  // used by Absolute

  // Spectral: sigma_1 * max(rows, cols) * machine epsilon.
  double resolve(double sigma1, int rows, int cols) const;
};

struct ControllabilityReport {
  int rank = 0;
  int n = 0;  // row dimension; controllable <=> rank == n
  std::vector<double> singular_values;  // descending
  double tolerance = 0.0;
  bool controllable = false;
  std::optional<double> sample_fraction_full_rank;
};

// [B, HB, H^2 B, ..., H^{N-1} B], N x (N*m).
Eigen::MatrixXd controllability_matrix(const Eigen::MatrixXd& H, const Eigen::MatrixXd& B);

// SVD rank with the given tolerance policy; the report carries every singular
// value so callers can re-decide.
ControllabilityReport numerical_rank(const Eigen::MatrixXd& M, TolerancePolicy policy = {});

// Rank verdict for the pair (-c I + A, B), evaluated on [B, AB, ..., A^{n-1}B].
// The diagonal shift relates the two Krylov matrices by an invertible binomial
// block-column transform, so the rank is identical, while the shifted form's
// clustered spectrum would sink sigma_min below the spectral tolerance long
// before the pair actually loses controllability.
ControllabilityReport krylov_rank_report(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                         TolerancePolicy policy = {});

// Draws `samples` weight matrices with the zero pattern and edge signs of g
// (uniform inside the sign's bound interval, one independent substream per
// sample), forms H = -C_n + A and tests the controllability-matrix rank.
// Controllable if at least one sample is full rank; the full-rank fraction is
// reported as the genericity diagnostic. The report carries the best sample.
ControllabilityReport structural_controllability_test(const SignedGraph& g,
                                                      const NetworkParams& p, int samples,
                                                      std::uint64_t rng_seed);

struct StabilityCertificate {
  bool diagonally_dominant = false;
  double gershgorin_margin = 0.0;  // min over rows of c_n - sum_j |a_ij|
  double max_real_eigenvalue = 0.0;  // of H = -C_n + A
  bool hurwitz = false;
};

// A must be symmetric with zero diagonal. Dominance (margin > 0) implies
// Hurwitz by the Gershgorin circle theorem; the certificate carries both so
// callers can assert the implication.
StabilityCertificate stability_certificate(const Eigen::MatrixXd& A, double c_n);

// (max{d_max a_plus_hi, d_max |a_minus_lo|} < c_n, slack).
std::pair<bool, double> boundedness_condition(const SignedGraph& g, const NetworkParams& p);

struct LqrSolution {
  Eigen::MatrixXd P;  // stabilizing CARE solution, symmetric PSD
  Eigen::MatrixXd K;  // R^{-1} B^T P
  double care_residual = 0.0;  // ||H'P + PH - PBR^{-1}B'P + Q||_inf
  Eigen::MatrixXd q_weight;
  Eigen::MatrixXd r_weight;
  std::vector<std::complex<double>> closed_loop_spectrum;  // eig(H - BK)
};

// Stabilizing CARE solution via the stable invariant subspace of the
// Hamiltonian matrix, polished by Newton-Kleinman iterations (Lyapunov solves
// in Kronecker form) until the residual is at most 1e-8. Throws
// NotStabilizable or IllConditioned.
LqrSolution solve_care(const Eigen::MatrixXd& H, const Eigen::MatrixXd& B,
                       const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R);

struct RegulatorDesign {
  LqrSolution lqr;
  Eigen::VectorXd feedforward;   // least-squares solution of B u_ff = (C_n - A) target
  double target_residual = 0.0;  // ||(A - C_n) target + B u_ff||_inf
  InputSignal input;             // feedback law ready for simulate()
};

// LQR regulation toward `target` with Q = I, R = I. When recompute_each_slot
// is set the gain and feedforward are refreshed at every tau boundary from the
// current weights.
RegulatorDesign lqr_regulate(const SignedGraph& g, const NetworkParams& p,
                             const Eigen::VectorXd& target, bool recompute_each_slot = true);

}  // namespace neurocactus
