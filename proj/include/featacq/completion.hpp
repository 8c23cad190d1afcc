#pragma once

#include "featacq/classifier.hpp"
#include "featacq/matrix.hpp"

#include <optional>
#include <vector>

namespace featacq {

/// Hyperparameters of the supervised completion objective
///
///   F(Xh, f) = 1/2 ||R_Omega(Xh - X)||_F^2 + lambda1 ||Xh||_tr
///              + lambda2 (||Xh w + b - y||^2 + ridge ||w||^2)
///
/// and of the accelerated proximal gradient solver for its Xh-block.
struct CompletionConfig {
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double l_init = 1.1;  ///< initial Lipschitz estimate, > 1
  double gamma = 2.0;   ///< backtracking growth factor, > 1
  double theta0 = 1.0;  ///< initial momentum parameter, in (0, 1]
  int max_outer = 10;
  int max_inner = 300;
  double tol = 1e-6;     ///< relative objective change that ends a loop
  double ridge = 1.0;    ///< penalty on w inside the classifier block

  /// Throws ArgumentError if any bound is violated.
  void validate() const;

  friend bool operator==(const CompletionConfig&, const CompletionConfig&) = default;
};

/// Iterate state of the accelerated proximal gradient loop.
struct ApgState {
  Matrix x_curr;
  Matrix x_prev;
  Matrix z;
  double theta_curr = 1.0;
  double theta_prev = 1.0;
  double l = 1.1;
};

/// Both sides of the backtracking test at an accepted step:
/// lhs = g(X_{k+1}) + lambda1 ||X_{k+1}||_tr,
/// rhs = h(X_{k+1}, Z_k) + L/2 ||X_{k+1} - Z_k||_F^2.
struct MajorizationCertificate {
  double lhs = 0.0;
  double rhs = 0.0;
  double l = 0.0;
};

struct ApgOutcome {
  Matrix x;  ///< lowest-objective iterate, the warm start included
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  ApgState final_state;
  std::vector<MajorizationCertificate> certificates;
};

struct CompletionResult {
  Matrix x_hat;
  LinearModel model;
  std::vector<double> objective_trace;  ///< F after every outer round
  int inner_iterations = 0;
  bool converged = false;
};

/// Full objective F. Throws DimensionError on inconsistent shapes.
double objective(const Matrix& x_hat, const PartialMatrix& obs, const LinearModel& model,
                 const Vector& labels, const CompletionConfig& cfg);

/// Smooth part g(Z) = 1/2 ||R_Omega(Z - X)||_F^2 + lambda2 ||Z w + b - y||^2.
double smooth_loss(const Matrix& z, const PartialMatrix& obs, const LinearModel& model,
                   const Vector& labels, double lambda2);

/// grad g(Z) = R_Omega(Z - X) + 2 lambda2 (Z w + b - y) w^T.
Matrix grad_g(const Matrix& z, const PartialMatrix& obs, const LinearModel& model,
              const Vector& labels, double lambda2);

/// Singular value thresholding: U max(Sigma - tau, 0) V^T, the proximal
/// map of tau ||.||_tr.
Matrix svt(const Matrix& m, double tau);

/// Minimizes F over Xh with the model fixed, starting from warm_start.
/// Throws DivergenceError if the objective becomes non-finite.
ApgOutcome apg_minimize(const PartialMatrix& obs, const LinearModel& model, const Vector& labels,
                        const CompletionConfig& cfg, const Matrix& warm_start);

/// Alternates the Xh-block (apg_minimize) and the model block
/// (train_ridge) until the relative change of F drops below cfg.tol or
/// cfg.max_outer rounds have run. The model starts as the ridge fit on the
/// warm start, which defaults to project_omega(X).
CompletionResult fit(const PartialMatrix& obs, const Vector& labels, const CompletionConfig& cfg,
                     const std::optional<Matrix>& warm_start = std::nullopt);

}  // namespace featacq
