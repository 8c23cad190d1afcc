#include "featacq/completion.hpp"

#include "featacq/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace featacq {
namespace {

void check_shapes(const Matrix& x, const PartialMatrix& obs, const LinearModel& model,
                  const Vector& labels, const char* what) {
  if (x.rows() != obs.rows() || x.cols() != obs.cols()) {
    throw DimensionError(std::string(what) + ": matrix shape differs from observations");
  }
  if (labels.size() != obs.rows()) {
    throw DimensionError(std::string(what) + ": label count differs from row count");
  }
  if (model.weights.size() != obs.cols()) {
    throw DimensionError(std::string(what) + ": model dimension differs from column count");
  }
}

struct Shrunk {
  Matrix value;
  double trace_norm = 0.0;
};

Shrunk shrink(const Matrix& m, double tau) {
  require_finite(m, "svt");
  if (m.size() == 0) return {m, 0.0};
  Eigen::BDCSVD<Matrix> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector s = (dec.singularValues().array() - tau).max(0.0).matrix();
  Index keep = 0;
  while (keep < s.size() && s(keep) > 0.0) ++keep;
  Shrunk out;
  out.value.noalias() =
      dec.matrixU().leftCols(keep) * s.head(keep).asDiagonal() * dec.matrixV().leftCols(keep).transpose();
  out.trace_norm = s.sum();
  return out;
}

// lambda2 * ridge * ||w||^2, constant in the Xh-block.
double model_penalty(const LinearModel& model, const CompletionConfig& cfg) {
  return cfg.lambda2 * cfg.ridge * model.weights.squaredNorm();
}

bool small_change(double before, double after, double tol) {
  const double scale = std::max(std::abs(before), 1e-300);
  return std::abs(before - after) < tol * scale;
}

}  // namespace

void CompletionConfig::validate() const {
  if (!(lambda1 >= 0.0)) throw ArgumentError("lambda1 must be >= 0");
  if (!(lambda2 >= 0.0)) throw ArgumentError("lambda2 must be >= 0");
  if (!(l_init > 1.0)) throw ArgumentError("l_init must be > 1");
  if (!(gamma > 1.0)) throw ArgumentError("gamma must be > 1");
  if (!(theta0 > 0.0 && theta0 <= 1.0)) throw ArgumentError("theta0 must be in (0, 1]");
  if (max_outer < 1) throw ArgumentError("max_outer must be >= 1");
  if (max_inner < 1) throw ArgumentError("max_inner must be >= 1");
  if (!(tol > 0.0)) throw ArgumentError("tol must be > 0");
  if (!(ridge >= 0.0)) throw ArgumentError("ridge must be >= 0");
}

double smooth_loss(const Matrix& z, const PartialMatrix& obs, const LinearModel& model,
                   const Vector& labels, double lambda2) {
  check_shapes(z, obs, model, labels, "smooth_loss");
  const double data = 0.5 * project_omega(z - obs.values(), obs.mask()).squaredNorm();
  if (lambda2 == 0.0) return data;
  const Vector residual = (z * model.weights).array() + model.bias - labels.array();
  return data + lambda2 * residual.squaredNorm();
}

double objective(const Matrix& x_hat, const PartialMatrix& obs, const LinearModel& model,
                 const Vector& labels, const CompletionConfig& cfg) {
  const double g = smooth_loss(x_hat, obs, model, labels, cfg.lambda2);
  const double tr = cfg.lambda1 == 0.0 ? 0.0 : cfg.lambda1 * trace_norm(x_hat);
  return g + tr + model_penalty(model, cfg);
}

Matrix grad_g(const Matrix& z, const PartialMatrix& obs, const LinearModel& model,
              const Vector& labels, double lambda2) {
  check_shapes(z, obs, model, labels, "grad_g");
  Matrix grad = project_omega(z - obs.values(), obs.mask());
  if (lambda2 != 0.0) {
    const Vector residual = (z * model.weights).array() + model.bias - labels.array();
    grad.noalias() += (2.0 * lambda2) * residual * model.weights.transpose();
  }
  return grad;
}

Matrix svt(const Matrix& m, double tau) {
  if (!(tau >= 0.0)) throw ArgumentError("svt: tau must be >= 0");
  return shrink(m, tau).value;
}

ApgOutcome apg_minimize(const PartialMatrix& obs, const LinearModel& model, const Vector& labels,
                        const CompletionConfig& cfg, const Matrix& warm_start) {
  cfg.validate();
  check_shapes(warm_start, obs, model, labels, "apg_minimize");
  require_finite(warm_start, "apg_minimize warm start");

  const double lambda1 = cfg.lambda1;
  const double penalty = model_penalty(model, cfg);
  // Doublings of L past which a failing test is attributed to rounding.
  constexpr int kMaxBacktracks = 60;

  ApgOutcome out;
  ApgState& st = out.final_state;
  st.x_curr = warm_start;
  st.x_prev = warm_start;
  st.theta_curr = cfg.theta0;
  st.theta_prev = cfg.theta0;
  st.l = cfg.l_init;

  double f_last = objective(warm_start, obs, model, labels, cfg);
  if (!std::isfinite(f_last)) {
    throw DivergenceError("apg_minimize: non-finite objective at warm start", 0);
  }
  out.x = warm_start;
  out.objective = f_last;

  for (int k = 0; k < cfg.max_inner; ++k) {
    const double momentum = st.theta_curr * (1.0 / st.theta_prev - 1.0);
    st.z = st.x_curr + momentum * (st.x_curr - st.x_prev);
    const double g_z = smooth_loss(st.z, obs, model, labels, cfg.lambda2);
    const Matrix grad = grad_g(st.z, obs, model, labels, cfg.lambda2);

    Shrunk next;
    MajorizationCertificate cert;
    bool accepted = false;
    for (int b = 0; b <= kMaxBacktracks; ++b) {
      next = shrink(st.z - grad / st.l, lambda1 / st.l);
      const Matrix step = next.value - st.z;
      const double g_next = smooth_loss(next.value, obs, model, labels, cfg.lambda2);
      cert.lhs = g_next + lambda1 * next.trace_norm;
      cert.rhs = g_z + grad.cwiseProduct(step).sum() + lambda1 * next.trace_norm +
                 0.5 * st.l * step.squaredNorm();
      cert.l = st.l;
      if (!std::isfinite(cert.lhs) || !std::isfinite(cert.rhs)) {
        throw DivergenceError("apg_minimize: non-finite objective at iteration " + std::to_string(k),
                              k);
      }
      if (!(cert.lhs > cert.rhs)) {
        accepted = true;
        break;
      }
      st.l *= cfg.gamma;
    }
    if (!accepted) {
      // The test keeps failing as L grows only when both sides agree to
      // rounding; no further progress is possible from here.
      out.converged = true;
      break;
    }
    out.certificates.push_back(cert);
    ++out.iterations;

    const double theta_sq = st.theta_curr * st.theta_curr;
    const double theta_next = 0.5 * (std::sqrt(theta_sq * theta_sq + 4.0 * theta_sq) - theta_sq);
    st.theta_prev = st.theta_curr;
    st.theta_curr = theta_next;
    st.x_prev = std::move(st.x_curr);
    st.x_curr = std::move(next.value);

    const double f_next = cert.lhs + penalty;
    if (f_next < out.objective) {
      out.objective = f_next;
      out.x = st.x_curr;
    }
    if (small_change(f_last, f_next, cfg.tol)) {
      out.converged = true;
      break;
    }
    f_last = f_next;
  }
  return out;
}

CompletionResult fit(const PartialMatrix& obs, const Vector& labels, const CompletionConfig& cfg,
                     const std::optional<Matrix>& warm_start) {
  cfg.validate();
  if (labels.size() != obs.rows()) {
    throw DimensionError("fit: label count differs from row count");
  }
  require_binary_labels(labels);

  CompletionResult res;
  res.x_hat = warm_start ? *warm_start : project_omega(obs.values(), obs.mask());
  if (res.x_hat.rows() != obs.rows() || res.x_hat.cols() != obs.cols()) {
    throw DimensionError("fit: warm start shape differs from observations");
  }
  res.model = cfg.lambda2 > 0.0 ? train_ridge(res.x_hat, labels, cfg.ridge)
                                : LinearModel::zero(obs.cols());

  for (int round = 0; round < cfg.max_outer; ++round) {
    ApgOutcome apg = apg_minimize(obs, res.model, labels, cfg, res.x_hat);
    res.inner_iterations += apg.iterations;
    res.x_hat = std::move(apg.x);

    LinearModel candidate = train_ridge(res.x_hat, labels, cfg.ridge);
    double f = objective(res.x_hat, obs, candidate, labels, cfg);
    if (cfg.lambda2 > 0.0) {
      // Keep the incumbent if rounding makes the exact minimizer look worse.
      const double f_incumbent = objective(res.x_hat, obs, res.model, labels, cfg);
      if (f_incumbent < f) {
        candidate = res.model;
        f = f_incumbent;
      }
    }
    res.model = std::move(candidate);

    if (cfg.lambda2 == 0.0) {
      // The blocks decouple: one round is the exact block minimization.
      res.objective_trace.push_back(f);
      res.converged = apg.converged;
      break;
    }
    const bool done = !res.objective_trace.empty() && small_change(res.objective_trace.back(), f, cfg.tol);
    res.objective_trace.push_back(f);
    if (done) {
      res.converged = true;
      break;
    }
  }
  return res;
}

}  // namespace featacq
