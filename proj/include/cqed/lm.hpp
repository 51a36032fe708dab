#pragma once
#include <Eigen/Dense>
#include <functional>

namespace cqed {

// Damped (Levenberg-Marquardt) nonlinear least squares with a numeric
// Jacobian. `scales` sets the typical magnitude of each parameter; steps and
// damping are taken in scaled space so wildly different magnitudes
// (frequencies ~5e3 vs amplitudes ~1e-4) stay well conditioned.
struct LmOptions {
  int max_iter = 400;
  double lambda0 = 1e-3;
  double step_rel = 1e-6;
  double tol_ssr = 1e-14;  // relative SSR improvement
  double tol_step = 1e-8;  // per-component step, relative to the scaled param
};

struct LmResult {
  Eigen::VectorXd params;
  Eigen::MatrixXd covariance;  // sigma^2 (J'J)^-1, residual-variance scaled
  double residual_rms = 0.0;
  double ssr = 0.0;
  int iterations = 0;
  bool converged = false;
};

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

LmResult lm_fit(const ResidualFn& fn, const Eigen::VectorXd& p0,
                const Eigen::VectorXd& scales, const LmOptions& opt = {});

LmResult lm_fit(const ResidualFn& fn, const Eigen::VectorXd& p0,
                const LmOptions& opt = {});

}  // namespace cqed
