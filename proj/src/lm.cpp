#include "cqed/lm.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "cqed/errors.hpp"

namespace cqed {

namespace {

Eigen::MatrixXd numeric_jacobian(const ResidualFn& fn, const Eigen::VectorXd& p,
                                 const Eigen::VectorXd& scales, double step_rel,
                                 int m) {
  const int n = static_cast<int>(p.size());
  Eigen::MatrixXd J(m, n);
  for (int j = 0; j < n; ++j) {
    double h = step_rel * std::max(std::abs(p[j]), scales[j]);
    if (h == 0.0) h = step_rel;
    Eigen::VectorXd pp = p, pm = p;
    pp[j] += h;
    pm[j] -= h;
    J.col(j) = (fn(pp) - fn(pm)) / (2.0 * h);
  }
  return J;
}

}  // namespace

LmResult lm_fit(const ResidualFn& fn, const Eigen::VectorXd& p0,
                const Eigen::VectorXd& scales, const LmOptions& opt) {
  const int n = static_cast<int>(p0.size());
  if (scales.size() != n) throw ConfigError("lm_fit: scales size mismatch");

  Eigen::VectorXd p = p0;
  Eigen::VectorXd r = fn(p);
  const int m = static_cast<int>(r.size());
  if (m < n) throw ConfigError("lm_fit: fewer residuals than parameters");
  double ssr = r.squaredNorm();
  double lambda = opt.lambda0;

  LmResult out;
  int it = 0;
  for (; it < opt.max_iter; ++it) {
    Eigen::MatrixXd J = numeric_jacobian(fn, p, scales, opt.step_rel, m);
    // scaled space: x = p / s  =>  J_x = J * diag(s)
    Eigen::MatrixXd Js = J * scales.asDiagonal();
    Eigen::MatrixXd JtJ = Js.transpose() * Js;
    Eigen::VectorXd g = Js.transpose() * r;
    if (g.lpNorm<Eigen::Infinity>() < 1e-14 * std::max(1.0, ssr)) break;

    bool stepped = false;
    for (int tries = 0; tries < 40; ++tries) {
      Eigen::MatrixXd A = JtJ;
      for (int k = 0; k < n; ++k)
        A(k, k) += lambda * std::max(JtJ(k, k), 1e-30);
      Eigen::VectorXd dx = A.ldlt().solve(-g);
      Eigen::VectorXd pn = p + scales.asDiagonal() * dx;
      Eigen::VectorXd rn = fn(pn);
      double ssrn = rn.squaredNorm();
      if (std::isfinite(ssrn) && ssrn < ssr) {
        double improve = (ssr - ssrn) / std::max(ssr, 1e-300);
        p = pn;
        r = rn;
        ssr = ssrn;
        lambda = std::max(lambda / 3.0, 1e-12);
        stepped = true;
        if (std::getenv("CQED_LM_DEBUG"))
          std::fprintf(stderr, "lm it=%d ssr=%.6e improve=%.3e dx=%.3e lambda=%.1e\n",
                       it, ssr, improve, dx.norm(), lambda);
        bool step_small = true;
        for (int k = 0; k < n; ++k)
          if (std::abs(dx[k]) >
              opt.tol_step * std::max(1.0, std::abs(p[k] / scales[k])))
            step_small = false;
        if (improve < opt.tol_ssr || step_small) out.converged = true;
        break;
      }
      lambda *= 5.0;
      if (lambda > 1e12) break;
    }
    if (!stepped) {
      out.converged = true;  // stuck in a basin: accept current point
      break;
    }
    if (out.converged) break;
  }
  if (it == opt.max_iter) out.converged = false;

  // covariance from the final Jacobian, residual-variance scaled
  Eigen::MatrixXd J = numeric_jacobian(fn, p, scales, opt.step_rel, m);
  Eigen::MatrixXd JtJ = J.transpose() * J;
  double dof = std::max(1, m - n);
  double sigma2 = ssr / dof;
  Eigen::MatrixXd cov =
      JtJ.ldlt().solve(Eigen::MatrixXd::Identity(n, n)) * sigma2;

  out.params = p;
  out.covariance = cov;
  out.ssr = ssr;
  out.residual_rms = std::sqrt(ssr / m);
  out.iterations = it;
  return out;
}

LmResult lm_fit(const ResidualFn& fn, const Eigen::VectorXd& p0,
                const LmOptions& opt) {
  Eigen::VectorXd scales =
      p0.cwiseAbs().cwiseMax(Eigen::VectorXd::Constant(p0.size(), 1e-8));
  return lm_fit(fn, p0, scales, opt);
}

}  // namespace cqed
