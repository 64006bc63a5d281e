#pragma once

#include <cmath>

#include <Eigen/Core>

#include "roadweights/errors.hpp"

namespace roadweights {

struct CgOptions {
  double tol = 1e-8;   // on ‖b − Ax‖₂ / ‖b‖₂
  int max_iters = 0;   // 0 selects 10 · dim
};

struct CgResult {
  Eigen::VectorXd x;
  int iterations = 0;
  double relative_residual = 0.0;  // true residual, recomputed at exit
};

// Conjugate gradient for a symmetric positive definite operator given as
// `apply(x, y)` computing y = A·x. An optional inverse diagonal turns it into
// Jacobi-preconditioned CG. Starts from x = 0. When the recursively updated
// residual meets the tolerance but the true one does not, the iteration is
// restarted from the current iterate. Throws ConvergenceError when the
// iteration budget runs out.
template <typename ApplyFn>
CgResult conjugate_gradient(ApplyFn&& apply, const Eigen::VectorXd& b,
                            const CgOptions& options,
                            const Eigen::VectorXd* inverse_diagonal = nullptr) {
  const Eigen::Index n = b.size();
  CgResult out;
  out.x = Eigen::VectorXd::Zero(n);
  const double b_norm = b.norm();
  if (b_norm == 0.0) return out;
  const int max_iters =
      options.max_iters > 0 ? options.max_iters : static_cast<int>(10 * n);

  auto precondition = [&](const Eigen::VectorXd& r) -> Eigen::VectorXd {
    if (inverse_diagonal) return r.cwiseProduct(*inverse_diagonal);
    return r;
  };

  Eigen::VectorXd r = b;
  Eigen::VectorXd q(n);
  for (;;) {
    out.relative_residual = r.norm() / b_norm;
    if (out.relative_residual <= options.tol) return out;
    if (out.iterations >= max_iters)
      throw ConvergenceError("conjugate gradient", out.relative_residual,
                             out.iterations);

    Eigen::VectorXd z = precondition(r);
    Eigen::VectorXd p = z;
    double rz = r.dot(z);
    while (out.iterations < max_iters) {
      apply(p, q);
      const double pq = p.dot(q);
      if (!(pq > 0.0))
        throw_contract("conjugate gradient: operator is not positive definite");
      const double step = rz / pq;
      out.x.noalias() += step * p;
      r.noalias() -= step * q;
      ++out.iterations;
      if (r.norm() / b_norm <= options.tol) break;
      z = precondition(r);
      const double rz_next = r.dot(z);
      p = z + (rz_next / rz) * p;
      rz = rz_next;
    }
    apply(out.x, q);
    r = b - q;
  }
}

}  // namespace roadweights
