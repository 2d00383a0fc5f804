#ifndef ORBITCERT_SIMPLEX_HPP
#define ORBITCERT_SIMPLEX_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <utility>
#include <vector>

namespace orbitcert {

struct SimplexOptions {
  int max_iter = 400;       // function evaluations cap
  double ftol = 1e-13;      // absolute spread of simplex values
  double xtol = 1e-11;      // simplex diameter
};

struct SimplexResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Nelder-Mead downhill simplex with standard coefficients.  Deterministic:
/// ties are broken by index order.
template <typename F>
SimplexResult nelder_mead(F&& f, const Eigen::VectorXd& start, double step,
                          const SimplexOptions& opt = {}) {
  const int n = static_cast<int>(start.size());
  SimplexResult res;
  if (n == 0) {
    res.x = start;
    res.value = f(start);
    res.evaluations = 1;
    res.converged = true;
    return res;
  }

  std::vector<Eigen::VectorXd> x(n + 1, start);
  std::vector<double> fx(n + 1);
  for (int i = 1; i <= n; ++i) x[i](i - 1) += step;
  int evals = 0;
  for (int i = 0; i <= n; ++i) fx[i] = f(x[i]), ++evals;

  const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
  std::vector<int> order(n + 1);

  while (evals < opt.max_iter) {
    for (int i = 0; i <= n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return fx[a] < fx[b]; });
    const int best = order[0], worst = order[n], second = order[n - 1];

    double diam = 0.0;
    for (int i = 1; i <= n; ++i)
      diam = std::max(diam, (x[order[i]] - x[best]).lpNorm<Eigen::Infinity>());
    if (fx[worst] - fx[best] < opt.ftol || diam < opt.xtol) {
      res.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i <= n; ++i)
      if (i != worst) centroid += x[i];
    centroid /= n;

    Eigen::VectorXd xr = centroid + alpha * (centroid - x[worst]);
    const double fr = f(xr);
    ++evals;
    if (fr < fx[best]) {
      Eigen::VectorXd xe = centroid + gamma * (xr - centroid);
      const double fe = f(xe);
      ++evals;
      if (fe < fr) {
        x[worst] = std::move(xe);
        fx[worst] = fe;
      } else {
        x[worst] = std::move(xr);
        fx[worst] = fr;
      }
    } else if (fr < fx[second]) {
      x[worst] = std::move(xr);
      fx[worst] = fr;
    } else {
      const bool outside = fr < fx[worst];
      Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + rho * (xr - centroid))
                                   : Eigen::VectorXd(centroid - rho * (centroid - x[worst]));
      const double fc = f(xc);
      ++evals;
      if (fc < std::min(fr, fx[worst])) {
        x[worst] = std::move(xc);
        fx[worst] = fc;
      } else {
        for (int i = 0; i <= n; ++i) {
          if (i == best) continue;
          x[i] = x[best] + sigma * (x[i] - x[best]);
          fx[i] = f(x[i]);
          ++evals;
        }
      }
    }
  }

  int best = 0;
  for (int i = 1; i <= n; ++i)
    if (fx[i] < fx[best]) best = i;
  res.x = x[best];
  res.value = fx[best];
  res.evaluations = evals;
  return res;
}

}  // namespace orbitcert

#endif
