#include "orbitcert/model.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

#include "orbitcert/exact.hpp"

namespace orbitcert {

namespace {

RatMat emat(int size, int i, int j) {
  RatMat m = RatMat::Zero(size, size);
  m(i, j) = 1;
  return m;
}

/// Real picture of the complex matrix A + iB acting on stacked (re; im).
RatMat realify(const RatMat& a, const RatMat& b) {
  const Eigen::Index s = a.rows();
  RatMat m = RatMat::Zero(2 * s, 2 * s);
  m.block(0, 0, s, s) = a;
  m.block(0, s, s, s) = -b;
  m.block(s, 0, s, s) = b;
  m.block(s, s, s, s) = a;
  return m;
}

std::vector<RatMat> sl_basis(int n) {
  std::vector<RatMat> basis;
  for (int k = 0; k + 1 < n; ++k) basis.push_back(emat(n, k, k) - emat(n, k + 1, k + 1));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      basis.push_back(emat(n, i, j));
      basis.push_back(emat(n, j, i));
    }
  return basis;
}

std::vector<RatMat> so1n_basis(int n) {
  const int s = n + 1;
  std::vector<RatMat> basis;
  for (int i = 1; i <= n; ++i) basis.push_back(emat(s, 0, i) + emat(s, i, 0));
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) basis.push_back(emat(s, i, j) - emat(s, j, i));
  return basis;
}

std::vector<RatMat> unitary_basis(int n) {
  const int s = n + 1;
  const RatMat zero = RatMat::Zero(s, s);
  std::vector<RatMat> basis;
  for (int j = 0; j < s; ++j) basis.push_back(realify(zero, emat(s, j, j)));
  for (int j = 0; j < s; ++j)
    for (int k = j + 1; k < s; ++k) {
      basis.push_back(realify(emat(s, j, k) - emat(s, k, j), zero));
      basis.push_back(realify(zero, emat(s, j, k) + emat(s, k, j)));
    }
  return basis;
}

double minkowski(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v) {
  double s = -u(0, 0) * v(0, 0);
  for (Eigen::Index i = 1; i < u.rows(); ++i) s += u(i, 0) * v(i, 0);
  return s;
}

}  // namespace

MatrixModel make_model(const std::string& name, int n, Tolerances tol) {
  MatrixModel m;
  m.name = name;
  m.n = n;
  m.tol = tol;
  if (name == "sl") {
    if (n < 2) throw ConfigError("make_model: n must be >= 2 for model 'sl'");
    m.matrix_size = n;
    m.basis = sl_basis(n);
    m.theta_kind = Involution::NegTranspose;
    m.killing_scale = Rat(2 * n);
    m.origin = {m.id(), Eigen::MatrixXd::Identity(n, n)};
    m.point_space = "unit-determinant symmetric positive-definite matrices";
  } else if (name == "so1n") {
    if (n < 2) throw ConfigError("make_model: n must be >= 2 for model 'so1n'");
    m.matrix_size = n + 1;
    m.basis = so1n_basis(n);
    m.theta_kind = Involution::NegTranspose;
    m.killing_scale = Rat(n - 1);
    Eigen::MatrixXd o = Eigen::MatrixXd::Zero(n + 1, 1);
    o(0, 0) = 1.0;
    m.origin = {m.id(), o};
    m.point_space = "upper-sheet hyperboloid vectors";
  } else if (name == "hopf") {
    if (n < 1) throw ConfigError("make_model: n must be >= 1 for model 'hopf'");
    m.matrix_size = 2 * (n + 1);
    m.basis = unitary_basis(n);
    m.theta_kind = Involution::Identity;
    // The ad-trace form of u(n+1) is degenerate on the center; the model uses
    // the plain trace form, for which -B(X, X) = ||X||_F^2 > 0 on skew X.
    m.killing_scale = Rat(1);
    Eigen::MatrixXd o = Eigen::MatrixXd::Zero(2 * (n + 1), 1);
    o(0, 0) = 1.0;
    m.origin = {m.id(), o};
    m.point_space = "unit vectors in C^(n+1) viewed as real vectors";
  } else {
    throw ConfigError("make_model: unsupported name '" + name + "'");
  }
  m.ambient_dim = static_cast<int>(m.basis.size());
  return m;
}

RatMat theta(const MatrixModel& m, const RatMat& x) {
  if (m.theta_kind == Involution::NegTranspose) return (-x.transpose()).eval();
  return x;
}

Eigen::MatrixXd theta(const MatrixModel& m, const Eigen::MatrixXd& x) {
  if (m.theta_kind == Involution::NegTranspose) return -x.transpose();
  return x;
}

Rat inner(const MatrixModel& m, const RatMat& x, const RatMat& y) {
  if (x.rows() != m.matrix_size || y.rows() != m.matrix_size || x.rows() != x.cols() ||
      y.rows() != y.cols())
    throw DimensionError("inner: operands must match the model's matrix size");
  const RatMat p = x * theta(m, y);
  return -m.killing_scale * p.trace();
}

double inner(const MatrixModel& m, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  if (x.rows() != m.matrix_size || y.rows() != m.matrix_size)
    throw DimensionError("inner: operands must match the model's matrix size");
  return -to_double(m.killing_scale) * (x * theta(m, y)).trace();
}

bool in_group(const MatrixModel& m, const Eigen::MatrixXd& g, double tol) {
  if (g.rows() != m.matrix_size || g.cols() != m.matrix_size) return false;
  if (!g.allFinite()) return false;
  if (m.name == "sl") return std::abs(g.determinant() - 1.0) <= tol;
  if (m.name == "so1n") {
    Eigen::MatrixXd eta = Eigen::MatrixXd::Identity(g.rows(), g.rows());
    eta(0, 0) = -1.0;
    if ((g.transpose() * eta * g - eta).cwiseAbs().maxCoeff() > tol) return false;
    return g(0, 0) > 0.0;  // identity component: preserves the upper sheet
  }
  // hopf: orthogonal and complex-linear
  const Eigen::Index s = g.rows();
  if ((g.transpose() * g - Eigen::MatrixXd::Identity(s, s)).cwiseAbs().maxCoeff() > tol)
    return false;
  const Eigen::MatrixXd j = to_double(complex_structure(m));
  return (g * j - j * g).cwiseAbs().maxCoeff() <= tol;
}

void validate_point(const MatrixModel& m, const Point& p) {
  if (p.model != m.id())
    throw ArgumentError("point belongs to model " + p.model + ", expected " + m.id());
  const auto& c = p.coords;
  if (!c.allFinite()) throw DomainError("point has non-finite coordinates");
  if (m.name == "sl") {
    if (c.rows() != m.matrix_size || c.cols() != m.matrix_size)
      throw DimensionError("point: wrong matrix size");
    if ((c - c.transpose()).cwiseAbs().maxCoeff() > m.tol.manifold)
      throw DomainError("point: not symmetric");
    if (std::abs(c.determinant() - 1.0) > m.tol.manifold)
      throw DomainError("point: determinant differs from 1");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <= 0.0) throw DomainError("point: not positive definite");
  } else if (m.name == "so1n") {
    if (c.rows() != m.matrix_size || c.cols() != 1)
      throw DimensionError("point: wrong vector size");
    if (std::abs(minkowski(c, c) + 1.0) > m.tol.manifold)
      throw DomainError("point: Minkowski norm differs from -1");
    if (c(0, 0) <= 0.0) throw DomainError("point: not on the upper sheet");
  } else {
    if (c.rows() != m.matrix_size || c.cols() != 1)
      throw DimensionError("point: wrong vector size");
    if (std::abs(c.norm() - 1.0) > 1e-12) throw DomainError("point: norm differs from 1");
  }
}

Eigen::MatrixXd apply_raw(const MatrixModel& m, const Eigen::MatrixXd& g,
                          const Eigen::MatrixXd& coords) {
  if (m.name == "sl") {
    Eigen::MatrixXd r = g * coords * g.transpose();
    return 0.5 * (r + r.transpose());
  }
  return g * coords;
}

Point act(const MatrixModel& m, const Eigen::MatrixXd& g, const Point& p) {
  if (!in_group(m, g, m.tol.group)) throw DomainError("act: g is outside the model's group");
  validate_point(m, p);
  return {m.id(), apply_raw(m, g, p.coords)};
}

Point exp_ray(const MatrixModel& m, const Eigen::MatrixXd& x, double t, const Point& p) {
  if (x.rows() != m.matrix_size || x.cols() != m.matrix_size)
    throw DimensionError("exp_ray: wrong matrix size");
  const Eigen::MatrixXd g = (t * x).exp();
  return {m.id(), apply_raw(m, g, p.coords)};
}

double spd_metric_scale(const MatrixModel& m) {
  // d(o, exp(X).o)^2 = <X, X> for X in p; exp(X).o = exp(2X), so the factor
  // on sum log^2 eig is c/4.
  return to_double(m.killing_scale) / 4.0;
}

double distance(const MatrixModel& m, const Point& p, const Point& q) {
  if (p.model != m.id() || q.model != m.id())
    throw ArgumentError("distance: points from a different model");
  if (m.name == "sl") {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(q.coords, p.coords,
                                                                 Eigen::EigenvaluesOnly |
                                                                     Eigen::Ax_lBx);
    const Eigen::VectorXd ev = es.eigenvalues();
    double s = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      if (!(ev(i) > 0.0)) throw NumericError("distance: non-positive relative spectrum");
      const double l = std::log(ev(i));
      s += l * l;
    }
    return std::sqrt(spd_metric_scale(m) * s);
  }
  if (m.name == "so1n") {
    // arccosh(-<p,q>) via the chord identity <q-p, q-p> = 2(-<p,q> - 1),
    // which is exact and avoids cancellation near zero distance
    const double c = to_double(m.killing_scale);
    const Eigen::MatrixXd diff = q.coords - p.coords;
    const double chord2 = std::max(0.0, minkowski(diff, diff));
    return std::sqrt(2.0 * c) * 2.0 * std::asinh(0.5 * std::sqrt(chord2));
  }
  // arccos(<p,q>) via the chord identity ||q - p|| = 2 sin(d/2)
  const double half_chord = std::clamp(0.5 * (q.coords - p.coords).norm(), 0.0, 1.0);
  return 2.0 * std::asin(half_chord);
}

namespace {

/// theta as a matrix on basis coordinates, plus the eigenspace extraction.
std::vector<RatMat> theta_eigenspace(const MatrixModel& m, int sign) {
  RatMat basis_cols(m.matrix_size * m.matrix_size, m.ambient_dim);
  for (int j = 0; j < m.ambient_dim; ++j) basis_cols.col(j) = vectorize(m.basis[j]);
  exact::CoordinateSolver solver(basis_cols);
  RatMat t(m.ambient_dim, m.ambient_dim);
  for (int j = 0; j < m.ambient_dim; ++j) {
    RatVec c;
    if (!solver.coords(vectorize(theta(m, m.basis[j])), &c))
      throw InternalError("theta does not preserve the algebra");
    t.col(j) = c;
  }
  RatMat k = exact::kernel(t - RatMat::Identity(m.ambient_dim, m.ambient_dim) * Rat(sign));
  std::vector<RatMat> out;
  for (Eigen::Index j = 0; j < k.cols(); ++j) {
    RatMat x = RatMat::Zero(m.matrix_size, m.matrix_size);
    for (int i = 0; i < m.ambient_dim; ++i) x += m.basis[i] * k(i, j);
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace

std::vector<RatMat> cartan_k(const MatrixModel& m) { return theta_eigenspace(m, 1); }
std::vector<RatMat> cartan_p(const MatrixModel& m) { return theta_eigenspace(m, -1); }

RatMat complex_structure(const MatrixModel& m) {
  if (m.name != "hopf") throw UnsupportedModelError("complex_structure: hopf model only");
  const int s = m.matrix_size / 2;
  return realify(RatMat::Zero(s, s), RatMat::Identity(s, s));
}

nlohmann::ordered_json descriptor(const MatrixModel& m) {
  return {{"name", m.name},
          {"n", m.n},
          {"tolerances", {{"group", m.tol.group}, {"manifold", m.tol.manifold}}}};
}

MatrixModel model_from_descriptor(const nlohmann::ordered_json& j) {
  Tolerances tol;
  if (j.contains("tolerances")) {
    tol.group = j["tolerances"].value("group", tol.group);
    tol.manifold = j["tolerances"].value("manifold", tol.manifold);
  }
  if (!j.contains("name")) throw ConfigError("model descriptor: missing field 'name'");
  if (!j.contains("n")) throw ConfigError("model descriptor: missing field 'n'");
  return make_model(j["name"].get<std::string>(), j["n"].get<int>(), tol);
}

}  // namespace orbitcert
