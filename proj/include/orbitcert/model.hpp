#ifndef ORBITCERT_MODEL_HPP
#include <type_traits>
#define ORBITCERT_MODEL_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "orbitcert/errors.hpp"
#include "orbitcert/rational.hpp"

namespace orbitcert {

enum class Involution { NegTranspose, Identity };

struct Tolerances {
  double group = 1e-9;
  double manifold = 1e-9;
};

/// A point of the model's homogeneous space: an SPD matrix for "sl", an
/// upper-sheet hyperboloid vector for "so1n", a unit vector for "hopf".
struct Point {
  std::string model;
  Eigen::MatrixXd coords;
};

/// Concrete matrix realization of one ambient geometry: Lie algebra basis
/// with exact rational entries, Cartan involution, trace-form scale, base
/// point and tolerances.
struct MatrixModel {
  std::string name;  // "sl" | "so1n" | "hopf"
  int n = 0;
  int matrix_size = 0;   // side length of the ambient matrices
  int ambient_dim = 0;   // dimension of the Lie algebra
  std::vector<RatMat> basis;
  Involution theta_kind = Involution::NegTranspose;
  Rat killing_scale;     // c with B(X, Y) = c tr(XY)
  Point origin;
  std::string point_space;
  Tolerances tol;

  std::string id() const { return name + "(" + std::to_string(n) + ")"; }
};

/// name in {sl, so1n, hopf}; n >= 2 for sl and so1n, n >= 1 for hopf.
MatrixModel make_model(const std::string& name, int n, Tolerances tol = {});

RatMat theta(const MatrixModel& m, const RatMat& x);
Eigen::MatrixXd theta(const MatrixModel& m, const Eigen::MatrixXd& x);

/// Commutator XY - YX.  Shape-checked; mixed exact/floating operands are
/// promoted to double.
template <typename D1, typename D2>
auto bracket(const Eigen::MatrixBase<D1>& x, const Eigen::MatrixBase<D2>& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols() || x.rows() != x.cols())
    throw DimensionError("bracket: operands must be square matrices of equal size");
  if constexpr (std::is_same_v<typename D1::Scalar, typename D2::Scalar>) {
    return (x * y - y * x).eval();
  } else {
    const auto promote = [](const auto& m) {
      if constexpr (std::is_same_v<typename std::decay_t<decltype(m)>::Scalar, Rat>)
        return to_double(m.eval());
      else
        return Eigen::MatrixXd(m);
    };
    const Eigen::MatrixXd xd = promote(x), yd = promote(y);
    return Eigen::MatrixXd(xd * yd - yd * xd);
  }
}

/// <X, Y> = -c tr(X theta(Y)); positive definite on the model's algebra.
Rat inner(const MatrixModel& m, const RatMat& x, const RatMat& y);
double inner(const MatrixModel& m, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

/// Membership of g in the acting group, within tol.
bool in_group(const MatrixModel& m, const Eigen::MatrixXd& g, double tol);

/// Throws DomainError when p violates the model's point invariants.
void validate_point(const MatrixModel& m, const Point& p);

/// g.p; throws DomainError when g is outside the group tolerance.
Point act(const MatrixModel& m, const Eigen::MatrixXd& g, const Point& p);

/// Unvalidated action used by samplers and optimizers.
Eigen::MatrixXd apply_raw(const MatrixModel& m, const Eigen::MatrixXd& g,
                          const Eigen::MatrixXd& coords);

/// exp(tX).p through the matrix exponential.
Point exp_ray(const MatrixModel& m, const Eigen::MatrixXd& x, double t, const Point& p);

/// Geodesic distance in the metric induced by <,> (sl, so1n) or the unit
/// round metric (hopf).
double distance(const MatrixModel& m, const Point& p, const Point& q);

/// Distance normalization constant: d_sl = sqrt(mu * sum log^2 eig(p^-1 q)).
double spd_metric_scale(const MatrixModel& m);

/// Exact bases of the +1/-1 eigenspaces of theta.
std::vector<RatMat> cartan_k(const MatrixModel& m);
std::vector<RatMat> cartan_p(const MatrixModel& m);

/// Complex structure J (multiplication by i in the real picture); hopf only.
RatMat complex_structure(const MatrixModel& m);

nlohmann::ordered_json descriptor(const MatrixModel& m);
MatrixModel model_from_descriptor(const nlohmann::ordered_json& j);

}  // namespace orbitcert

#endif
