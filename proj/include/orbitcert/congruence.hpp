#ifndef ORBITCERT_CONGRUENCE_HPP
#define ORBITCERT_CONGRUENCE_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "orbitcert/model.hpp"
#include "orbitcert/rng.hpp"
#include "orbitcert/rootspace.hpp"
#include "orbitcert/subalgebra.hpp"

namespace orbitcert {

/// The transitive group data of a model: the Iwasawa solvable algebra for the
/// noncompact models, the full unitary algebra for hopf.
struct ActionContext {
  MatrixModel model;
  std::optional<RootSpaceDecomposition> dec;
  std::optional<PositiveSystem> ps;
  Subalgebra s;          // algebra of the transitively acting group
  Subalgebra nilpotent;  // n (noncompact models only)
};

ActionContext make_action_context(const MatrixModel& m);

/// Center of u(n+1); the hopf congruence subalgebra.
Subalgebra hopf_center(const MatrixModel& m);

/// The unique element of the acting group S with s.origin = p.  Closed form:
/// ordered Cholesky factor (sl), horospherical coordinates (so1n), a unitary
/// completion (hopf, any unitary moving origin to p).
Eigen::MatrixXd transitive_representative(const ActionContext& ctx, const Point& p);

/// g in S with g.q = p, built as rep(p) rep(q)^{-1}.
Eigen::MatrixXd transitive_conjugator(const ActionContext& ctx, const Point& p, const Point& q);

/// Largest principal-angle sine between Ad(g) s' and s', computed as the
/// spectral norm of the projection residual (exact for small angles).
double ad_normality(const MatrixModel& m, const Eigen::MatrixXd& g, const Subalgebra& s_prime);

/// Precomputed one-parameter-factor exponentials for exponential coordinates
/// of the second kind over a subalgebra basis.  Factors with closed forms
/// (diagonal, nilpotent, b^3 = +-b) avoid the general matrix exponential.
class OrbitMachine {
 public:
  OrbitMachine(const MatrixModel& m, const Subalgebra& sub);

  int dim() const { return static_cast<int>(basis_.size()); }
  Eigen::MatrixXd group_element(const Eigen::VectorXd& theta) const;
  Eigen::MatrixXd apply(const Eigen::VectorXd& theta, const Eigen::MatrixXd& base) const;
  const MatrixModel& model() const { return *model_; }

  /// Least-squares coordinates of the principal matrix log of a group
  /// element (first-kind coordinates).
  Eigen::VectorXd log_coordinates(const Eigen::MatrixXd& group_elem) const;

  /// Second-kind coordinates of a group element, by peeling factors: the
  /// basis suffixes span ideals, so log(h) matches theta_j b_j modulo the
  /// suffix ideal and the leading coordinate can be read off exactly.
  Eigen::VectorXd second_kind_coordinates(Eigen::MatrixXd group_elem) const;

 private:
  enum class Kind { Diagonal, Nilpotent, BoostLike, RotationLike, General };
  Eigen::MatrixXd factor(int i, double t) const;

  const MatrixModel* model_;
  std::vector<Eigen::MatrixXd> basis_;
  std::vector<Kind> kind_;
  std::vector<std::vector<Eigen::MatrixXd>> powers_;
  Eigen::MatrixXd basis_stack_;  // vectorized basis columns
};

struct OrbitSample {
  Point basepoint;
  std::string recipe;
  std::vector<Eigen::VectorXd> parameters;
  std::vector<Point> points;
};

/// Deterministic sample of the orbit through base: Halton coordinates in
/// [-radius, radius]^dim through second-kind exponential coordinates; the
/// zero coordinate comes first.  The hopf circle is sampled by uniform
/// angles of the circle action directly.
OrbitSample sample_orbit(const MatrixModel& m, const Subalgebra& s_prime, const Point& base,
                         int budget, double radius);

struct OrbitDistanceOptions {
  int multistarts = 4;
  int max_iter = 240;        // per start
  double radius = 1.0;
  double early_exit = 1e-8;  // stop multistarts once below
};

struct OrbitDistance {
  double value = 0.0;
  bool converged = false;
};

/// Upper bound on dist(x, S'.base) by multistart simplex descent over the
/// exponential coordinates; `hint` seeds the first start.
OrbitDistance distance_to_orbit(const MatrixModel& m, const Point& x, const Subalgebra& s_prime,
                                const Point& base, const OrbitDistanceOptions& opts = {},
                                const Eigen::VectorXd* hint = nullptr);
OrbitDistance distance_to_orbit(const OrbitMachine& machine, const Point& x, const Point& base,
                                const OrbitDistanceOptions& opts = {},
                                const Eigen::VectorXd* hint = nullptr);

struct CongruenceConfig {
  double tol_conjugator = 1e-9;
  double tol_normality = 1e-9;
  double tol_orbit = 1e-6;
  double tol_circumference = 1e-6;  // hopf circles
  int samples = 64;
  double radius = 1.0;
  bool bidirectional = true;
  OrbitDistanceOptions search;
};

struct CongruenceReport {
  std::string model_id;
  std::string recipe;
  std::vector<int> phi;
  Eigen::MatrixXd conjugator;
  double conjugator_residual = 0.0;
  double normality_residual = 0.0;
  double max_distance_to_orbit = 0.0;
  int samples_used = 0;
  int unconverged = 0;
  std::optional<double> circumference_q;  // hopf only
  std::optional<double> circumference_p;
  bool pass = false;
  CongruenceConfig config;
};

/// Full certificate for one point pair: conjugator residual, Ad-normality,
/// sampled distance-to-orbit in both directions.  Refuses to run unless
/// is_ideal(s', s) holds (the congruence conclusion is only claimed under
/// that hypothesis).
CongruenceReport verify_congruence(const ActionContext& ctx, const Subalgebra& s_prime,
                                   const Point& p, const Point& q,
                                   const CongruenceConfig& cfg = {});

/// Deterministic random point of the model's space.
Point random_point(const ActionContext& ctx, Rng& rng);

nlohmann::ordered_json to_json(const CongruenceReport& r);

}  // namespace orbitcert

#endif
