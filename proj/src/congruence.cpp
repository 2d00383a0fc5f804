#include "orbitcert/congruence.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <complex>

#include "orbitcert/exact.hpp"
#include "orbitcert/simplex.hpp"

namespace orbitcert {

namespace {

Eigen::MatrixXd stack_double_columns(const std::vector<RatMat>& mats) {
  Eigen::MatrixXd cols(mats.front().size(), static_cast<Eigen::Index>(mats.size()));
  for (std::size_t j = 0; j < mats.size(); ++j) {
    const Eigen::MatrixXd d = to_double(mats[j]);
    cols.col(static_cast<Eigen::Index>(j)) =
        Eigen::Map<const Eigen::VectorXd>(d.data(), d.size());
  }
  return cols;
}

Eigen::VectorXd vec_double(const Eigen::MatrixXd& m) {
  return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

}  // namespace

ActionContext make_action_context(const MatrixModel& m) {
  ActionContext ctx;
  ctx.model = m;
  if (m.name == "hopf") {
    ctx.s = Subalgebra{m.id(), "full", {}, m.basis};
    return ctx;
  }
  ctx.dec = decompose(m, maximal_abelian(m));
  ctx.ps = positive_system(*ctx.dec);
  auto [n, s] = build_iwasawa(m, *ctx.dec, *ctx.ps);
  ctx.nilpotent = std::move(n);
  ctx.s = std::move(s);
  return ctx;
}

Subalgebra hopf_center(const MatrixModel& m) {
  return Subalgebra{m.id(), "center", {}, {complex_structure(m)}};
}

namespace {

/// sl: the unique upper-triangular-in-sigma-order factor u with u u^T = p,
/// where sigma orders the diagonal of the regular element descending.  That
/// group is exactly exp(a + n) for the chosen positive system.
Eigen::MatrixXd sl_representative(const ActionContext& ctx, const Eigen::MatrixXd& p) {
  const int n = ctx.model.n;
  RatVec reg_diag = RatVec::Zero(n);
  const RatVec& w = ctx.ps->regular_functional;
  for (int k = 0; k < ctx.dec->rank; ++k)
    for (int d = 0; d < n; ++d) reg_diag(d) += w(k) * ctx.dec->a_basis[k](d, d);
  std::vector<int> sigma(n);
  for (int i = 0; i < n; ++i) sigma[i] = i;
  std::stable_sort(sigma.begin(), sigma.end(),
                   [&](int a, int b) { return reg_diag(a) > reg_diag(b); });

  Eigen::MatrixXd perm = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) perm(sigma[k], k) = 1.0;
  const Eigen::MatrixXd ps = perm.transpose() * p * perm;

  // UL-style factorization via the antidiagonal flip of a Cholesky factor
  Eigen::MatrixXd flip = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) flip(k, n - 1 - k) = 1.0;
  Eigen::LLT<Eigen::MatrixXd> llt(flip * ps * flip);
  if (llt.info() != Eigen::Success)
    throw NumericError("transitive_representative: Cholesky failed on a corrupted point");
  const Eigen::MatrixXd upper = flip * Eigen::MatrixXd(llt.matrixL()) * flip;
  return perm * upper * perm.transpose();
}

/// so1n: horospherical closed form.  With A the standard boost and the
/// positive root space n = { X : [A, X] = X }, the null vector xi = e0 + e1
/// satisfies n xi = 0 and A xi = xi; then s = exp(sum x_i X_i) exp(t A) with
/// e^{-t} = m0 - m1 and x_i = e^t m_{i+1}.
Eigen::MatrixXd so1n_representative(const ActionContext& ctx, const Eigen::MatrixXd& m) {
  const int size = ctx.model.matrix_size;
  const double depth = m(0, 0) - m(1, 0);
  if (!(depth > 0.0)) throw NumericError("transitive_representative: point off the sheet");
  const double t = -std::log(depth);
  const double et = std::exp(t);

  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(size, size);
  for (int i = 2; i < size; ++i) {
    const double x = et * m(i, 0);
    // X_i = E(0,i) + E(i,0) + E(1,i) - E(i,1)
    z(0, i) += x;
    z(i, 0) += x;
    z(1, i) += x;
    z(i, 1) -= x;
  }
  Eigen::MatrixXd nil = Eigen::MatrixXd::Identity(size, size) + z + 0.5 * z * z;  // z^3 = 0

  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(size, size);
  a(0, 0) = std::cosh(t);
  a(1, 1) = std::cosh(t);
  a(0, 1) = std::sinh(t);
  a(1, 0) = std::sinh(t);
  return nil * a;
}

/// hopf: a unitary taking the origin to p, realified.
Eigen::MatrixXd hopf_representative(const ActionContext& ctx, const Eigen::MatrixXd& target,
                                    const Eigen::MatrixXd& source) {
  const int s = ctx.model.matrix_size / 2;
  using CVec = Eigen::VectorXcd;
  using CMat = Eigen::MatrixXcd;
  CVec cq(s), cp(s);
  for (int i = 0; i < s; ++i) {
    cq(i) = std::complex<double>(source(i, 0), source(s + i, 0));
    cp(i) = std::complex<double>(target(i, 0), target(s + i, 0));
  }
  const std::complex<double> a = cq.adjoint() * cp;
  CMat u = CMat::Identity(s, s);
  const CVec res = cp - a * cq;
  const double b = res.norm();
  if (b <= 1e-13) {
    const std::complex<double> phase = std::abs(a) > 0.5 ? a / std::abs(a) : 1.0;
    u += (phase - 1.0) * (cq * cq.adjoint());
  } else {
    const CVec u2 = res / b;
    const CVec orth = -std::conj(std::complex<double>(b)) * cq + std::conj(a) * u2;
    u -= cq * cq.adjoint();
    u -= u2 * u2.adjoint();
    u += cp * cq.adjoint();
    u += orth * u2.adjoint();
  }
  Eigen::MatrixXd g(2 * s, 2 * s);
  g.block(0, 0, s, s) = u.real();
  g.block(0, s, s, s) = -u.imag();
  g.block(s, 0, s, s) = u.imag();
  g.block(s, s, s, s) = u.real();
  return g;
}

}  // namespace

Eigen::MatrixXd transitive_representative(const ActionContext& ctx, const Point& p) {
  validate_point(ctx.model, p);
  if (ctx.model.name == "sl") return sl_representative(ctx, p.coords);
  if (ctx.model.name == "so1n") return so1n_representative(ctx, p.coords);
  return hopf_representative(ctx, p.coords, ctx.model.origin.coords);
}

Eigen::MatrixXd transitive_conjugator(const ActionContext& ctx, const Point& p, const Point& q) {
  if (ctx.model.name == "hopf") {
    // direct unitary q -> p, no detour through the origin
    validate_point(ctx.model, p);
    validate_point(ctx.model, q);
    return hopf_representative(ctx, p.coords, q.coords);
  }
  const Eigen::MatrixXd sp = transitive_representative(ctx, p);
  const Eigen::MatrixXd sq = transitive_representative(ctx, q);
  return sp * sq.inverse();
}

double ad_normality(const MatrixModel& m, const Eigen::MatrixXd& g, const Subalgebra& s_prime) {
  if (s_prime.basis.empty()) return 0.0;
  const Eigen::MatrixXd ginv = g.inverse();
  Eigen::MatrixXd moved(m.matrix_size * m.matrix_size, s_prime.dim());
  for (int j = 0; j < s_prime.dim(); ++j)
    moved.col(j) = vec_double(Eigen::MatrixXd(g * to_double(s_prime.basis[j]) * ginv));
  Eigen::MatrixXd fixed = stack_double_columns(s_prime.basis);

  const auto onb = [](const Eigen::MatrixXd& cols) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(cols);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(cols.rows(), cols.cols());
    return q;
  };
  const Eigen::MatrixXd q1 = onb(moved), q2 = onb(fixed);
  const Eigen::MatrixXd residual = q1 - q2 * (q2.transpose() * q1);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(residual);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

OrbitMachine::OrbitMachine(const MatrixModel& m, const Subalgebra& sub) : model_(&m) {
  for (const auto& b : sub.basis) {
    basis_.push_back(to_double(b));
    // classify with exact arithmetic
    bool diag = true;
    for (Eigen::Index i = 0; i < b.rows() && diag; ++i)
      for (Eigen::Index j = 0; j < b.cols(); ++j)
        if (i != j && b(i, j) != 0) {
          diag = false;
          break;
        }
    if (diag) {
      kind_.push_back(Kind::Diagonal);
      powers_.push_back({});
      continue;
    }
    std::vector<RatMat> pw{b};
    int nilpotent_at = -1;
    for (int k = 2; k <= m.matrix_size + 1; ++k) {
      pw.push_back(pw.back() * b);
      if (is_zero(pw.back())) {
        nilpotent_at = k;
        break;
      }
    }
    if (nilpotent_at > 0) {
      kind_.push_back(Kind::Nilpotent);
      std::vector<Eigen::MatrixXd> dp;
      for (int k = 0; k + 1 < nilpotent_at; ++k) dp.push_back(to_double(pw[k]));
      powers_.push_back(std::move(dp));
      continue;
    }
    const RatMat b3 = pw.size() >= 3 ? pw[2] : RatMat(b * b * b);
    if (is_zero(b3 - b)) {
      kind_.push_back(Kind::BoostLike);
      powers_.push_back({to_double(b), to_double(RatMat(b * b))});
      continue;
    }
    if (is_zero(b3 + b)) {
      kind_.push_back(Kind::RotationLike);
      powers_.push_back({to_double(b), to_double(RatMat(b * b))});
      continue;
    }
    kind_.push_back(Kind::General);
    powers_.push_back({});
  }
  if (!basis_.empty()) {
    basis_stack_.resize(basis_.front().size(), static_cast<Eigen::Index>(basis_.size()));
    for (std::size_t j = 0; j < basis_.size(); ++j)
      basis_stack_.col(static_cast<Eigen::Index>(j)) = vec_double(basis_[j]);
  }
}

Eigen::VectorXd OrbitMachine::log_coordinates(const Eigen::MatrixXd& group_elem) const {
  if (basis_.empty()) return Eigen::VectorXd(0);
  const Eigen::MatrixXd l = group_elem.log();
  if (!l.allFinite()) return Eigen::VectorXd::Zero(dim());
  Eigen::VectorXd theta =
      basis_stack_.colPivHouseholderQr().solve(vec_double(l));
  if (!theta.allFinite()) return Eigen::VectorXd::Zero(dim());
  return theta;
}

Eigen::VectorXd OrbitMachine::second_kind_coordinates(Eigen::MatrixXd group_elem) const {
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(dim());
  for (int j = 0; j < dim(); ++j) {
    const Eigen::VectorXd first_kind = log_coordinates(group_elem);
    theta(j) = first_kind(j);
    group_elem = factor(j, -theta(j)) * group_elem;
  }
  return theta;
}

Eigen::MatrixXd OrbitMachine::factor(int i, double t) const {
  const Eigen::MatrixXd& b = basis_[i];
  const Eigen::Index s = b.rows();
  switch (kind_[i]) {
    case Kind::Diagonal: {
      Eigen::MatrixXd g = Eigen::MatrixXd::Identity(s, s);
      for (Eigen::Index d = 0; d < s; ++d) g(d, d) = std::exp(t * b(d, d));
      return g;
    }
    case Kind::Nilpotent: {
      Eigen::MatrixXd g = Eigen::MatrixXd::Identity(s, s);
      double coef = 1.0;
      for (std::size_t k = 0; k < powers_[i].size(); ++k) {
        coef *= t / static_cast<double>(k + 1);
        g += coef * powers_[i][k];
      }
      return g;
    }
    case Kind::BoostLike:
      return Eigen::MatrixXd::Identity(s, s) + std::sinh(t) * powers_[i][0] +
             (std::cosh(t) - 1.0) * powers_[i][1];
    case Kind::RotationLike:
      return Eigen::MatrixXd::Identity(s, s) + std::sin(t) * powers_[i][0] +
             (1.0 - std::cos(t)) * powers_[i][1];
    case Kind::General:
    default:
      return Eigen::MatrixXd((t * b).exp());
  }
}

Eigen::MatrixXd OrbitMachine::group_element(const Eigen::VectorXd& theta) const {
  const Eigen::Index s = model_->matrix_size;
  Eigen::MatrixXd g = Eigen::MatrixXd::Identity(s, s);
  for (int i = 0; i < dim(); ++i)
    if (theta(i) != 0.0) g = g * factor(i, theta(i));
  return g;
}

Eigen::MatrixXd OrbitMachine::apply(const Eigen::VectorXd& theta,
                                    const Eigen::MatrixXd& base) const {
  return apply_raw(*model_, group_element(theta), base);
}

OrbitSample sample_orbit(const MatrixModel& m, const Subalgebra& s_prime, const Point& base,
                         int budget, double radius) {
  if (budget < 1) throw ArgumentError("sample_orbit: budget must be >= 1");
  if (!(radius > 0.0)) throw ArgumentError("sample_orbit: radius must be positive");
  validate_point(m, base);
  OrbitSample sample;
  sample.basepoint = base;
  sample.recipe = s_prime.recipe;

  if (m.name == "hopf" && s_prime.recipe == "center") {
    // circle action, uniform angles
    const Eigen::MatrixXd j = to_double(complex_structure(m));
    for (int k = 0; k < budget; ++k) {
      const double t = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(budget);
      Eigen::VectorXd theta(1);
      theta(0) = t;
      sample.parameters.push_back(theta);
      Eigen::MatrixXd coords = std::cos(t) * base.coords + std::sin(t) * (j * base.coords);
      sample.points.push_back({m.id(), std::move(coords)});
    }
    return sample;
  }

  OrbitMachine machine(m, s_prime);
  const int d = machine.dim();
  for (int k = 0; k < budget; ++k) {
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(d);
    if (k > 0)
      for (int i = 0; i < d; ++i)
        theta(i) = radius * (2.0 * halton(static_cast<std::uint64_t>(k), nth_prime(i)) - 1.0);
    sample.parameters.push_back(theta);
    sample.points.push_back({m.id(), machine.apply(theta, base.coords)});
  }
  return sample;
}

OrbitDistance distance_to_orbit(const OrbitMachine& machine, const Point& x, const Point& base,
                                const OrbitDistanceOptions& opts, const Eigen::VectorXd* hint) {
  const MatrixModel& m = machine.model();
  const int d = machine.dim();
  const auto objective = [&](const Eigen::VectorXd& theta) {
    Point cand{m.id(), machine.apply(theta, base.coords)};
    return distance(m, cand, x);
  };

  SimplexOptions sopt;
  sopt.max_iter = opts.max_iter;

  OrbitDistance best{std::numeric_limits<double>::infinity(), false};
  // Each start gets a few simplex rounds, restarting at the incumbent with a
  // shrinking simplex; restarts recover from collapsed simplices in higher
  // dimensions.
  const auto consider = [&](Eigen::VectorXd start, double step) {
    for (int round = 0; round < 4; ++round) {
      SimplexResult r = nelder_mead(objective, start, step, sopt);
      if (r.value < best.value) best.value = r.value;
      if (r.converged) best.converged = true;
      if (best.value <= opts.early_exit) return;
      start = r.x;
      step *= 0.35;
    }
  };

  if (hint && hint->size() == d) consider(*hint, 0.3);
  if (best.value > opts.early_exit) consider(Eigen::VectorXd::Zero(d), 0.5 * opts.radius);
  for (int s = 0; s < opts.multistarts && best.value > opts.early_exit; ++s) {
    Eigen::VectorXd start(d);
    for (int i = 0; i < d; ++i)
      start(i) = opts.radius *
                 (2.0 * halton(static_cast<std::uint64_t>(7 + s), nth_prime(i)) - 1.0);
    consider(start, 0.5 * opts.radius);
  }
  if (best.value <= opts.early_exit) best.converged = true;
  return best;
}

OrbitDistance distance_to_orbit(const MatrixModel& m, const Point& x, const Subalgebra& s_prime,
                                const Point& base, const OrbitDistanceOptions& opts,
                                const Eigen::VectorXd* hint) {
  OrbitMachine machine(m, s_prime);
  return distance_to_orbit(machine, x, base, opts, hint);
}

namespace {

double circle_circumference(const MatrixModel& m, const std::vector<Point>& pts) {
  double total = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k)
    total += distance(m, pts[k], pts[(k + 1) % pts.size()]);
  return total;
}

/// Gauss-Newton on E(theta).base = target with a forward-difference
/// Jacobian; turns first-kind log coordinates into second-kind ones.
Eigen::VectorXd refine_orbit_coordinates(const OrbitMachine& machine, Eigen::VectorXd theta,
                                         const Eigen::MatrixXd& base,
                                         const Eigen::MatrixXd& target) {
  const int d = static_cast<int>(theta.size());
  if (d == 0) return theta;
  const auto residual = [&](const Eigen::VectorXd& t) {
    const Eigen::MatrixXd r = machine.apply(t, base) - target;
    return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(r.data(), r.size()));
  };
  const double h = 1e-6;
  Eigen::VectorXd best = theta;
  double best_norm = residual(theta).norm();
  for (int iter = 0; iter < 6 && best_norm > 1e-12; ++iter) {
    const Eigen::VectorXd r0 = residual(theta);
    Eigen::MatrixXd jac(r0.size(), d);
    for (int i = 0; i < d; ++i) {
      Eigen::VectorXd tp = theta;
      tp(i) += h;
      jac.col(i) = (residual(tp) - r0) / h;
    }
    const Eigen::VectorXd step = jac.colPivHouseholderQr().solve(-r0);
    if (!step.allFinite()) break;
    theta += step;
    const double rn = residual(theta).norm();
    if (rn < best_norm) {
      best_norm = rn;
      best = theta;
    }
  }
  return best;
}

}  // namespace

CongruenceReport verify_congruence(const ActionContext& ctx, const Subalgebra& s_prime,
                                   const Point& p, const Point& q, const CongruenceConfig& cfg) {
  const MatrixModel& m = ctx.model;
  const IdealDecision hyp = is_ideal(m, s_prime, ctx.s);
  if (!hyp.ideal)
    throw ArgumentError(
        "verify_congruence: s' is not a certified ideal of s; the congruence "
        "conclusion is only claimed under that hypothesis");
  validate_point(m, p);
  validate_point(m, q);

  CongruenceReport rep;
  rep.model_id = m.id();
  rep.recipe = s_prime.recipe;
  rep.phi = s_prime.phi;
  rep.config = cfg;

  rep.conjugator = transitive_conjugator(ctx, p, q);
  rep.conjugator_residual =
      (apply_raw(m, rep.conjugator, q.coords) - p.coords).cwiseAbs().maxCoeff();
  rep.normality_residual = ad_normality(m, rep.conjugator, s_prime);

  OrbitMachine machine(m, s_prime);
  OrbitDistanceOptions search = cfg.search;
  search.radius = cfg.radius;

  const auto sweep = [&](const Eigen::MatrixXd& g, const Point& from, const Point& to) {
    OrbitSample sample = sample_orbit(m, s_prime, from, cfg.samples, cfg.radius);
    for (std::size_t k = 0; k < sample.points.size(); ++k) {
      Point moved{m.id(), apply_raw(m, g, sample.points[k].coords)};
      // Since g normalizes S', the moved point is (g E(theta) g^-1).to with
      // g E(theta) g^-1 in S'; its second-kind coordinates, polished by
      // Gauss-Newton, give a near-exact start for the simplex search.
      const Eigen::MatrixXd h =
          g * machine.group_element(sample.parameters[k]) * g.inverse();
      const Eigen::VectorXd hint = refine_orbit_coordinates(
          machine, machine.second_kind_coordinates(h), to.coords, moved.coords);
      OrbitDistance d = distance_to_orbit(machine, moved, to, search, &hint);
      rep.max_distance_to_orbit = std::max(rep.max_distance_to_orbit, d.value);
      if (!d.converged) ++rep.unconverged;
      ++rep.samples_used;
    }
    return sample;
  };

  const OrbitSample sq = sweep(rep.conjugator, q, p);
  if (cfg.bidirectional) {
    const Eigen::MatrixXd ginv = rep.conjugator.inverse();
    const OrbitSample sp = sweep(ginv, p, q);
    if (m.name == "hopf") rep.circumference_p = circle_circumference(m, sp.points);
  }
  if (m.name == "hopf") rep.circumference_q = circle_circumference(m, sq.points);

  rep.pass = rep.conjugator_residual <= cfg.tol_conjugator &&
             rep.normality_residual <= cfg.tol_normality &&
             rep.max_distance_to_orbit <= cfg.tol_orbit && rep.unconverged == 0;
  const auto circle_ok = [&](const std::optional<double>& c) {
    return !c || std::abs(*c - 2.0 * M_PI) <= cfg.tol_circumference;
  };
  rep.pass = rep.pass && circle_ok(rep.circumference_q) && circle_ok(rep.circumference_p);
  return rep;
}

Point random_point(const ActionContext& ctx, Rng& rng) {
  const MatrixModel& m = ctx.model;
  if (m.name == "hopf") {
    Eigen::MatrixXd v(m.matrix_size, 1);
    for (int i = 0; i < m.matrix_size; ++i) v(i, 0) = rng.normal();
    v /= v.norm();
    return {m.id(), v};
  }
  OrbitMachine machine(m, ctx.s);
  Eigen::VectorXd theta(machine.dim());
  for (int i = 0; i < machine.dim(); ++i) theta(i) = rng.uniform(-1.0, 1.0);
  return {m.id(), machine.apply(theta, m.origin.coords)};
}

nlohmann::ordered_json to_json(const CongruenceReport& r) {
  nlohmann::ordered_json j;
  j["model"] = r.model_id;
  j["recipe"] = r.recipe;
  nlohmann::ordered_json phi1 = nlohmann::ordered_json::array();
  for (int i : r.phi) phi1.push_back(i + 1);
  j["phi"] = phi1;  // 1-based, matching the CLI encoding
  j["conjugator_residual"] = r.conjugator_residual;
  j["normality_residual"] = r.normality_residual;
  j["max_distance_to_orbit"] = r.max_distance_to_orbit;
  j["samples_used"] = r.samples_used;
  j["unconverged"] = r.unconverged;
  if (r.circumference_q) j["circumference_q"] = *r.circumference_q;
  if (r.circumference_p) j["circumference_p"] = *r.circumference_p;
  j["tolerances"] = {{"conjugator", r.config.tol_conjugator},
                     {"normality", r.config.tol_normality},
                     {"orbit", r.config.tol_orbit},
                     {"circumference", r.config.tol_circumference}};
  j["samples"] = r.config.samples;
  j["radius"] = r.config.radius;
  j["bidirectional"] = r.config.bidirectional;
  j["verdict"] = r.pass ? "pass" : "fail";
  nlohmann::ordered_json conj = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < r.conjugator.rows(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (Eigen::Index k = 0; k < r.conjugator.cols(); ++k) row.push_back(r.conjugator(i, k));
    conj.push_back(row);
  }
  j["conjugator"] = conj;
  return j;
}

}  // namespace orbitcert
