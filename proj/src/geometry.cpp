#include "orbitcert/geometry.hpp"

#include <cmath>

#include "orbitcert/exact.hpp"

namespace orbitcert {

namespace {

RatMat stack_columns(const std::vector<RatMat>& mats) {
  RatMat cols(mats.front().size(), static_cast<Eigen::Index>(mats.size()));
  for (std::size_t j = 0; j < mats.size(); ++j)
    cols.col(static_cast<Eigen::Index>(j)) = vectorize(mats[j]);
  return cols;
}

}  // namespace

std::vector<RatMat> structure_constants(const std::vector<RatMat>& basis) {
  const int d = static_cast<int>(basis.size());
  exact::CoordinateSolver solver(stack_columns(basis));
  std::vector<RatMat> c(d, RatMat::Zero(d, d));
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      RatVec coords;
      if (!solver.coords(vectorize(bracket(basis[i], basis[j])), &coords))
        throw ArgumentError("structure_constants: basis is not bracket-closed");
      for (int k = 0; k < d; ++k) {
        c[k](i, j) = coords(k);
        c[k](j, i) = -coords(k);
      }
    }
  return c;
}

RatMat induced_gram(const ActionContext& ctx, const Subalgebra& sub) {
  if (!subspace_of(sub, ctx.s))
    throw ArgumentError("induced_gram: subalgebra is not contained in s");
  const MatrixModel& m = ctx.model;
  const int d = sub.dim();
  std::vector<RatMat> projected;
  projected.reserve(d);
  const Rat half = frac(1, 2);
  for (const auto& b : sub.basis) projected.push_back((b - theta(m, b)) * half);
  RatMat gram(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) gram(i, j) = gram(j, i) = inner(m, projected[i], projected[j]);
  return gram;
}

std::vector<Eigen::MatrixXd> levi_civita(const Eigen::MatrixXd& gram,
                                         const std::vector<Eigen::MatrixXd>& c) {
  const int d = static_cast<int>(gram.rows());
  // lowered[i](j,k) = <[e_i, e_j], e_k>
  std::vector<Eigen::MatrixXd> lowered(d, Eigen::MatrixXd::Zero(d, d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        double s = 0.0;
        for (int l = 0; l < d; ++l) s += c[l](i, j) * gram(l, k);
        lowered[i](j, k) = s;
      }
  const Eigen::MatrixXd gram_inv = gram.inverse();
  std::vector<Eigen::MatrixXd> gamma(d, Eigen::MatrixXd::Zero(d, d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        const double rhs =
            0.5 * (lowered[i](j, k) - lowered[j](k, i) + lowered[k](i, j));
        for (int l = 0; l < d; ++l) gamma[l](i, j) += gram_inv(l, k) * rhs;
      }
  return gamma;
}

namespace {

struct Frame {
  // columns: frame vectors in coordinates of the reference basis
  Eigen::MatrixXd vectors;
  std::vector<Eigen::MatrixXd> c;  // structure constants in the frame
};

/// Gram-Schmidt of `seed` columns against the inner product G, then frame
/// structure constants from the exact reference tensor.
Frame orthonormal_frame(const Eigen::MatrixXd& seed, const Eigen::MatrixXd& g,
                        const std::vector<RatMat>& exact_tensor) {
  const int n = static_cast<int>(seed.rows());
  const int d = static_cast<int>(seed.cols());
  Eigen::MatrixXd f = seed;
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < j; ++k) {
      const double proj = f.col(k).dot(g * f.col(j));
      f.col(j) -= proj * f.col(k);
    }
    const double len = std::sqrt(f.col(j).dot(g * f.col(j)));
    if (!(len > 0.0)) throw NumericError("orthonormal_frame: degenerate Gram");
    f.col(j) /= len;
  }
  std::vector<Eigen::MatrixXd> td(n, Eigen::MatrixXd::Zero(n, n));
  for (int k = 0; k < n; ++k) td[k] = to_double(exact_tensor[k]);
  std::vector<Eigen::MatrixXd> c(d, Eigen::MatrixXd::Zero(d, d));
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      Eigen::VectorXd br = Eigen::VectorXd::Zero(n);
      for (int k = 0; k < n; ++k) br(k) = f.col(i).dot(td[k] * f.col(j));
      for (int k = 0; k < d; ++k) {
        const double comp = f.col(k).dot(g * br);
        c[k](i, j) = comp;
        c[k](j, i) = -comp;
      }
    }
  return {std::move(f), std::move(c)};
}

}  // namespace

MeanCurvature mean_curvature(const ActionContext& ctx, const Subalgebra& sub) {
  if (!subspace_of(sub, ctx.s))
    throw ArgumentError("mean_curvature: subalgebra is not contained in s");
  const int n = ctx.s.dim();
  const int d = sub.dim();

  exact::CoordinateSolver solver(stack_columns(ctx.s.basis));
  Eigen::MatrixXd seed(n, n);
  {
    // adapted seed: sub coordinates first, then completion by s-basis vectors
    exact::RowSpan span(static_cast<Eigen::Index>(ctx.s.basis.front().size()));
    int col = 0;
    for (const auto& b : sub.basis) {
      RatVec c;
      solver.coords(vectorize(b), &c);
      seed.col(col++) = to_double(RatMat(c));
      span.insert(vectorize(b));
    }
    for (int i = 0; i < n && col < n; ++i) {
      if (!span.insert(vectorize(ctx.s.basis[i]))) continue;
      seed.col(col) = Eigen::VectorXd::Zero(n);
      seed.col(col)(i) = 1.0;
      ++col;
    }
    if (col != n) throw InternalError("mean_curvature: frame completion failed");
  }

  const Eigen::MatrixXd gram = to_double(induced_gram(ctx, ctx.s));
  const std::vector<RatMat> tensor = structure_constants(ctx.s.basis);
  const Frame frame = orthonormal_frame(seed, gram, tensor);
  const std::vector<Eigen::MatrixXd> gamma =
      levi_civita(Eigen::MatrixXd::Identity(n, n), frame.c);

  // H = sum_i (nabla_{e_i} e_i)^normal over the tangent frame vectors
  Eigen::VectorXd h_frame = Eigen::VectorXd::Zero(n);
  for (int m = d; m < n; ++m)
    for (int i = 0; i < d; ++i) h_frame(m) += gamma[m](i, i);

  MeanCurvature out;
  out.norm = h_frame.norm();
  Eigen::VectorXd h_coords = frame.vectors * h_frame;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(ctx.model.matrix_size, ctx.model.matrix_size);
  for (int i = 0; i < n; ++i) h += h_coords(i) * to_double(ctx.s.basis[i]);
  out.h_matrix = std::move(h);
  return out;
}

RicciResult ricci_induced(const ActionContext& ctx, const Subalgebra& sub) {
  const int d = sub.dim();
  const Eigen::MatrixXd gram = to_double(induced_gram(ctx, sub));
  const std::vector<RatMat> tensor = structure_constants(sub.basis);
  const Frame frame =
      orthonormal_frame(Eigen::MatrixXd::Identity(d, d), gram, tensor);
  const std::vector<Eigen::MatrixXd> gamma =
      levi_civita(Eigen::MatrixXd::Identity(d, d), frame.c);

  // R(e_i, e_j) e_k = nabla_i nabla_j e_k - nabla_j nabla_i e_k -
  // nabla_{[e_i, e_j]} e_k, traced over i against the orthonormal frame.
  RicciResult out;
  Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      double s = 0.0;
      for (int i = 0; i < d; ++i) {
        double r = 0.0;
        for (int l = 0; l < d; ++l) {
          r += gamma[i](i, l) * gamma[l](j, k);
          r -= gamma[i](j, l) * gamma[l](i, k);
          r -= frame.c[l](i, j) * gamma[i](l, k);
        }
        s += r;
      }
      ric(j, k) = s;
    }
  out.ricci = 0.5 * (ric + ric.transpose());  // symmetrize float noise
  out.ricci_norm = out.ricci.norm();
  if (out.ricci_norm <= 1e-10) {
    out.flat = true;
    out.einstein_constant = 0.0;
    out.einstein_residual = 0.0;
    return out;
  }
  out.einstein_constant = out.ricci.trace() / static_cast<double>(d);
  const Eigen::MatrixXd dev =
      out.ricci - out.einstein_constant * Eigen::MatrixXd::Identity(d, d);
  out.einstein_residual = dev.norm() / out.ricci_norm;
  return out;
}

GeometryReport geometry_report(const ActionContext& ctx, const Subalgebra& s_phi,
                               double tol_mean, double tol_einstein) {
  GeometryReport rep;
  rep.model_id = ctx.model.id();
  rep.phi = s_phi.phi;
  rep.recipe = s_phi.recipe;
  rep.dim = s_phi.dim();
  rep.gram = induced_gram(ctx, s_phi);
  rep.mean_curvature_norm = mean_curvature(ctx, s_phi).norm;
  rep.ricci = ricci_induced(ctx, s_phi);
  rep.tol_mean = tol_mean;
  rep.tol_einstein = tol_einstein;
  rep.pass = rep.mean_curvature_norm <= tol_mean &&
             (rep.ricci.flat || rep.ricci.einstein_residual <= tol_einstein);
  return rep;
}

nlohmann::ordered_json to_json(const GeometryReport& r) {
  nlohmann::ordered_json j;
  j["model"] = r.model_id;
  j["recipe"] = r.recipe;
  nlohmann::ordered_json phi1 = nlohmann::ordered_json::array();
  for (int i : r.phi) phi1.push_back(i + 1);
  j["phi"] = phi1;  // 1-based, matching the CLI encoding
  j["dim"] = r.dim;
  nlohmann::ordered_json gram = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < r.gram.rows(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (Eigen::Index k = 0; k < r.gram.cols(); ++k) row.push_back(rat_str(r.gram(i, k)));
    gram.push_back(row);
  }
  j["induced_gram"] = gram;
  j["mean_curvature_norm"] = r.mean_curvature_norm;
  nlohmann::ordered_json ric = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < r.ricci.ricci.rows(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (Eigen::Index k = 0; k < r.ricci.ricci.cols(); ++k)
      row.push_back(r.ricci.ricci(i, k));
    ric.push_back(row);
  }
  j["ricci_matrix"] = ric;
  j["einstein_constant"] = r.ricci.einstein_constant;
  j["einstein_residual"] = r.ricci.einstein_residual;
  j["flat"] = r.ricci.flat;
  j["tolerances"] = {{"mean_curvature", r.tol_mean}, {"einstein", r.tol_einstein}};
  j["verdict"] = r.pass ? "pass" : "fail";
  return j;
}

}  // namespace orbitcert
