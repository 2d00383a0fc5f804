#ifndef ORBITCERT_GEOMETRY_HPP
#define ORBITCERT_GEOMETRY_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "orbitcert/congruence.hpp"
#include "orbitcert/model.hpp"
#include "orbitcert/subalgebra.hpp"

namespace orbitcert {

/// Exact structure constants of a basis: c[k](i,j) is the coefficient of
/// basis[k] in [basis[i], basis[j]].
std::vector<RatMat> structure_constants(const std::vector<RatMat>& basis);

/// Gram matrix of the orbit metric on a subalgebra of s: entries
/// <P_p b_i, P_p b_j> with P_p X = (X - theta X)/2, the differential of the
/// orbit map at the origin.  Exact rational output.
RatMat induced_gram(const ActionContext& ctx, const Subalgebra& sub);

/// Koszul connection coefficients of a left-invariant metric:
/// Gamma[k](i,j) solves 2<nabla_i e_j, e_k> = <[e_i,e_j],e_k> -
/// <[e_j,e_k],e_i> + <[e_k,e_i],e_j>.
std::vector<Eigen::MatrixXd> levi_civita(const Eigen::MatrixXd& gram,
                                         const std::vector<Eigen::MatrixXd>& c);

struct MeanCurvature {
  Eigen::MatrixXd h_matrix;  // trace of the second fundamental form, as an s-element
  double norm = 0.0;
};

/// Mean curvature of the sub-orbit inside the simply transitive solvable
/// model: ambient connection from the full s-Gram, normal projection onto
/// the orthogonal complement of sub in s.
MeanCurvature mean_curvature(const ActionContext& ctx, const Subalgebra& sub);

struct RicciResult {
  Eigen::MatrixXd ricci;           // in the orthonormalized frame
  double einstein_constant = 0.0;  // least-squares fit Ric ~ c g
  double einstein_residual = 0.0;  // ||Ric - c g||_F / ||Ric||_F
  double ricci_norm = 0.0;
  bool flat = false;               // ||Ric|| below the flat threshold
};

/// Intrinsic curvature of the induced left-invariant metric on sub, from
/// sub's own brackets and Gram.
RicciResult ricci_induced(const ActionContext& ctx, const Subalgebra& sub);

struct GeometryReport {
  std::string model_id;
  std::vector<int> phi;
  std::string recipe;
  int dim = 0;
  RatMat gram;
  double mean_curvature_norm = 0.0;
  RicciResult ricci;
  double tol_mean = 1e-9;
  double tol_einstein = 1e-7;
  bool pass = false;
};

GeometryReport geometry_report(const ActionContext& ctx, const Subalgebra& s_phi,
                               double tol_mean = 1e-9, double tol_einstein = 1e-7);

nlohmann::ordered_json to_json(const GeometryReport& r);

}  // namespace orbitcert

#endif
