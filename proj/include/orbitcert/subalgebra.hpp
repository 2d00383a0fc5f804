#ifndef ORBITCERT_SUBALGEBRA_HPP
#define ORBITCERT_SUBALGEBRA_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "orbitcert/model.hpp"
#include "orbitcert/rootspace.hpp"

namespace orbitcert {

/// Exact-coefficient basis of a bracket-closed subspace, tagged with how it
/// was built.  phi holds 0-based positions into the simple system for the
/// parabolic family of recipes.
struct Subalgebra {
  std::string model_id;
  std::string recipe;  // n, s, s_V, q_Phi, m_Phi, a_Phi, n_Phi, s_Phi, center, full, custom
  std::vector<int> phi;
  std::vector<RatMat> basis;

  int dim() const { return static_cast<int>(basis.size()); }
};

bool linearly_independent(const Subalgebra& sub);
bool bracket_closed(const Subalgebra& sub);
/// span(h) subseteq span(g), exact.
bool subspace_of(const Subalgebra& h, const Subalgebra& g);
bool same_span(const Subalgebra& a, const Subalgebra& b);
/// Lower central series reaches zero.
bool is_nilpotent(const Subalgebra& sub);
/// Derived series reaches zero.
bool is_solvable(const Subalgebra& sub);

/// n = sum of positive root spaces, s = a + n.  Root spaces are concatenated
/// in increasing order of the regular functional, so every basis suffix of s
/// past a fixed position spans an ideal (global second-kind coordinates).
std::pair<Subalgebra, Subalgebra> build_iwasawa(const MatrixModel& m,
                                                const RootSpaceDecomposition& dec,
                                                const PositiveSystem& ps);

/// s_V = (a orthocomplement of V) + n, for V a subspace of a given by an
/// exact spanning set.  Throws ArgumentError when V is not inside a.
Subalgebra build_s_V(const MatrixModel& m, const RootSpaceDecomposition& dec,
                     const PositiveSystem& ps, const std::vector<RatMat>& v);

/// q_Phi = g_0 + sum of root spaces over Sigma_Phi union Sigma^+; requires a
/// proper subset Phi of the simple system.
Subalgebra build_parabolic(const MatrixModel& m, const RootSpaceDecomposition& dec,
                           const PositiveSystem& ps, const std::vector<int>& phi);

struct LanglandsParts {
  Subalgebra m_phi;
  Subalgebra a_phi;
  Subalgebra n_phi;
};

/// a_Phi = common kernel of Phi inside a; m_Phi = (g_0 orthocomplement of
/// a_Phi) + sum over Sigma_Phi root spaces; n_Phi = sum over
/// Sigma^+ minus Sigma_Phi^+.  The three parts decompose q_Phi.
LanglandsParts langlands(const MatrixModel& m, const RootSpaceDecomposition& dec,
                         const PositiveSystem& ps, const std::vector<int>& phi);

/// s_Phi = a_Phi + n_Phi, the solvable part of q_Phi.
Subalgebra build_s_Phi(const MatrixModel& m, const RootSpaceDecomposition& dec,
                       const PositiveSystem& ps, const std::vector<int>& phi);

struct IdealWitness {
  int outer_index = -1;          // basis index in g
  int inner_index = -1;          // basis index in h
  RatMat bracket_value;          // [g_i, h_j]
  RatMat residual;               // component orthogonal to span(h) w.r.t. <,>
};

struct IdealDecision {
  bool ideal = false;
  std::optional<IdealWitness> witness;
};

/// Is [g, h] contained in span(h)?  Exact; requires span(h) inside span(g)
/// and both closed under bracket (ArgumentError distinguishes the two).
/// The witness is the first failing pair in basis order.
IdealDecision is_ideal(const MatrixModel& m, const Subalgebra& h, const Subalgebra& g);

/// [s_Phi, q_Phi] subseteq s_Phi for matching Phi tags; also accepts the
/// other Langlands parts as the first argument for negative controls.
IdealDecision check_relation_3_2(const MatrixModel& m, const Subalgebra& s_phi,
                                 const Subalgebra& q_phi);

nlohmann::ordered_json to_json(const Subalgebra& sub);
Subalgebra subalgebra_from_json(const nlohmann::ordered_json& j);

}  // namespace orbitcert

#endif
