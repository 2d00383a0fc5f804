#ifndef ORBITCERT_ROOTSPACE_HPP
#define ORBITCERT_ROOTSPACE_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "orbitcert/model.hpp"

namespace orbitcert {

/// Restricted root-space decomposition of the algebra with respect to a
/// maximal abelian subspace of p.  Roots are coordinate tuples on the dual
/// basis of a, i.e. root k stores (lambda(a_1), ..., lambda(a_r)).
struct RootSpaceDecomposition {
  std::string model_id;
  std::vector<RatMat> a_basis;
  int rank = 0;
  std::vector<RatVec> roots;                    // nonzero tuples, lex-sorted
  std::vector<std::vector<RatMat>> root_spaces; // parallel to roots
  std::vector<RatMat> zero_space;               // basis of the centralizer g_0
  int dim() const;
};

struct PositiveSystem {
  std::vector<int> positive;       // indices into roots
  std::vector<int> simple;         // indices into roots, Dynkin-path order
  RatVec regular_functional;       // covector on a-coordinates
};

/// Canonical maximal abelian subspace of p (traceless diagonals for sl, the
/// standard boost for so1n).  Maximality is certified by an exact
/// centralizer computation.  Throws UnsupportedModelError for hopf.
std::vector<RatMat> maximal_abelian(const MatrixModel& m);

/// Simultaneous exact eigenspace decomposition of ad(a_1), ..., ad(a_r).
/// Eigenvalue candidates are the integers bounded by the infinity norm of
/// the integer-scaled ad matrix; a defective or irrational spectrum raises
/// UnsupportedModelError.
RootSpaceDecomposition decompose(const MatrixModel& m, const std::vector<RatMat>& a_basis);

/// Splits the roots with the deterministic covector (N^(r-1), ..., N, 1),
/// N = 1 + max |root coordinate|; such a covector cannot vanish on a root
/// tuple, and N is bumped until regular as a guard.
PositiveSystem positive_system(const RootSpaceDecomposition& dec);

/// Value of the regular covector on a root tuple.
Rat functional_value(const PositiveSystem& ps, const RatVec& root);

struct RootSubsystem {
  std::vector<int> all;       // Sigma_Phi as indices into dec.roots
  std::vector<int> positive;  // Sigma_Phi^+
};

/// Roots lying in the exact rational span of the chosen simple roots.
/// phi holds 0-based positions into ps.simple; phi = full set is allowed here.
RootSubsystem root_subsystem(const PositiveSystem& ps, const RootSpaceDecomposition& dec,
                             const std::vector<int>& phi);

nlohmann::ordered_json to_json(const RootSpaceDecomposition& dec);

}  // namespace orbitcert

#endif
