#include "orbitcert/rootspace.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "orbitcert/exact.hpp"

namespace orbitcert {

namespace {

bool lex_less(const RatVec& a, const RatVec& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) < b(i)) return true;
    if (a(i) > b(i)) return false;
  }
  return false;
}

RatMat basis_columns(const std::vector<RatMat>& basis) {
  RatMat cols(basis.front().size(), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j)
    cols.col(static_cast<Eigen::Index>(j)) = vectorize(basis[j]);
  return cols;
}

}  // namespace

int RootSpaceDecomposition::dim() const {
  int d = static_cast<int>(zero_space.size());
  for (const auto& sp : root_spaces) d += static_cast<int>(sp.size());
  return d;
}

std::vector<RatMat> maximal_abelian(const MatrixModel& m) {
  if (m.name == "hopf")
    throw UnsupportedModelError(
        "maximal_abelian: the compact hopf model has no noncompact root theory");
  std::vector<RatMat> a;
  if (m.name == "sl") {
    // traceless diagonals sit first in the model basis
    for (int k = 0; k + 1 < m.n; ++k) a.push_back(m.basis[k]);
  } else {
    a.push_back(m.basis[0]);  // the standard boost
  }
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if (!is_zero(bracket(a[i], a[j]))) throw InternalError("maximal_abelian: not abelian");

  // Maximality: the centralizer of a inside p must be a itself.
  const auto p_basis = cartan_p(m);
  RatMat stack(static_cast<Eigen::Index>(a.size()) * m.matrix_size * m.matrix_size,
               static_cast<Eigen::Index>(p_basis.size()));
  for (std::size_t j = 0; j < p_basis.size(); ++j)
    for (std::size_t i = 0; i < a.size(); ++i)
      stack.block(static_cast<Eigen::Index>(i) * m.matrix_size * m.matrix_size,
                  static_cast<Eigen::Index>(j), m.matrix_size * m.matrix_size, 1) =
          vectorize(bracket(a[i], p_basis[j]));
  if (exact::kernel(stack).cols() != static_cast<Eigen::Index>(a.size()))
    throw InternalError("maximal_abelian: centralizer in p exceeds a");
  return a;
}

RootSpaceDecomposition decompose(const MatrixModel& m, const std::vector<RatMat>& a_basis) {
  if (m.name == "hopf")
    throw UnsupportedModelError("decompose: the compact hopf model has no root theory");
  const int dim = m.ambient_dim;
  exact::CoordinateSolver solver(basis_columns(m.basis));

  // ad(H) on basis coordinates, for each H in a_basis.
  std::vector<RatMat> ad;
  for (const auto& h : a_basis) {
    RatMat adh(dim, dim);
    for (int j = 0; j < dim; ++j) {
      RatVec c;
      if (!solver.coords(vectorize(bracket(h, m.basis[j])), &c))
        throw InternalError("decompose: bracket left the algebra");
      adh.col(j) = c;
    }
    ad.push_back(std::move(adh));
  }

  // Joint eigenspaces by iterated splitting.  Pieces are coordinate-column
  // matrices; each is invariant under the next ad since the operators commute.
  struct Piece {
    RatVec eigen;  // tuple accumulated so far
    RatMat cols;
  };
  std::vector<Piece> pieces{{RatVec(0), RatMat::Identity(dim, dim)}};

  for (std::size_t hidx = 0; hidx < ad.size(); ++hidx) {
    const RatMat& adh = ad[hidx];
    // integer scaling: eigenvalues of d*adh are integers bounded by its
    // infinity norm, because the characteristic polynomial is monic integral
    mpz_class den = 1;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), adh(i, j).get_den().get_mpz_t());
    const Rat scale(den);
    mpz_class bound = 0;
    for (int i = 0; i < dim; ++i) {
      mpz_class row = 0;
      for (int j = 0; j < dim; ++j) {
        Rat e = adh(i, j) * scale;
        mpz_class a = abs(e.get_num());
        row += a;
      }
      if (row > bound) bound = row;
    }
    std::vector<Piece> next;
    for (auto& piece : pieces) {
      const Eigen::Index w = piece.cols.cols();
      Eigen::Index found = 0;
      for (mpz_class lam_int = -bound; lam_int <= bound; ++lam_int) {
        Rat lam = Rat(lam_int) / scale;
        RatMat shifted = adh * piece.cols - piece.cols * lam;
        RatMat k = exact::kernel(shifted);
        if (k.cols() == 0) continue;
        Piece np;
        np.eigen = RatVec(piece.eigen.size() + 1);
        np.eigen.head(piece.eigen.size()) = piece.eigen;
        np.eigen(piece.eigen.size()) = lam;
        np.cols = piece.cols * k;
        for (Eigen::Index j = 0; j < np.cols.cols(); ++j)
          np.cols.col(j) = exact::primitive(np.cols.col(j));
        found += np.cols.cols();
        next.push_back(std::move(np));
        if (found == w) break;
      }
      if (found != w)
        throw UnsupportedModelError(
            "decompose: ad spectrum is not rational-diagonalizable for this model");
    }
    pieces = std::move(next);
  }

  RootSpaceDecomposition dec;
  dec.model_id = m.id();
  dec.a_basis = a_basis;
  dec.rank = static_cast<int>(a_basis.size());

  std::vector<std::pair<RatVec, RatMat>> rooted;
  for (auto& piece : pieces) {
    bool zero = true;
    for (Eigen::Index i = 0; i < piece.eigen.size(); ++i)
      if (piece.eigen(i) != 0) zero = false;
    if (zero) {
      for (Eigen::Index j = 0; j < piece.cols.cols(); ++j) {
        RatMat x = RatMat::Zero(m.matrix_size, m.matrix_size);
        for (int i = 0; i < dim; ++i) x += m.basis[i] * piece.cols(i, j);
        dec.zero_space.push_back(std::move(x));
      }
    } else {
      rooted.emplace_back(piece.eigen, piece.cols);
    }
  }
  std::sort(rooted.begin(), rooted.end(),
            [](const auto& a, const auto& b) { return lex_less(a.first, b.first); });
  for (auto& [root, cols] : rooted) {
    std::vector<RatMat> space;
    for (Eigen::Index j = 0; j < cols.cols(); ++j) {
      RatMat x = RatMat::Zero(m.matrix_size, m.matrix_size);
      for (int i = 0; i < dim; ++i) x += m.basis[i] * cols(i, j);
      space.push_back(std::move(x));
    }
    dec.roots.push_back(root);
    dec.root_spaces.push_back(std::move(space));
  }
  if (dec.dim() != dim) throw InternalError("decompose: dimensions do not add up");
  return dec;
}

PositiveSystem positive_system(const RootSpaceDecomposition& dec) {
  const int r = dec.rank;
  Rat maxc = 0;
  for (const auto& root : dec.roots)
    for (Eigen::Index i = 0; i < root.size(); ++i) {
      Rat a = abs(root(i));
      if (a > maxc) maxc = a;
    }
  Rat n = maxc + 1;

  PositiveSystem ps;
  for (int attempt = 0; attempt < 64; ++attempt, n += 1) {
    RatVec w(r);
    Rat pw = 1;
    for (int i = r - 1; i >= 0; --i) {
      w(i) = pw;
      pw *= n;
    }
    bool regular = true;
    std::vector<int> positive;
    for (std::size_t k = 0; k < dec.roots.size(); ++k) {
      Rat v = 0;
      for (int i = 0; i < r; ++i) v += w(i) * dec.roots[k](i);
      if (v == 0) {
        regular = false;
        break;
      }
      if (v > 0) positive.push_back(static_cast<int>(k));
    }
    if (!regular) continue;
    ps.regular_functional = w;
    ps.positive = std::move(positive);
    break;
  }
  if (ps.regular_functional.size() == 0)
    throw InternalError("positive_system: no regular covector found");

  // simple roots: positive roots that are not sums of two positive roots
  auto cmp = [](const RatVec& a, const RatVec& b) { return lex_less(a, b); };
  std::set<RatVec, decltype(cmp)> pos_set(cmp);
  for (int k : ps.positive) pos_set.insert(dec.roots[k]);
  std::vector<int> simple;
  for (int k : ps.positive) {
    bool decomposable = false;
    for (int k1 : ps.positive) {
      RatVec diff = dec.roots[k] - dec.roots[k1];
      bool zero = true;
      for (Eigen::Index i = 0; i < diff.size(); ++i)
        if (diff(i) != 0) zero = false;
      if (!zero && pos_set.count(diff)) {
        decomposable = true;
        break;
      }
    }
    if (!decomposable) simple.push_back(k);
  }
  if (static_cast<int>(simple.size()) != r)
    throw InternalError("positive_system: simple root count differs from rank");

  // Dynkin-path order: adjacency = the sum is again a root.  The shipped
  // models are chains, so ordering along the path is canonical; fall back to
  // lex order otherwise.
  if (r > 1) {
    auto is_root = [&](const RatVec& v) {
      for (const auto& root : dec.roots) {
        bool eq = true;
        for (Eigen::Index i = 0; i < v.size(); ++i)
          if (root(i) != v(i)) eq = false;
        if (eq) return true;
      }
      return false;
    };
    std::vector<std::vector<int>> adj(simple.size());
    for (std::size_t i = 0; i < simple.size(); ++i)
      for (std::size_t j = i + 1; j < simple.size(); ++j)
        if (is_root(dec.roots[simple[i]] + dec.roots[simple[j]])) {
          adj[i].push_back(static_cast<int>(j));
          adj[j].push_back(static_cast<int>(i));
        }
    bool is_path = true;
    std::vector<int> ends;
    for (std::size_t i = 0; i < simple.size(); ++i) {
      if (adj[i].size() > 2) is_path = false;
      if (adj[i].size() <= 1) ends.push_back(static_cast<int>(i));
    }
    if (is_path && ends.size() == 2) {
      int start = ends[0];
      if (lex_less(dec.roots[simple[ends[1]]], dec.roots[simple[ends[0]]])) start = ends[1];
      std::vector<int> ordered;
      std::vector<bool> used(simple.size(), false);
      int cur = start;
      while (true) {
        ordered.push_back(simple[cur]);
        used[cur] = true;
        int nxt = -1;
        for (int cand : adj[cur])
          if (!used[cand]) nxt = cand;
        if (nxt < 0) break;
        cur = nxt;
      }
      if (ordered.size() == simple.size()) simple = std::move(ordered);
    } else {
      std::sort(simple.begin(), simple.end(), [&](int a, int b) {
        return lex_less(dec.roots[a], dec.roots[b]);
      });
    }
  }
  ps.simple = std::move(simple);

  // postcondition: every positive root is a nonnegative integer combination
  RatMat lam(r, r);
  for (int j = 0; j < r; ++j) lam.col(j) = dec.roots[ps.simple[j]];
  for (int k : ps.positive) {
    RatVec x;
    if (!exact::solve(lam, dec.roots[k], &x))
      throw InternalError("positive_system: root outside the simple-root lattice");
    for (int i = 0; i < r; ++i)
      if (x(i) < 0 || x(i).get_den() != 1)
        throw InternalError("positive_system: non-integral simple-root coordinates");
  }
  return ps;
}

Rat functional_value(const PositiveSystem& ps, const RatVec& root) {
  Rat v = 0;
  for (Eigen::Index i = 0; i < root.size(); ++i) v += ps.regular_functional(i) * root(i);
  return v;
}

RootSubsystem root_subsystem(const PositiveSystem& ps, const RootSpaceDecomposition& dec,
                             const std::vector<int>& phi) {
  for (int i : phi)
    if (i < 0 || i >= static_cast<int>(ps.simple.size()))
      throw ArgumentError("root_subsystem: phi index outside the simple system");

  RootSubsystem out;
  if (phi.empty()) return out;
  RatMat span(dec.rank, static_cast<Eigen::Index>(phi.size()));
  for (std::size_t j = 0; j < phi.size(); ++j)
    span.col(static_cast<Eigen::Index>(j)) = dec.roots[ps.simple[phi[j]]];
  std::set<int> positive(ps.positive.begin(), ps.positive.end());
  for (std::size_t k = 0; k < dec.roots.size(); ++k) {
    if (exact::solve(span, dec.roots[k], nullptr)) {
      out.all.push_back(static_cast<int>(k));
      if (positive.count(static_cast<int>(k))) out.positive.push_back(static_cast<int>(k));
    }
  }
  return out;
}

nlohmann::ordered_json to_json(const RootSpaceDecomposition& dec) {
  auto mat_json = [](const RatMat& m) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(rat_str(m(i, j)));
      rows.push_back(row);
    }
    return rows;
  };
  nlohmann::ordered_json j;
  j["model"] = dec.model_id;
  j["rank"] = dec.rank;
  j["a_basis"] = nlohmann::ordered_json::array();
  for (const auto& h : dec.a_basis) j["a_basis"].push_back(mat_json(h));
  j["roots"] = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < dec.roots.size(); ++k) {
    nlohmann::ordered_json root;
    nlohmann::ordered_json tuple = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < dec.roots[k].size(); ++i)
      tuple.push_back(rat_str(dec.roots[k](i)));
    root["coordinates"] = tuple;
    root["multiplicity"] = dec.root_spaces[k].size();
    root["basis"] = nlohmann::ordered_json::array();
    for (const auto& x : dec.root_spaces[k]) root["basis"].push_back(mat_json(x));
    j["roots"].push_back(root);
  }
  j["zero_space_dim"] = dec.zero_space.size();
  j["zero_space"] = nlohmann::ordered_json::array();
  for (const auto& x : dec.zero_space) j["zero_space"].push_back(mat_json(x));
  return j;
}

}  // namespace orbitcert
