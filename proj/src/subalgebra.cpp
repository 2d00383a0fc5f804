#include "orbitcert/subalgebra.hpp"

#include <algorithm>
#include <set>

#include "orbitcert/exact.hpp"

namespace orbitcert {

namespace {

RatMat stack_columns(const std::vector<RatMat>& mats) {
  if (mats.empty()) return RatMat(0, 0);
  RatMat cols(mats.front().size(), static_cast<Eigen::Index>(mats.size()));
  for (std::size_t j = 0; j < mats.size(); ++j)
    cols.col(static_cast<Eigen::Index>(j)) = vectorize(mats[j]);
  return cols;
}

exact::RowSpan make_span(const std::vector<RatMat>& mats, Eigen::Index ambient) {
  exact::RowSpan span(ambient);
  for (const auto& x : mats) span.insert(vectorize(x));
  return span;
}

void validate_phi(const PositiveSystem& ps, const std::vector<int>& phi, bool proper) {
  std::set<int> seen;
  for (int i : phi) {
    if (i < 0 || i >= static_cast<int>(ps.simple.size()))
      throw ArgumentError("phi: index outside the simple system");
    if (!seen.insert(i).second) throw ArgumentError("phi: duplicate index");
  }
  if (proper && phi.size() >= ps.simple.size())
    throw ArgumentError("phi: must be a proper subset of the simple system");
}

/// Root-space indices sorted by increasing regular-functional value.
std::vector<int> sorted_by_functional(const RootSpaceDecomposition& dec,
                                      const PositiveSystem& ps, std::vector<int> idx) {
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    return functional_value(ps, dec.roots[a]) < functional_value(ps, dec.roots[b]);
  });
  return idx;
}

/// Basis of the <,>-orthogonal complement of span(v) inside span(ambient).
std::vector<RatMat> ortho_complement_in(const MatrixModel& m, const std::vector<RatMat>& ambient,
                                        const std::vector<RatMat>& v) {
  if (v.empty()) return ambient;
  RatMat sys(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(ambient.size()));
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < ambient.size(); ++j)
      sys(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          inner(m, v[i], ambient[j]);
  RatMat k = exact::kernel(sys);
  std::vector<RatMat> out;
  for (Eigen::Index j = 0; j < k.cols(); ++j) {
    RatMat x = RatMat::Zero(m.matrix_size, m.matrix_size);
    for (std::size_t i = 0; i < ambient.size(); ++i)
      x += ambient[i] * k(static_cast<Eigen::Index>(i), j);
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace

bool linearly_independent(const Subalgebra& sub) {
  if (sub.basis.empty()) return true;
  return exact::rank(stack_columns(sub.basis)) == sub.dim();
}

bool bracket_closed(const Subalgebra& sub) {
  if (sub.basis.empty()) return true;
  exact::RowSpan span = make_span(sub.basis, sub.basis.front().size());
  for (std::size_t i = 0; i < sub.basis.size(); ++i)
    for (std::size_t j = i + 1; j < sub.basis.size(); ++j)
      if (!span.contains(vectorize(bracket(sub.basis[i], sub.basis[j])))) return false;
  return true;
}

bool subspace_of(const Subalgebra& h, const Subalgebra& g) {
  if (h.basis.empty()) return true;
  if (g.basis.empty()) return false;
  exact::RowSpan span = make_span(g.basis, g.basis.front().size());
  for (const auto& x : h.basis)
    if (!span.contains(vectorize(x))) return false;
  return true;
}

bool same_span(const Subalgebra& a, const Subalgebra& b) {
  return subspace_of(a, b) && subspace_of(b, a);
}

namespace {

/// Iterates spans W -> [A, W] (derived: [W, W]) until zero or stagnation.
/// Both series are decreasing, so a step without strict dimension drop can
/// never reach zero.
bool series_terminates(const Subalgebra& sub, bool derived) {
  std::vector<RatMat> current = sub.basis;
  if (current.empty()) return true;
  const Eigen::Index ambient = current.front().size();
  int prev_dim = make_span(current, ambient).dim();
  for (;;) {
    const std::vector<RatMat>& left = derived ? current : sub.basis;
    exact::RowSpan next_span(ambient);
    std::vector<RatMat> next;
    for (const auto& x : left)
      for (const auto& y : current) {
        RatMat b = bracket(x, y);
        if (next_span.insert(vectorize(b))) next.push_back(std::move(b));
      }
    if (next_span.dim() == 0) return true;
    if (next_span.dim() >= prev_dim) return false;
    prev_dim = next_span.dim();
    current = std::move(next);
  }
}

}  // namespace

bool is_nilpotent(const Subalgebra& sub) { return series_terminates(sub, false); }
bool is_solvable(const Subalgebra& sub) { return series_terminates(sub, true); }

std::pair<Subalgebra, Subalgebra> build_iwasawa(const MatrixModel& m,
                                                const RootSpaceDecomposition& dec,
                                                const PositiveSystem& ps) {
  Subalgebra n{m.id(), "n", {}, {}};
  for (int k : sorted_by_functional(dec, ps, ps.positive))
    for (const auto& x : dec.root_spaces[k]) n.basis.push_back(x);
  Subalgebra s{m.id(), "s", {}, dec.a_basis};
  s.basis.insert(s.basis.end(), n.basis.begin(), n.basis.end());
  return {std::move(n), std::move(s)};
}

Subalgebra build_s_V(const MatrixModel& m, const RootSpaceDecomposition& dec,
                     const PositiveSystem& ps, const std::vector<RatMat>& v) {
  if (!dec.a_basis.empty()) {
    exact::RowSpan a_span = make_span(dec.a_basis, dec.a_basis.front().size());
    for (const auto& x : v)
      if (!a_span.contains(vectorize(x)))
        throw ArgumentError("build_s_V: V is not contained in a");
  }
  Subalgebra out{m.id(), "s_V", {}, ortho_complement_in(m, dec.a_basis, v)};
  auto [n, s] = build_iwasawa(m, dec, ps);
  out.basis.insert(out.basis.end(), n.basis.begin(), n.basis.end());
  return out;
}

Subalgebra build_parabolic(const MatrixModel& m, const RootSpaceDecomposition& dec,
                           const PositiveSystem& ps, const std::vector<int>& phi) {
  validate_phi(ps, phi, /*proper=*/true);
  const RootSubsystem sub = root_subsystem(ps, dec, phi);
  std::set<int> idx(ps.positive.begin(), ps.positive.end());
  idx.insert(sub.all.begin(), sub.all.end());
  Subalgebra q{m.id(), "q_Phi", phi, dec.zero_space};
  std::sort(q.phi.begin(), q.phi.end());
  for (int k : sorted_by_functional(dec, ps, {idx.begin(), idx.end()}))
    for (const auto& x : dec.root_spaces[k]) q.basis.push_back(x);
  return q;
}

LanglandsParts langlands(const MatrixModel& m, const RootSpaceDecomposition& dec,
                         const PositiveSystem& ps, const std::vector<int>& phi) {
  validate_phi(ps, phi, /*proper=*/true);
  const RootSubsystem sub = root_subsystem(ps, dec, phi);
  std::vector<int> phi_sorted = phi;
  std::sort(phi_sorted.begin(), phi_sorted.end());

  // a_Phi: common kernel of the chosen simple roots inside a.  alpha(sum_i
  // c_i a_i) = sum_i c_i alpha_i since roots are stored by their values on
  // the a-basis.
  LanglandsParts parts{{m.id(), "m_Phi", phi_sorted, {}},
                       {m.id(), "a_Phi", phi_sorted, {}},
                       {m.id(), "n_Phi", phi_sorted, {}}};
  {
    RatMat sys(static_cast<Eigen::Index>(phi.size()), dec.rank);
    for (std::size_t i = 0; i < phi.size(); ++i)
      sys.row(static_cast<Eigen::Index>(i)) = dec.roots[ps.simple[phi[i]]].transpose();
    RatMat k = phi.empty() ? RatMat(RatMat::Identity(dec.rank, dec.rank)) : exact::kernel(sys);
    for (Eigen::Index j = 0; j < k.cols(); ++j) {
      RatMat h = RatMat::Zero(m.matrix_size, m.matrix_size);
      for (int i = 0; i < dec.rank; ++i) h += dec.a_basis[i] * k(i, j);
      parts.a_phi.basis.push_back(std::move(h));
    }
  }

  parts.m_phi.basis = ortho_complement_in(m, dec.zero_space, parts.a_phi.basis);
  for (int k : sorted_by_functional(dec, ps, sub.all))
    for (const auto& x : dec.root_spaces[k]) parts.m_phi.basis.push_back(x);

  std::set<int> in_phi(sub.positive.begin(), sub.positive.end());
  std::vector<int> rest;
  for (int k : ps.positive)
    if (!in_phi.count(k)) rest.push_back(k);
  for (int k : sorted_by_functional(dec, ps, rest))
    for (const auto& x : dec.root_spaces[k]) parts.n_phi.basis.push_back(x);
  return parts;
}

Subalgebra build_s_Phi(const MatrixModel& m, const RootSpaceDecomposition& dec,
                       const PositiveSystem& ps, const std::vector<int>& phi) {
  LanglandsParts parts = langlands(m, dec, ps, phi);
  Subalgebra s_phi{m.id(), "s_Phi", parts.a_phi.phi, std::move(parts.a_phi.basis)};
  s_phi.basis.insert(s_phi.basis.end(), parts.n_phi.basis.begin(), parts.n_phi.basis.end());
  return s_phi;
}

IdealDecision is_ideal(const MatrixModel& m, const Subalgebra& h, const Subalgebra& g) {
  if (!bracket_closed(g)) throw ArgumentError("is_ideal: g is not closed under bracket");
  if (!bracket_closed(h)) throw ArgumentError("is_ideal: h is not closed under bracket");
  if (!subspace_of(h, g)) throw ArgumentError("is_ideal: h is not a subspace of g");
  if (h.basis.empty()) return {true, std::nullopt};

  exact::RowSpan span = make_span(h.basis, h.basis.front().size());
  for (std::size_t i = 0; i < g.basis.size(); ++i)
    for (std::size_t j = 0; j < h.basis.size(); ++j) {
      RatMat b = bracket(g.basis[i], h.basis[j]);
      if (span.contains(vectorize(b))) continue;

      // <,>-orthogonal residual: b minus its projection onto span(h)
      const int d = h.dim();
      RatMat gram(d, d);
      RatVec rhs(d);
      for (int a = 0; a < d; ++a) {
        rhs(a) = inner(m, h.basis[a], b);
        for (int c = 0; c < d; ++c) gram(a, c) = inner(m, h.basis[a], h.basis[c]);
      }
      RatVec x;
      exact::solve(gram, rhs, &x);
      RatMat residual = b;
      for (int a = 0; a < d; ++a) residual -= h.basis[a] * x(a);
      return {false, IdealWitness{static_cast<int>(i), static_cast<int>(j), std::move(b),
                                  std::move(residual)}};
    }
  return {true, std::nullopt};
}

IdealDecision check_relation_3_2(const MatrixModel& m, const Subalgebra& s_phi,
                                 const Subalgebra& q_phi) {
  if (q_phi.recipe != "q_Phi")
    throw ArgumentError("check_relation_3_2: second argument must be a q_Phi");
  if (s_phi.phi != q_phi.phi)
    throw ArgumentError("check_relation_3_2: mismatched Phi tags");
  return is_ideal(m, s_phi, q_phi);
}

nlohmann::ordered_json to_json(const Subalgebra& sub) {
  nlohmann::ordered_json j;
  j["model"] = sub.model_id;
  j["recipe"] = sub.recipe;
  nlohmann::ordered_json phi1 = nlohmann::ordered_json::array();
  for (int i : sub.phi) phi1.push_back(i + 1);
  j["phi"] = phi1;  // 1-based, matching the CLI encoding
  j["basis"] = nlohmann::ordered_json::array();
  for (const auto& x : sub.basis) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (Eigen::Index k = 0; k < x.cols(); ++k) row.push_back(rat_str(x(i, k)));
      rows.push_back(row);
    }
    j["basis"].push_back(rows);
  }
  return j;
}

Subalgebra subalgebra_from_json(const nlohmann::ordered_json& j) {
  Subalgebra sub;
  sub.model_id = j.at("model").get<std::string>();
  sub.recipe = j.at("recipe").get<std::string>();
  sub.phi = j.at("phi").get<std::vector<int>>();
  for (int& i : sub.phi) --i;
  for (const auto& rows : j.at("basis")) {
    const Eigen::Index r = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index c = r > 0 ? static_cast<Eigen::Index>(rows[0].size()) : 0;
    RatMat x(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index k = 0; k < c; ++k)
        x(i, k) = rat_parse(rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]
                                .get<std::string>());
    sub.basis.push_back(std::move(x));
  }
  return sub;
}

}  // namespace orbitcert
