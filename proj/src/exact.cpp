#include "orbitcert/exact.hpp"

#include <algorithm>

#include "orbitcert/errors.hpp"

namespace orbitcert::exact {

int rref_in_place(RatMat& a, std::vector<int>* pivots) {
  const Eigen::Index rows = a.rows(), cols = a.cols();
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    Eigen::Index p = -1;
    for (Eigen::Index i = r; i < rows; ++i) {
      if (a(i, c) != 0) {
        p = i;
        break;
      }
    }
    if (p < 0) continue;
    if (p != r) a.row(p).swap(a.row(r));
    const Rat inv = Rat(1) / a(r, c);
    a.row(r) *= inv;
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (i == r || a(i, c) == 0) continue;
      const Rat f = a(i, c);
      a.row(i) -= a.row(r) * f;
    }
    if (pivots) pivots->push_back(static_cast<int>(c));
    ++r;
  }
  return static_cast<int>(r);
}

int rank(RatMat a) { return rref_in_place(a); }

RatVec primitive(RatVec v) {
  mpz_class den_lcm = 1;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), v(i).get_den().get_mpz_t());
  mpz_class num_gcd = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    mpz_class n = v(i).get_num() * (den_lcm / v(i).get_den());
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), n.get_mpz_t());
  }
  if (num_gcd == 0) return v;  // zero vector
  Rat scale(den_lcm, num_gcd);
  scale.canonicalize();
  v *= scale;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) != 0) {
      if (v(i) < 0) v = -v;
      break;
    }
  }
  return v;
}

RatMat kernel(const RatMat& a) {
  RatMat m = a;
  std::vector<int> piv;
  const int r = rref_in_place(m, &piv);
  const Eigen::Index cols = a.cols();
  std::vector<int> free_cols;
  {
    std::size_t pi = 0;
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (pi < piv.size() && piv[pi] == c)
        ++pi;
      else
        free_cols.push_back(static_cast<int>(c));
    }
  }
  RatMat k = RatMat::Zero(cols, static_cast<Eigen::Index>(free_cols.size()));
  for (std::size_t t = 0; t < free_cols.size(); ++t) {
    const int fc = free_cols[t];
    k(fc, static_cast<Eigen::Index>(t)) = 1;
    for (int i = 0; i < r; ++i) k(piv[i], static_cast<Eigen::Index>(t)) = -m(i, fc);
    k.col(static_cast<Eigen::Index>(t)) = primitive(k.col(static_cast<Eigen::Index>(t)));
  }
  return k;
}

bool solve(const RatMat& a, const RatVec& b, RatVec* x) {
  if (a.rows() != b.size()) throw DimensionError("solve: rhs size mismatch");
  RatMat aug(a.rows(), a.cols() + 1);
  aug.leftCols(a.cols()) = a;
  aug.col(a.cols()) = b;
  std::vector<int> piv;
  const int r = rref_in_place(aug, &piv);
  if (!piv.empty() && piv.back() == static_cast<int>(a.cols())) return false;
  if (x) {
    *x = RatVec::Zero(a.cols());
    for (int i = 0; i < r; ++i) (*x)(piv[i]) = aug(i, a.cols());
  }
  return true;
}

RowSpan::RowSpan(const RatMat& columns) : ambient_(columns.rows()) {
  for (Eigen::Index j = 0; j < columns.cols(); ++j) insert(columns.col(j));
}

RatVec RowSpan::reduce(RatVec v) const {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Rat& c = v(lead_[i]);
    if (c != 0) {
      const Rat f = c;
      v -= rows_[i] * f;
    }
  }
  return v;
}

bool RowSpan::insert(RatVec v) {
  if (ambient_ == 0) ambient_ = v.size();
  v = reduce(std::move(v));
  int lead = -1;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) != 0) {
      lead = static_cast<int>(i);
      break;
    }
  }
  if (lead < 0) return false;
  const Rat inv = Rat(1) / v(lead);
  v *= inv;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Rat f = rows_[i](lead);
    if (f != 0) rows_[i] -= v * f;
  }
  const auto pos = std::upper_bound(lead_.begin(), lead_.end(), lead) - lead_.begin();
  lead_.insert(lead_.begin() + pos, lead);
  rows_.insert(rows_.begin() + pos, std::move(v));
  return true;
}

bool RowSpan::contains(const RatVec& v) const {
  RatVec r = reduce(v);
  for (Eigen::Index i = 0; i < r.size(); ++i)
    if (r(i) != 0) return false;
  return true;
}

bool span_contains(const RatMat& span_columns, const RatMat& test_columns) {
  RowSpan s(span_columns);
  for (Eigen::Index j = 0; j < test_columns.cols(); ++j)
    if (!s.contains(test_columns.col(j))) return false;
  return true;
}

bool span_equal(const RatMat& a, const RatMat& b) {
  return span_contains(a, b) && span_contains(b, a);
}

CoordinateSolver::CoordinateSolver(const RatMat& basis_columns)
    : rows_(basis_columns.rows()), dim_(static_cast<int>(basis_columns.cols())) {
  RatMat aug(rows_, dim_ + rows_);
  aug.leftCols(dim_) = basis_columns;
  aug.rightCols(rows_) = RatMat::Identity(rows_, rows_);
  std::vector<int> piv;
  rref_in_place(aug, &piv);
  for (int i = 0; i < dim_; ++i) {
    if (static_cast<int>(piv.size()) <= i || piv[i] != i)
      throw ArgumentError("CoordinateSolver: basis columns are linearly dependent");
  }
  transform_ = aug.rightCols(rows_);
}

bool CoordinateSolver::coords(const RatVec& v, RatVec* out) const {
  if (v.size() != rows_) throw DimensionError("CoordinateSolver: vector size mismatch");
  RatVec w = transform_ * v;
  for (Eigen::Index i = dim_; i < rows_; ++i)
    if (w(i) != 0) return false;
  if (out) *out = w.head(dim_);
  return true;
}

}  // namespace orbitcert::exact
