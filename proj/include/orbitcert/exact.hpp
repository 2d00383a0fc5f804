#ifndef ORBITCERT_EXACT_HPP
#define ORBITCERT_EXACT_HPP

#include <vector>

#include "orbitcert/rational.hpp"

namespace orbitcert::exact {

/// Reduced row echelon form in place; returns the rank.  Pivot columns are
/// appended to *pivots when given.  Pivoting is first-nonzero, so the result
/// is deterministic.
int rref_in_place(RatMat& a, std::vector<int>* pivots = nullptr);

int rank(RatMat a);

/// Scales a vector to coprime integer entries with positive leading entry.
RatVec primitive(RatVec v);

/// Columns form a basis of ker(a), primitively scaled; 0-column matrix for
/// trivial kernel.
RatMat kernel(const RatMat& a);

/// Solves a x = b exactly; returns false when inconsistent.
bool solve(const RatMat& a, const RatVec& b, RatVec* x = nullptr);

/// Incrementally maintained row-echelon span of vectors.
class RowSpan {
 public:
  RowSpan() = default;
  explicit RowSpan(Eigen::Index ambient) : ambient_(ambient) {}
  explicit RowSpan(const RatMat& columns);

  /// Adds v to the span; returns true when the dimension grew.
  bool insert(RatVec v);
  /// Residual of v after elimination against the span.
  RatVec reduce(RatVec v) const;
  bool contains(const RatVec& v) const;
  int dim() const { return static_cast<int>(rows_.size()); }
  Eigen::Index ambient() const { return ambient_; }

 private:
  Eigen::Index ambient_ = 0;
  std::vector<RatVec> rows_;  // reduced, unit leading entries, sorted by lead
  std::vector<int> lead_;
};

bool span_contains(const RatMat& span_columns, const RatMat& test_columns);
bool span_equal(const RatMat& a, const RatMat& b);

/// Exact coordinates with respect to a fixed full-column-rank basis matrix.
/// Precomputes a row transform E with E * basis = [I; 0], so each query is a
/// single matrix-vector product plus a consistency check.
class CoordinateSolver {
 public:
  CoordinateSolver() = default;
  explicit CoordinateSolver(const RatMat& basis_columns);

  /// Coordinates of v in the basis; returns false when v is outside the span.
  bool coords(const RatVec& v, RatVec* out) const;
  int dim() const { return dim_; }

 private:
  Eigen::Index rows_ = 0;
  int dim_ = 0;
  RatMat transform_;
};

}  // namespace orbitcert::exact

#endif
