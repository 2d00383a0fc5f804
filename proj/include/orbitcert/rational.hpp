#ifndef ORBITCERT_RATIONAL_HPP
#define ORBITCERT_RATIONAL_HPP

#include <gmpxx.h>
#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace Eigen {

template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
  typedef mpq_class Real;
  typedef mpq_class NonInteger;
  typedef mpq_class Nested;
  typedef mpq_class Literal;
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 150,
    MulCost = 100
  };
};

}  // namespace Eigen

namespace orbitcert {

using Rat = mpq_class;
using RatMat = Eigen::Matrix<Rat, Eigen::Dynamic, Eigen::Dynamic>;
using RatVec = Eigen::Matrix<Rat, Eigen::Dynamic, 1>;

/// n/d as a canonical rational.
inline Rat frac(long n, long d) {
  Rat q(n, d);
  q.canonicalize();
  return q;
}

/// Parses "p/q" or "p"; throws std::invalid_argument on malformed input.
inline Rat rat_parse(const std::string& s) {
  Rat q;
  if (s.empty() || q.set_str(s, 10) != 0)
    throw std::invalid_argument("not a rational: '" + s + "'");
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: '" + s + "'");
  q.canonicalize();
  return q;
}

inline std::string rat_str(const Rat& q) { return q.get_str(); }

inline double to_double(const Rat& q) { return q.get_d(); }

inline Eigen::MatrixXd to_double(const RatMat& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).get_d();
  return out;
}

inline bool is_zero(const RatMat& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0) return false;
  return true;
}

/// Column-major stacking of a matrix into a vector.
inline RatVec vectorize(const RatMat& m) {
  RatVec v(m.size());
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) v(k++) = m(i, j);
  return v;
}

inline RatMat unvectorize(const RatVec& v, Eigen::Index rows, Eigen::Index cols) {
  RatMat m(rows, cols);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = v(k++);
  return m;
}

}  // namespace orbitcert

#endif
