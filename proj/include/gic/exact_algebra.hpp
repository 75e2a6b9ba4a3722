#pragma once

/*
  Exact arithmetic over Z[v,v^-1] and its fraction field Q(v).

  LaurentPoly is stored densely: coefficient of v^(lo+i) is c[i], with no
  zero at either end.  RatFunc keeps an ordinary numerator/denominator pair
  in a canonical form (coprime over Q, jointly primitive over Z, positive
  leading coefficient downstairs), so == is structural.
*/

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace gic {

using Int = mpz_class;

class LaurentPoly {
 public:
  LaurentPoly() = default;
  LaurentPoly(long c);  // NOLINT: constants embed implicitly
  LaurentPoly(const Int& c);
  static LaurentPoly monomial(int exp, const Int& coef = 1);
  static LaurentPoly v() { return monomial(1); }
  static LaurentPoly from_terms(const std::map<int, Int>& terms);
  static LaurentPoly from_dense(int lo, std::vector<Int> coeffs);

  bool is_zero() const { return c_.empty(); }
  int min_exp() const { return lo_; }
  int max_exp() const { return lo_ + static_cast<int>(c_.size()) - 1; }
  Int coeff(int exp) const;
  std::map<int, Int> terms() const;
  const std::vector<Int>& dense() const { return c_; }
  bool is_constant() const { return c_.empty() || (lo_ == 0 && c_.size() == 1); }
  bool all_nonneg() const;

  LaurentPoly bar() const;
  LaurentPoly shifted(int k) const;  // times v^k
  // Part with exponents >= k (resp. > 0).
  LaurentPoly truncate_below(int k) const;

  LaurentPoly operator-() const;
  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  LaurentPoly& operator*=(const LaurentPoly& o);
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
    return a.lo_ == b.lo_ && a.c_ == b.c_;
  }
  friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }
  friend bool operator<(const LaurentPoly& a, const LaurentPoly& b);

  // Ascending exponents, "v^-1" style, e.g. "v^-1+v", "1-2v^3", "0".
  std::string to_string() const;
  static LaurentPoly parse(const std::string& s);

 private:
  void trim();
  int lo_ = 0;
  std::vector<Int> c_;
};

LaurentPoly lp_bar(const LaurentPoly& p);
Int eval_at_one(const LaurentPoly& p);

// Ordinary integer polynomial, ascending coefficients, no trailing zeros.
using Poly = std::vector<Int>;

class RatFunc {
 public:
  RatFunc() : num_(), den_{Int(1)} {}
  RatFunc(long c);  // NOLINT
  RatFunc(const Int& c);
  RatFunc(const LaurentPoly& p);  // NOLINT
  RatFunc(Poly num, Poly den);     // normalizes

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.empty(); }
  bool is_one() const;
  bool is_laurent() const;
  LaurentPoly to_laurent() const;  // throws std::domain_error unless is_laurent()

  RatFunc bar() const;
  RatFunc inverse() const;

  RatFunc operator-() const;
  RatFunc& operator+=(const RatFunc& o);
  RatFunc& operator-=(const RatFunc& o);
  RatFunc& operator*=(const RatFunc& o);
  RatFunc& operator/=(const RatFunc& o);
  friend RatFunc operator+(RatFunc a, const RatFunc& b) { return a += b; }
  friend RatFunc operator-(RatFunc a, const RatFunc& b) { return a -= b; }
  friend RatFunc operator*(RatFunc a, const RatFunc& b) { return a *= b; }
  friend RatFunc operator/(RatFunc a, const RatFunc& b) { return a /= b; }
  friend bool operator==(const RatFunc& a, const RatFunc& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

  std::string to_string() const;

 private:
  void normalize();
  Poly num_;
  Poly den_;
};

RatFunc rf_bar(const RatFunc& r);

class RFMatrix {
 public:
  RFMatrix() = default;
  RFMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), e_(rows * cols) {}
  static RFMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  RatFunc& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
  const RatFunc& operator()(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

  RFMatrix transpose() const;
  RFMatrix bar() const;
  bool all_laurent() const;
  friend RFMatrix operator*(const RFMatrix& a, const RFMatrix& b);
  friend RFMatrix operator-(const RFMatrix& a, const RFMatrix& b);
  friend bool operator==(const RFMatrix& a, const RFMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<RatFunc> e_;
};

// X with A*X = B.  Gauss-Jordan over Q(v); pivot = first nonzero in row order.
RFMatrix solve_linear(const RFMatrix& A, const RFMatrix& B);
std::size_t rank_of(const RFMatrix& A);

// Expansion of r in Z((v)), keeping exponents < N.
LaurentPoly series_prefix(const RatFunc& r, int N);

namespace poly {
Poly mul(const Poly& a, const Poly& b);
Poly add(const Poly& a, const Poly& b);
Poly sub(const Poly& a, const Poly& b);
Poly divexact(const Poly& a, const Poly& b);
Poly gcd(const Poly& a, const Poly& b);  // primitive, positive leading coefficient
Int content(const Poly& a);
int valuation(const Poly& a);
}  // namespace poly

}  // namespace gic
