#include "gic/exact_algebra.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "gic/errors.hpp"

namespace gic {

/******** LaurentPoly ********************************************************/

LaurentPoly::LaurentPoly(long c) {
  if (c != 0) c_.push_back(Int(c));
}

LaurentPoly::LaurentPoly(const Int& c) {
  if (c != 0) c_.push_back(c);
}

LaurentPoly LaurentPoly::monomial(int exp, const Int& coef) {
  LaurentPoly p;
  if (coef != 0) {
    p.lo_ = exp;
    p.c_.push_back(coef);
  }
  return p;
}

LaurentPoly LaurentPoly::from_terms(const std::map<int, Int>& terms) {
  LaurentPoly p;
  if (terms.empty()) return p;
  int lo = terms.begin()->first, hi = terms.rbegin()->first;
  p.lo_ = lo;
  p.c_.assign(hi - lo + 1, Int(0));
  for (const auto& [e, c] : terms) p.c_[e - lo] += c;
  p.trim();
  return p;
}

LaurentPoly LaurentPoly::from_dense(int lo, std::vector<Int> coeffs) {
  LaurentPoly p;
  p.lo_ = lo;
  p.c_ = std::move(coeffs);
  p.trim();
  return p;
}

void LaurentPoly::trim() {
  std::size_t a = 0;
  while (a < c_.size() && c_[a] == 0) ++a;
  if (a == c_.size()) {
    c_.clear();
    lo_ = 0;
    return;
  }
  std::size_t b = c_.size();
  while (c_[b - 1] == 0) --b;
  if (a > 0 || b < c_.size()) {
    c_ = std::vector<Int>(c_.begin() + a, c_.begin() + b);
    lo_ += static_cast<int>(a);
  }
}

Int LaurentPoly::coeff(int exp) const {
  if (c_.empty() || exp < lo_ || exp > max_exp()) return 0;
  return c_[exp - lo_];
}

std::map<int, Int> LaurentPoly::terms() const {
  std::map<int, Int> t;
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (c_[i] != 0) t.emplace(lo_ + static_cast<int>(i), c_[i]);
  return t;
}

bool LaurentPoly::all_nonneg() const {
  return std::all_of(c_.begin(), c_.end(), [](const Int& x) { return x >= 0; });
}

LaurentPoly LaurentPoly::bar() const {
  LaurentPoly p;
  if (c_.empty()) return p;
  p.c_.assign(c_.rbegin(), c_.rend());
  p.lo_ = -max_exp();
  return p;
}

LaurentPoly LaurentPoly::shifted(int k) const {
  LaurentPoly p = *this;
  if (!p.c_.empty()) p.lo_ += k;
  return p;
}

LaurentPoly LaurentPoly::truncate_below(int k) const {
  std::map<int, Int> t;
  for (auto& [e, c] : terms())
    if (e >= k) t.emplace(e, c);
  return from_terms(t);
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly p = *this;
  for (auto& x : p.c_) x = -x;
  return p;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  if (o.c_.empty()) return *this;
  if (c_.empty()) return *this = o;
  int lo = std::min(lo_, o.lo_), hi = std::max(max_exp(), o.max_exp());
  std::vector<Int> r(hi - lo + 1, Int(0));
  for (std::size_t i = 0; i < c_.size(); ++i) r[lo_ - lo + i] += c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) r[o.lo_ - lo + i] += o.c_[i];
  lo_ = lo;
  c_ = std::move(r);
  trim();
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) { return *this += -o; }

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  LaurentPoly p;
  if (a.c_.empty() || b.c_.empty()) return p;
  p.lo_ = a.lo_ + b.lo_;
  p.c_.assign(a.c_.size() + b.c_.size() - 1, Int(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) p.c_[i + j] += a.c_[i] * b.c_[j];
  p.trim();
  return p;
}

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& o) { return *this = *this * o; }

bool operator<(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.lo_ != b.lo_) return a.lo_ < b.lo_;
  if (a.c_.size() != b.c_.size()) return a.c_.size() < b.c_.size();
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    if (a.c_[i] != b.c_[i]) return a.c_[i] < b.c_[i];
  return false;
}

std::string LaurentPoly::to_string() const {
  if (c_.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    const Int& c = c_[i];
    if (c == 0) continue;
    int e = lo_ + static_cast<int>(i);
    bool neg = c < 0;
    Int a = abs(c);
    if (!s.empty()) s += neg ? "-" : "+";
    else if (neg) s += "-";
    if (e == 0) {
      s += a.get_str();
      continue;
    }
    if (a != 1) s += a.get_str();
    s += "v";
    if (e != 1) s += "^" + std::to_string(e);
  }
  return s;
}

LaurentPoly LaurentPoly::parse(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw ParseError("empty polynomial");
  std::map<int, Int> t;
  std::size_t i = 0;
  auto digits = [&](std::size_t& k) {
    std::size_t st = k;
    while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
    return s.substr(st, k - st);
  };
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (!t.empty() || i > 0) {
      throw ParseError("bad polynomial: " + text);
    }
    std::string num = digits(i);
    Int coef = num.empty() ? Int(1) : Int(num);
    int e = 0;
    if (i < s.size() && s[i] == 'v') {
      ++i;
      e = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        int es = 1;
        if (i < s.size() && s[i] == '-') {
          es = -1;
          ++i;
        }
        std::string ed = digits(i);
        if (ed.empty()) throw ParseError("bad exponent: " + text);
        e = es * std::stoi(ed);
      }
    } else if (num.empty()) {
      throw ParseError("bad polynomial: " + text);
    }
    t[e] += sign * coef;
  }
  return from_terms(t);
}

LaurentPoly lp_bar(const LaurentPoly& p) { return p.bar(); }

Int eval_at_one(const LaurentPoly& p) {
  Int s = 0;
  for (const auto& c : p.dense()) s += c;
  return s;
}

/******** integer polynomials ************************************************/

namespace poly {

static void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly add(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), Int(0));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  trim(r);
  return r;
}

Poly sub(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), Int(0));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

Poly mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, Int(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  trim(r);
  return r;
}

Int content(const Poly& a) {
  Int g = 0;
  for (const auto& x : a) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

int valuation(const Poly& a) {
  int k = 0;
  while (k < static_cast<int>(a.size()) && a[k] == 0) ++k;
  return k;
}

static Poly scale_div(const Poly& a, const Int& d) {
  Poly r(a);
  for (auto& x : r) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), d.get_mpz_t());
  return r;
}

static Poly primitive(const Poly& a) {
  if (a.empty()) return a;
  Int c = content(a);
  if (a.back() < 0) c = -c;
  return c == 1 ? a : scale_div(a, c);
}

// Exact division; b must divide a in Z[v].
Poly divexact(const Poly& a, const Poly& b) {
  if (b.empty()) throw std::domain_error("division by zero polynomial");
  if (a.empty()) return {};
  if (b.size() == 1) return scale_div(a, b[0]);
  Poly r(a);
  Poly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Int(0));
  const Int& lb = b.back();
  for (std::size_t k = q.size(); k-- > 0;) {
    Int& top = r[k + b.size() - 1];
    if (top == 0) continue;
    if (!mpz_divisible_p(top.get_mpz_t(), lb.get_mpz_t()))
      throw std::domain_error("inexact polynomial division");
    Int f;
    mpz_divexact(f.get_mpz_t(), top.get_mpz_t(), lb.get_mpz_t());
    q[k] = f;
    for (std::size_t j = 0; j < b.size(); ++j) r[k + j] -= f * b[j];
  }
  trim(r);
  if (!r.empty()) throw std::domain_error("inexact polynomial division");
  trim(q);
  return q;
}

// Pseudo-remainder of a by b.
static Poly prem(Poly a, const Poly& b) {
  const Int& lb = b.back();
  while (a.size() >= b.size() && !a.empty()) {
    Int la = a.back();
    std::size_t sh = a.size() - b.size();
    for (auto& x : a) x *= lb;
    for (std::size_t j = 0; j < b.size(); ++j) a[sh + j] -= la * b[j];
    trim(a);
  }
  return a;
}

Poly gcd(const Poly& a0, const Poly& b0) {
  if (a0.empty()) return primitive(b0);
  if (b0.empty()) return primitive(a0);
  int k = std::min(valuation(a0), valuation(b0));
  Poly a(a0.begin() + valuation(a0), a0.end());
  Poly b(b0.begin() + valuation(b0), b0.end());
  Poly g;
  if (a.size() == 1 || b.size() == 1) {
    g = {Int(1)};
  } else {
    a = primitive(a);
    b = primitive(b);
    if (a.size() < b.size()) std::swap(a, b);
    while (!b.empty()) {
      Poly r = primitive(prem(a, b));
      a = std::move(b);
      b = std::move(r);
    }
    g = primitive(a);
  }
  if (k > 0) g.insert(g.begin(), k, Int(0));
  return g;
}

}  // namespace poly

/******** RatFunc ************************************************************/

RatFunc::RatFunc(long c) : den_{Int(1)} {
  if (c != 0) num_.push_back(Int(c));
}

RatFunc::RatFunc(const Int& c) : den_{Int(1)} {
  if (c != 0) num_.push_back(c);
}

RatFunc::RatFunc(const LaurentPoly& p) : den_{Int(1)} {
  if (p.is_zero()) return;
  const auto& d = p.dense();
  int lo = p.min_exp();
  if (lo >= 0) {
    num_.assign(lo, Int(0));
    num_.insert(num_.end(), d.begin(), d.end());
  } else {
    num_ = d;
    den_.assign(-lo + 1, Int(0));
    den_.back() = 1;
  }
}

RatFunc::RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  poly::trim(num_);
  poly::trim(den_);
  if (den_.empty()) throw std::domain_error("zero denominator");
  normalize();
}

void RatFunc::normalize() {
  if (num_.empty()) {
    den_ = {Int(1)};
    return;
  }
  int k = std::min(poly::valuation(num_), poly::valuation(den_));
  if (k > 0) {
    num_.erase(num_.begin(), num_.begin() + k);
    den_.erase(den_.begin(), den_.begin() + k);
  }
  // a constant side shares nothing but powers of v, already stripped
  if (den_.size() > 1 && num_.size() > 1) {
    Poly g = poly::gcd(num_, den_);
    if (g.size() > 1) {
      num_ = poly::divexact(num_, g);
      den_ = poly::divexact(den_, g);
    }
  }
  Int c = poly::content(num_);
  Int d = poly::content(den_);
  mpz_gcd(c.get_mpz_t(), c.get_mpz_t(), d.get_mpz_t());
  if (den_.back() < 0) c = -c;
  if (c != 1) {
    num_ = poly::scale_div(num_, c);
    den_ = poly::scale_div(den_, c);
  }
}

bool RatFunc::is_one() const { return num_.size() == 1 && num_[0] == 1 && den_.size() == 1; }

bool RatFunc::is_laurent() const {
  if (den_.back() != 1) return false;
  for (std::size_t i = 0; i + 1 < den_.size(); ++i)
    if (den_[i] != 0) return false;
  return true;
}

LaurentPoly RatFunc::to_laurent() const {
  if (!is_laurent()) throw std::domain_error("not a Laurent polynomial: " + to_string());
  return LaurentPoly::from_dense(-static_cast<int>(den_.size() - 1), num_);
}

RatFunc RatFunc::bar() const {
  if (num_.empty()) return *this;
  // f(v^-1) = v^-deg f * rev(f)
  Poly n(num_.rbegin(), num_.rend()), d(den_.rbegin(), den_.rend());
  int shift = static_cast<int>(den_.size()) - static_cast<int>(num_.size());
  if (shift > 0) n.insert(n.begin(), shift, Int(0));
  if (shift < 0) d.insert(d.begin(), -shift, Int(0));
  return RatFunc(std::move(n), std::move(d));
}

RatFunc RatFunc::inverse() const {
  if (num_.empty()) throw std::domain_error("inverse of zero");
  return RatFunc(den_, num_);
}

RatFunc RatFunc::operator-() const {
  RatFunc r = *this;
  for (auto& x : r.num_) x = -x;
  return r;
}

static bool poly_is_one(const Poly& p) { return p.size() == 1 && p[0] == 1; }

RatFunc& RatFunc::operator+=(const RatFunc& o) {
  if (o.num_.empty()) return *this;
  if (num_.empty()) return *this = o;
  if (den_ == o.den_) {
    num_ = poly::add(num_, o.num_);
    if (poly_is_one(den_)) return *this;
  } else {
    num_ = poly::add(poly::mul(num_, o.den_), poly::mul(o.num_, den_));
    den_ = poly::mul(den_, o.den_);
  }
  normalize();
  return *this;
}

RatFunc& RatFunc::operator-=(const RatFunc& o) { return *this += -o; }

RatFunc& RatFunc::operator*=(const RatFunc& o) {
  if (num_.empty()) return *this;
  if (o.num_.empty()) return *this = RatFunc();
  bool simple = poly_is_one(den_) && poly_is_one(o.den_);
  num_ = poly::mul(num_, o.num_);
  den_ = poly::mul(den_, o.den_);
  if (!simple) normalize();
  return *this;
}

RatFunc& RatFunc::operator/=(const RatFunc& o) { return *this *= o.inverse(); }

std::string RatFunc::to_string() const {
  auto ps = [](const Poly& p) { return LaurentPoly::from_dense(0, p).to_string(); };
  if (is_laurent()) return to_laurent().to_string();
  return "(" + ps(num_) + ")/(" + ps(den_) + ")";
}

RatFunc rf_bar(const RatFunc& r) { return r.bar(); }

/******** matrices ***********************************************************/

RFMatrix RFMatrix::identity(std::size_t n) {
  RFMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = RatFunc(1);
  return m;
}

RFMatrix RFMatrix::transpose() const {
  RFMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

RFMatrix RFMatrix::bar() const {
  RFMatrix t(rows_, cols_);
  for (std::size_t i = 0; i < e_.size(); ++i) t.e_[i] = e_[i].bar();
  return t;
}

bool RFMatrix::all_laurent() const {
  return std::all_of(e_.begin(), e_.end(), [](const RatFunc& r) { return r.is_laurent(); });
}

RFMatrix operator*(const RFMatrix& a, const RFMatrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("matrix shape mismatch");
  RFMatrix r(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const RatFunc& x = a(i, k);
      if (x.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j)
        if (!b(k, j).is_zero()) r(i, j) += x * b(k, j);
    }
  return r;
}

RFMatrix operator-(const RFMatrix& a, const RFMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix shape mismatch");
  RFMatrix r(a.rows_, a.cols_);
  for (std::size_t i = 0; i < a.e_.size(); ++i) r.e_[i] = a.e_[i] - b.e_[i];
  return r;
}

RFMatrix solve_linear(const RFMatrix& A, const RFMatrix& B) {
  std::size_t n = A.rows();
  if (A.cols() != n) throw std::invalid_argument("solve_linear: A not square");
  if (B.rows() != n) throw std::invalid_argument("solve_linear: B has wrong row count");
  std::size_t m = B.cols();
  std::vector<std::vector<RatFunc>> M(n, std::vector<RatFunc>(n + m));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) M[i][j] = A(i, j);
    for (std::size_t j = 0; j < m; ++j) M[i][n + j] = B(i, j);
  }
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && M[p][k].is_zero()) ++p;
    if (p == n) throw SingularMatrix("matrix is singular over Q(v) at column " + std::to_string(k));
    std::swap(M[p], M[k]);
    RatFunc inv = M[k][k].inverse();
    for (std::size_t j = k; j < n + m; ++j)
      if (!M[k][j].is_zero()) M[k][j] *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || M[i][k].is_zero()) continue;
      RatFunc f = M[i][k];
      for (std::size_t j = k; j < n + m; ++j)
        if (!M[k][j].is_zero()) M[i][j] -= f * M[k][j];
    }
  }
  RFMatrix X(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) X(i, j) = M[i][n + j];
  return X;
}

std::size_t rank_of(const RFMatrix& A) {
  std::vector<std::vector<RatFunc>> M(A.rows(), std::vector<RatFunc>(A.cols()));
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) M[i][j] = A(i, j);
  std::size_t r = 0;
  for (std::size_t c = 0; c < A.cols() && r < A.rows(); ++c) {
    std::size_t p = r;
    while (p < A.rows() && M[p][c].is_zero()) ++p;
    if (p == A.rows()) continue;
    std::swap(M[p], M[r]);
    RatFunc inv = M[r][c].inverse();
    for (std::size_t i = r + 1; i < A.rows(); ++i) {
      if (M[i][c].is_zero()) continue;
      RatFunc f = M[i][c] * inv;
      for (std::size_t j = c; j < A.cols(); ++j)
        if (!M[r][j].is_zero()) M[i][j] -= f * M[r][j];
    }
    ++r;
  }
  return r;
}

LaurentPoly series_prefix(const RatFunc& r, int N) {
  if (r.is_zero()) return {};
  const Poly& num = r.num();
  const Poly& den = r.den();
  int vn = poly::valuation(num), vd = poly::valuation(den);
  Poly n(num.begin() + vn, num.end()), d(den.begin() + vd, den.end());
  if (d[0] != 1 && d[0] != -1)
    throw NotExpandable("constant term of denominator is not a unit: " + r.to_string());
  int shift = vn - vd;
  int terms = N - shift;
  if (terms <= 0) return {};
  std::vector<Int> s(terms, Int(0));
  // d * s = n  (mod v^terms)
  for (int k = 0; k < terms; ++k) {
    Int acc = k < static_cast<int>(n.size()) ? n[k] : Int(0);
    for (int j = 1; j <= k && j < static_cast<int>(d.size()); ++j) acc -= d[j] * s[k - j];
    s[k] = d[0] == 1 ? acc : Int(-acc);
  }
  return LaurentPoly::from_dense(shift, std::move(s));
}

}  // namespace gic
