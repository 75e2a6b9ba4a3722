#include "gic/oracles.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <random>

#include "gic/errors.hpp"

namespace gic {

namespace {

int iabs(int x) { return x < 0 ? -x : x; }
int md(long a, int q) { return static_cast<int>(((a % q) + q) % q); }

int inv_mod(int a, int q) {
  for (int b = 1; b < q; ++b)
    if (md(static_cast<long>(a) * b, q) == 1) return b;
  throw std::domain_error("no inverse mod q");
}

bool is_prime(int q) {
  if (q < 2) return false;
  for (int p = 2; p * p <= q; ++p)
    if (q % p == 0) return false;
  return true;
}

// Fully reduced row echelon over F_q with incremental insertion.
struct Echelon {
  int q;
  std::vector<std::size_t> piv;
  std::vector<std::vector<int>> rows;

  std::vector<int> reduce(std::vector<int> v) const {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      int c = v[piv[r]];
      if (c == 0) continue;
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = md(v[i] - static_cast<long>(c) * rows[r][i], q);
    }
    return v;
  }
  bool contains(const std::vector<int>& v) const {
    auto r = reduce(v);
    return std::all_of(r.begin(), r.end(), [](int x) { return x == 0; });
  }
  void insert(std::vector<int> v) {
    v = reduce(std::move(v));
    std::size_t p = 0;
    while (p < v.size() && v[p] == 0) ++p;
    if (p == v.size()) return;
    int s = inv_mod(v[p], q);
    for (auto& x : v) x = md(static_cast<long>(x) * s, q);
    for (auto& row : rows) {
      int c = row[p];
      if (c)
        for (std::size_t i = 0; i < v.size(); ++i) row[i] = md(row[i] - static_cast<long>(c) * v[i], q);
    }
    rows.push_back(std::move(v));
    piv.push_back(p);
  }
  std::size_t rank() const { return rows.size(); }
};

std::vector<int> mat_vec(const FqMatrix& x, const std::vector<int>& v, int q) {
  std::vector<int> y(x.size(), 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    long s = 0;
    for (std::size_t j = 0; j < v.size(); ++j) s += static_cast<long>(x[i][j]) * v[j];
    y[i] = md(s, q);
  }
  return y;
}

FqMatrix mat_mul(const FqMatrix& a, const FqMatrix& b, int q) {
  std::size_t n = a.size();
  FqMatrix c(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (a[i][k])
        for (std::size_t j = 0; j < n; ++j) c[i][j] = md(c[i][j] + static_cast<long>(a[i][k]) * b[k][j], q);
  return c;
}

// inverse over F_q by Gauss-Jordan; empty if singular
FqMatrix mat_inv(FqMatrix a, int q) {
  std::size_t n = a.size();
  FqMatrix b(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) b[i][i] = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return {};
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    int s = inv_mod(a[c][c], q);
    for (std::size_t j = 0; j < n; ++j) {
      a[c][j] = md(static_cast<long>(a[c][j]) * s, q);
      b[c][j] = md(static_cast<long>(b[c][j]) * s, q);
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      int f = a[r][c];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] = md(a[r][j] - static_cast<long>(f) * a[c][j], q);
        b[r][j] = md(b[r][j] - static_cast<long>(f) * b[c][j], q);
      }
    }
  }
  return b;
}

std::size_t rank_mod(FqMatrix a, int q) {
  Echelon e{q, {}, {}};
  for (auto& row : a) e.insert(row);
  return e.rank();
}

int total_dim(const std::vector<GLFactor>& f) {
  int t = 0;
  for (const auto& x : f) t += x.dim();
  return t;
}

struct FlagCounter {
  int q, n;
  const std::vector<int>* weights;  // weight of each basis vector
  const std::vector<int>* word;
  const FqMatrix* x;
  std::map<int, Echelon> chosen;  // per weight: span of the chosen vectors

  std::uint64_t count(std::size_t k) {
    if (k == word->size()) return 1;
    int w = (*word)[k];
    std::size_t D = weights->size();
    auto& S = chosen.try_emplace(w, Echelon{q, {}, {}}).first->second;
    std::vector<std::size_t> comp;
    for (std::size_t i = 0; i < D; ++i)
      if ((*weights)[i] == w && std::find(S.piv.begin(), S.piv.end(), i) == S.piv.end()) comp.push_back(i);
    std::uint64_t total = 0;
    std::size_t r = comp.size();
    // all nonzero lam with first nonzero entry 1
    for (std::size_t lead = 0; lead < r; ++lead) {
      std::size_t free = r - lead - 1;
      std::uint64_t combos = 1;
      for (std::size_t i = 0; i < free; ++i) combos *= static_cast<std::uint64_t>(q);
      for (std::uint64_t c = 0; c < combos; ++c) {
        std::vector<int> b(D, 0);
        b[comp[lead]] = 1;
        std::uint64_t t = c;
        for (std::size_t i = lead + 1; i < r; ++i) {
          b[comp[i]] = static_cast<int>(t % q);
          t /= q;
        }
        auto xb = mat_vec(*x, b, q);
        bool zero = std::all_of(xb.begin(), xb.end(), [](int v) { return v == 0; });
        bool ok = zero;
        if (!zero) {
          auto it = chosen.find(w + n);
          ok = it != chosen.end() && it->second.contains(xb);
        }
        if (!ok) continue;
        Echelon saved = chosen.at(w);
        chosen.at(w).insert(b);
        total += count(k + 1);
        chosen.at(w) = std::move(saved);
      }
    }
    return total;
  }
};

}  // namespace

int oracle_max_dim() {
  if (const char* s = std::getenv("GIC_MAX_DIM")) {
    int v = std::atoi(s);
    if (v > 0) return v;
  }
  return 6;
}

std::vector<std::vector<int>> factor_basis_weights(const std::vector<GLFactor>& factors) {
  std::vector<std::vector<int>> out;
  for (const auto& f : factors) out.push_back(f.sorted());
  return out;
}

std::vector<FqMatrix> orbit_representative(const std::vector<GLFactor>& factors, const Multisegment& m, int n) {
  std::vector<FqMatrix> xs;
  auto bw = factor_basis_weights(factors);
  for (std::size_t f = 0; f < factors.size(); ++f) {
    std::size_t D = bw[f].size();
    FqMatrix x(D, std::vector<int>(D, 0));
    std::map<int, std::size_t> next;  // weight -> next unused basis position
    for (std::size_t i = 0; i < D; ++i)
      if (!next.count(bw[f][i])) next[bw[f][i]] = i;
    for (const Segment& s : m[f]) {
      std::vector<std::size_t> pos;
      for (int k = 0; k < s.len; ++k) pos.push_back(next[s.lo + k * iabs(n)]++);
      if (n > 0)
        for (std::size_t k = 0; k + 1 < pos.size(); ++k) x[pos[k + 1]][pos[k]] = 1;
      else
        for (std::size_t k = 0; k + 1 < pos.size(); ++k) x[pos[k]][pos[k + 1]] = 1;
    }
    xs.push_back(std::move(x));
  }
  return xs;
}

std::vector<FqMatrix> conjugate_representative(const std::vector<GLFactor>& factors, const std::vector<FqMatrix>& x,
                                               int q, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> U(0, q - 1);
  auto bw = factor_basis_weights(factors);
  std::vector<FqMatrix> out;
  for (std::size_t f = 0; f < factors.size(); ++f) {
    std::size_t D = bw[f].size();
    FqMatrix g, gi;
    do {
      g.assign(D, std::vector<int>(D, 0));
      for (std::size_t i = 0; i < D; ++i)
        for (std::size_t j = 0; j < D; ++j)
          if (bw[f][i] == bw[f][j]) g[i][j] = U(rng);
      gi = mat_inv(g, q);
    } while (gi.empty() && D > 0);
    out.push_back(D ? mat_mul(mat_mul(g, x[f], q), gi, q) : x[f]);
  }
  return out;
}

bool realizes_multisegment(const std::vector<GLFactor>& factors, const std::vector<FqMatrix>& x,
                           const Multisegment& m, int n, int q) {
  auto bw = factor_basis_weights(factors);
  for (std::size_t f = 0; f < factors.size(); ++f) {
    std::size_t D = bw[f].size();
    FqMatrix p(D, std::vector<int>(D, 0));
    for (std::size_t i = 0; i < D; ++i) p[i][i] = 1;
    for (int k = 1; k <= static_cast<int>(D); ++k) {
      p = mat_mul(x[f], p, q);
      for (auto [a, ma] : factors[f].weights) {
        int b = a + k * n;
        if (!factors[f].weights.count(b)) continue;
        FqMatrix blk;
        for (std::size_t i = 0; i < D; ++i) {
          if (bw[f][i] != b) continue;
          std::vector<int> row;
          for (std::size_t j = 0; j < D; ++j)
            if (bw[f][j] == a) row.push_back(p[i][j]);
          blk.push_back(row);
        }
        int want = 0;
        for (const Segment& s : m[f]) {
          int lo = s.lo, hi = s.hi(n);
          if (a >= lo && a <= hi && b >= lo && b <= hi) ++want;
        }
        if (static_cast<int>(rank_mod(blk, q)) != want) return false;
      }
    }
  }
  return true;
}

std::uint64_t flag_point_count(const FlagCountQuery& Q) {
  if (!is_prime(Q.q)) throw std::invalid_argument("flag_point_count: q must be prime");
  if (total_dim(Q.factors) > oracle_max_dim())
    throw TooLarge("flag count: total dimension " + std::to_string(total_dim(Q.factors)) + " exceeds the guard " +
                   std::to_string(oracle_max_dim()));
  auto bw = factor_basis_weights(Q.factors);
  std::uint64_t total = 1;
  for (std::size_t f = 0; f < Q.factors.size(); ++f) {
    FlagCounter c{Q.q, Q.n, &bw[f], &Q.s[f], &Q.x[f], {}};
    total *= c.count(0);
    if (total == 0) break;
  }
  return total;
}

int unipotent_shift(const Word& s, int n) {
  int m = 0;
  for (const auto& a : s)
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = i + 1; j < a.size(); ++j) {
        int t = a[i] - a[j];
        if (t == 0 || t == n) ++m;
      }
  return m;
}

bool normalized_e_value(const LaurentPoly& e, int m, int d, int q, Int* out) {
  mpq_class acc = 0;
  for (const auto& [k, c] : e.terms()) {
    int ex = m - d - k;
    if (ex % 2 != 0) return false;
    mpq_class term = c;
    if ((m + d + k) % 2 != 0) term = -term;
    mpz_class qp;
    mpz_pow_ui(qp.get_mpz_t(), mpz_class(q).get_mpz_t(), static_cast<unsigned long>(iabs(ex / 2)));
    if (ex >= 0) term *= qp;
    else term /= qp;
    acc += term;
  }
  acc.canonicalize();
  if (acc.get_den() != 1) return false;
  *out = acc.get_num();
  return true;
}

std::vector<Finding> check_e_against_counts(const RunResult& r, int q, std::uint64_t seed) {
  std::vector<Finding> out;
  const GradedDatum& d = *r.datum;
  if (!d.type_a) {
    out.push_back({"oracle", d.name + ": point counts need a type-A datum"});
    return out;
  }
  const TypeAInfo& info = *d.type_a;
  if (total_dim(info.factors) > oracle_max_dim())
    throw TooLarge("oracle: " + d.name + " exceeds the dimension guard");
  for (const auto& S : r.sides) {
    const int n = S.n;
    const auto& names = d.orbits.at(n);
    const auto& segs = info.orbit_segments.at(n);
    for (std::size_t j = 0; j < S.z.size(); ++j) {
      std::size_t oi = 0;
      while (oi < names.size() && names[oi].name != S.z[j].kappa.orbit) ++oi;
      if (oi == names.size()) {
        out.push_back({"oracle", d.name + ": no multisegment for " + S.z[j].kappa.str()});
        continue;
      }
      const Multisegment& ms = segs[oi];
      auto x = orbit_representative(info.factors, ms, n);
      if (!realizes_multisegment(info.factors, x, ms, n, q))
        out.push_back({"oracle", d.name + ": representative misses " + names[oi].name});
      auto x2 = conjugate_representative(info.factors, x, q, seed + j);
      if (!realizes_multisegment(info.factors, x2, ms, n, q))
        out.push_back({"oracle", d.name + ": conjugated representative misses " + names[oi].name});
      for (std::size_t s = 0; s < d.size(); ++s) {
        FlagCountQuery Q{info.factors, n, info.words[s], x, q};
        std::uint64_t cnt = flag_point_count(Q);
        Q.x = x2;
        std::uint64_t cnt2 = flag_point_count(Q);
        std::string where = d.name + " n=" + std::to_string(n) + " s=" + d.basis[s].label + " at " +
                            names[oi].name + " q=" + std::to_string(q);
        if (cnt != cnt2)
          out.push_back({"oracle-representative", where + ": counts " + std::to_string(cnt) + " and " +
                                                      std::to_string(cnt2) + " for two representatives"});
        const RatFunc& e = S.e_matrix(s, j);
        Int val;
        int m = unipotent_shift(info.words[s], n);
        if (!e.is_laurent() || !normalized_e_value(e.to_laurent(), m, names[oi].dim, q, &val)) {
          out.push_back({"oracle-parity", where + ": e = " + e.to_string() + " does not give an integer"});
          continue;
        }
        if (val != Int(static_cast<unsigned long>(cnt)))
          out.push_back({"oracle-mismatch", where + ": count " + std::to_string(cnt) + " but e = " + e.to_string() +
                                                " gives " + val.get_str()});
      }
    }
  }
  return out;
}

int orbit_dimension_oracle(const std::vector<GLFactor>& factors, const Multisegment& m, int n) {
  // matrices with entries in {0,1}; [y, x] for y running over a basis of L_0
  auto x = orbit_representative(factors, m, n);
  auto bw = factor_basis_weights(factors);
  std::vector<std::vector<mpq_class>> rows;
  for (std::size_t f = 0; f < factors.size(); ++f) {
    std::size_t D = bw[f].size();
    for (std::size_t a = 0; a < D; ++a)
      for (std::size_t b = 0; b < D; ++b) {
        if (bw[f][a] != bw[f][b]) continue;
        // y = E_ab; [y,x] = E_ab x - x E_ab
        std::vector<mpq_class> img;
        for (std::size_t g = 0; g < factors.size(); ++g) {
          std::size_t Dg = bw[g].size();
          for (std::size_t i = 0; i < Dg; ++i)
            for (std::size_t j = 0; j < Dg; ++j) {
              long v = 0;
              if (g == f) {
                if (i == a) v += x[f][b][j];
                if (j == b) v -= x[f][i][a];
              }
              img.emplace_back(v);
            }
        }
        rows.push_back(std::move(img));
      }
  }
  // rank over Q
  std::size_t rank = 0;
  std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t p = rank;
    while (p < rows.size() && rows[p][c] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[rank]);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      if (rows[r][c] == 0) continue;
      mpq_class f = rows[r][c] / rows[rank][c];
      for (std::size_t k = c; k < cols; ++k) rows[r][k] -= f * rows[rank][k];
    }
    ++rank;
  }
  return static_cast<int>(rank);
}

std::vector<Finding> check_orbit_dimensions(const RunResult& r) {
  std::vector<Finding> out;
  const GradedDatum& d = *r.datum;
  if (!d.type_a) return out;
  for (int k : d.delta()) {
    const auto& names = d.orbits.at(k);
    const auto& segs = d.type_a->orbit_segments.at(k);
    for (std::size_t i = 0; i < names.size(); ++i) {
      int o = orbit_dimension_oracle(d.type_a->factors, segs[i], k);
      if (o != names[i].dim)
        out.push_back({"orbit-dim", d.name + ": orbit " + names[i].name + " has d = " + std::to_string(names[i].dim) +
                                        " but rank of ad(x) is " + std::to_string(o)});
    }
  }
  return out;
}

/******** Kazhdan-Lusztig ******************************************************/

int perm_length(const std::vector<int>& w) {
  int l = 0;
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = i + 1; j < w.size(); ++j)
      if (w[i] > w[j]) ++l;
  return l;
}

bool bruhat_leq(const std::vector<int>& x, const std::vector<int>& y) {
  int m = static_cast<int>(x.size());
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k) {
      int cx = 0, cy = 0;
      for (int j = 0; j <= i; ++j) {
        cx += x[j] >= k;
        cy += y[j] >= k;
      }
      if (cx > cy) return false;
    }
  return true;
}

namespace {

using Perm = std::vector<int>;

Perm rmul(Perm w, int s) {  // w * s_s : swap positions s, s+1
  std::swap(w[s], w[s + 1]);
  return w;
}

struct KL {
  std::map<std::pair<Perm, Perm>, LaurentPoly> memo;
  std::vector<Perm> all;  // every permutation, by length

  explicit KL(int m) {
    Perm p(m);
    for (int i = 0; i < m; ++i) p[i] = i;
    do all.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    std::stable_sort(all.begin(), all.end(), [](const Perm& a, const Perm& b) { return perm_length(a) < perm_length(b); });
  }

  LaurentPoly P(const Perm& x, const Perm& y) {
    if (!bruhat_leq(x, y)) return LaurentPoly();
    if (x == y) return LaurentPoly(1);
    auto key = std::make_pair(x, y);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    int s = 0;
    while (!(y[s] > y[s + 1])) ++s;  // right descent of y
    Perm v = rmul(y, s);
    Perm xs = rmul(x, s);
    int c = x[s] > x[s + 1] ? 1 : 0;  // xs < x
    LaurentPoly res = LaurentPoly::monomial(1 - c) * P(xs, v) + LaurentPoly::monomial(c) * P(x, v);
    int ly = perm_length(y);
    for (const Perm& z : all) {
      if (!(z[s] > z[s + 1])) continue;  // need zs < z
      if (!bruhat_leq(x, z) || !bruhat_leq(z, v) || z == v) continue;
      int lz = perm_length(z), lv = perm_length(v);
      if ((lv - lz) % 2 == 0) continue;
      LaurentPoly pzv = P(z, v);
      Int mu = pzv.coeff((lv - lz - 1) / 2);
      if (mu == 0) continue;
      res -= LaurentPoly::monomial((ly - lz) / 2, mu) * P(x, z);
    }
    memo[key] = res;
    return res;
  }
};

}  // namespace

LaurentPoly kl_polynomial(const std::vector<int>& x, const std::vector<int>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("kl_polynomial: permutations of different sizes");
  int m = static_cast<int>(x.size());
  if (m > 6) throw TooLarge("kl_polynomial: m > 6");
  static std::map<int, std::unique_ptr<KL>> tables;
  static std::mutex mu;
  std::lock_guard<std::mutex> lk(mu);
  auto& t = tables[m];
  if (!t) t = std::make_unique<KL>(m);
  return t->P(x, y);
}

std::vector<int> composition_longest_element(const std::vector<int>& composition) {
  std::vector<int> w;
  int start = 0;
  for (int b : composition) {
    for (int i = b - 1; i >= 0; --i) w.push_back(start + i);
    start += b;
  }
  return w;
}

std::vector<Finding> kl_crosscheck(const RunResult& r) {
  std::vector<Finding> out;
  const GradedDatum& d = *r.datum;
  if (!d.type_a || d.type_a->factors.size() != 1 || d.n != 1) {
    out.push_back({"kl", d.name + ": KL cross-check needs one factor with n = 1"});
    return out;
  }
  const GLFactor& f = d.type_a->factors[0];
  int k = f.dim();
  for (int w = 0; w < k; ++w)
    if (!f.weights.count(w) || f.weights.at(w) != 1) {
      out.push_back({"kl", d.name + ": KL cross-check needs weights 0..k-1"});
      return out;
    }
  const SideResult& S = r.side(1);
  const auto& names = d.orbits.at(1);
  const auto& segs = d.type_a->orbit_segments.at(1);
  auto comp_of = [&](const std::string& orbit) {
    std::size_t i = 0;
    while (names[i].name != orbit) ++i;
    std::vector<Segment> ss = segs[i][0];
    std::sort(ss.begin(), ss.end());
    std::vector<int> c;
    for (const auto& s : ss) c.push_back(s.len);
    return std::make_pair(c, names[i].dim);
  };
  for (std::size_t i = 0; i < S.z.size(); ++i)
    for (std::size_t j = 0; j < S.z.size(); ++j) {
      auto [ci, di] = comp_of(S.z[i].kappa.orbit);
      auto [cj, dj] = comp_of(S.z[j].kappa.orbit);
      LaurentPoly P = kl_polynomial(composition_longest_element(cj), composition_longest_element(ci));
      std::map<int, Int> t;
      for (const auto& [e, c] : P.terms()) t[di - dj - 2 * e] += c;
      LaurentPoly want = LaurentPoly::from_terms(t);
      const RatFunc& got = S.c_matrix(i, j);
      if (got != RatFunc(want))
        out.push_back({"kl", d.name + ": f(" + S.z[i].kappa.str() + "," + S.z[j].kappa.str() + ") = " +
                                 got.to_string() + " but KL gives " + want.to_string()});
    }
  return out;
}

}  // namespace gic
