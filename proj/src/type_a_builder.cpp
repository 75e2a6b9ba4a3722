#include "gic/type_a_builder.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "gic/errors.hpp"

namespace gic {

int GLFactor::dim() const {
  int d = 0;
  for (auto [w, m] : weights) d += m;
  return d;
}

std::vector<int> GLFactor::sorted() const {
  std::vector<int> r;
  for (auto [w, m] : weights) r.insert(r.end(), m, w);
  return r;
}

static int iabs(int x) { return x < 0 ? -x : x; }

/******** names and parsing **************************************************/

std::vector<GLFactor> parse_gl_spec(const std::string& spec, int* n_out) {
  const std::string head = "glq:";
  if (spec.rfind(head, 0) != 0) throw ParseError("datum spec must start with 'glq:': " + spec);
  std::string body = spec.substr(head.size());
  auto semi = body.find(';');
  if (semi == std::string::npos) throw ParseError("datum spec lacks ';n=K': " + spec);
  std::string fpart = body.substr(0, semi), npart = body.substr(semi + 1);
  if (npart.rfind("n=", 0) != 0) throw ParseError("datum spec lacks 'n=': " + spec);
  int n = 0;
  try {
    std::size_t used = 0;
    n = std::stoi(npart.substr(2), &used);
    if (used != npart.size() - 2) throw ParseError("trailing characters after n: " + spec);
  } catch (const std::logic_error&) {
    throw ParseError("bad n in datum spec: " + spec);
  }
  if (n < 1) throw ParseError("n must be a positive integer: " + spec);
  std::vector<GLFactor> fs;
  std::stringstream ss(fpart);
  std::string f;
  while (std::getline(ss, f, '|')) {
    GLFactor g;
    std::stringstream ws(f);
    std::string w;
    while (std::getline(ws, w, ',')) {
      try {
        std::size_t used = 0;
        int x = std::stoi(w, &used);
        if (used != w.size()) throw ParseError("bad weight '" + w + "'");
        ++g.weights[x];
      } catch (const std::logic_error&) {
        throw ParseError("bad weight '" + w + "' in " + spec);
      }
    }
    if (g.weights.empty()) throw ParseError("empty factor in " + spec);
    fs.push_back(std::move(g));
  }
  if (fs.empty()) throw ParseError("no factors in " + spec);
  if (n_out) *n_out = n;
  return fs;
}

std::string gl_spec_name(const std::vector<GLFactor>& factors, int n, FlagOrder order) {
  std::string s = "glq:";
  for (std::size_t f = 0; f < factors.size(); ++f) {
    if (f) s += "|";
    auto w = factors[f].sorted();
    for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + std::to_string(w[i]);
  }
  s += ";n=" + std::to_string(iabs(n));
  if (order == FlagOrder::Desc) s += ";desc";
  return s;
}

std::string word_label(const Word& w) {
  std::string s;
  for (std::size_t f = 0; f < w.size(); ++f) {
    if (f) s += "|";
    for (std::size_t i = 0; i < w[f].size(); ++i) s += (i ? "," : "") + std::to_string(w[f][i]);
  }
  return s;
}

std::string multisegment_name(const Multisegment& m, int n) {
  std::string s;
  for (std::size_t f = 0; f < m.size(); ++f) {
    if (f) s += "|";
    for (std::size_t i = 0; i < m[f].size(); ++i) {
      const Segment& g = m[f][i];
      s += i ? "+" : "";
      s += "[" + std::to_string(g.lo);
      if (g.len > 1) s += ".." + std::to_string(g.hi(n));
      s += "]";
    }
  }
  return s;
}

LinedWord lined(const Word& w) {
  LinedWord r(w.size());
  for (std::size_t f = 0; f < w.size(); ++f) {
    std::map<int, int> cnt;
    for (int x : w[f]) r[f].push_back({x, cnt[x]++});
  }
  return r;
}

/******** tau ****************************************************************/

int tau_of_pair(const LinedWord& x, const LinedWord& y, int n) {
  int t = 0;
  for (std::size_t f = 0; f < x.size(); ++f) {
    std::map<Line, int> py;
    for (std::size_t i = 0; i < y[f].size(); ++i) py[y[f][i]] = static_cast<int>(i);
    const auto& xf = x[f];
    for (std::size_t i = 0; i < xf.size(); ++i)
      for (std::size_t j = i + 1; j < xf.size(); ++j) {
        if (py.at(xf[i]) < py.at(xf[j])) continue;  // same order in y
        int diff = iabs(xf[i].weight - xf[j].weight);
        if (diff == 0) t -= 2;
        else if (diff == iabs(n)) t += 1;
      }
  }
  return t;
}

int dim_graded(const std::vector<GLFactor>& factors, int k) {
  int d = 0;
  for (const auto& f : factors)
    for (auto [w, m] : f.weights) {
      auto it = f.weights.find(w + k);
      if (it != f.weights.end()) d += m * it->second;
    }
  return d;
}

/******** orbits *************************************************************/

static void segs_rec(std::map<int, int>& rem, int step, std::vector<Segment>& cur, int last_lo, int last_len,
                     std::vector<std::vector<Segment>>& out) {
  auto it = std::find_if(rem.begin(), rem.end(), [](const auto& p) { return p.second > 0; });
  if (it == rem.end()) {
    auto s = cur;
    std::sort(s.begin(), s.end());
    out.push_back(s);
    return;
  }
  int lo = it->first;
  int maxlen = 0;
  while (rem.count(lo + maxlen * step) && rem[lo + maxlen * step] > 0) ++maxlen;
  if (lo == last_lo) maxlen = std::min(maxlen, last_len);
  for (int len = maxlen; len >= 1; --len) {
    for (int k = 0; k < len; ++k) --rem[lo + k * step];
    cur.push_back({lo, len});
    segs_rec(rem, step, cur, lo, len, out);
    cur.pop_back();
    for (int k = 0; k < len; ++k) ++rem[lo + k * step];
  }
}

std::vector<Multisegment> multisegments(const std::vector<GLFactor>& factors, int n) {
  std::vector<std::vector<std::vector<Segment>>> per;
  for (const auto& f : factors) {
    std::map<int, int> rem = f.weights;
    std::vector<Segment> cur;
    std::vector<std::vector<Segment>> out;
    segs_rec(rem, iabs(n), cur, INT32_MIN, 0, out);
    std::sort(out.begin(), out.end());
    per.push_back(out);
  }
  std::vector<Multisegment> all{Multisegment{}};
  for (const auto& options : per) {
    std::vector<Multisegment> next;
    for (const auto& partial : all)
      for (const auto& o : options) {
        auto m = partial;
        m.push_back(o);
        next.push_back(m);
      }
    all = std::move(next);
  }
  return all;
}

OrbitEta child_datum_of_orbit(const std::vector<GLFactor>& factors, const Multisegment& orbit, int n,
                              FlagOrder order) {
  struct L {
    int mu;
    int c2;  // twice the segment midpoint
  };
  const int step = iabs(n);
  const int sgn = n > 0 ? 1 : -1;
  OrbitEta eta;
  eta.orbit = orbit;
  int l0g = 0, l0p = 0, lnp = 0;
  bool whole = true;
  for (std::size_t f = 0; f < factors.size(); ++f) {
    std::vector<L> lines;
    for (const auto& s : orbit[f])
      for (int j = 0; j < s.len; ++j) lines.push_back({s.lo + j * step, 2 * s.lo + step * (s.len - 1)});
    for (const auto& a : lines)
      for (const auto& b : lines) {
        bool inP = (a.c2 - b.c2) * sgn <= 0;  // E_ab, mapping line b to line a
        if (a.mu == b.mu) {
          ++l0g;
          if (inP) ++l0p;
        }
        if (a.mu - b.mu == n && inP) ++lnp;
      }
    std::set<int> cs;
    for (const auto& l : lines) cs.insert(l.c2);
    std::vector<int> blocks(cs.begin(), cs.end());
    bool ascending = (n > 0) == (order == FlagOrder::Asc);
    if (!ascending) std::reverse(blocks.begin(), blocks.end());
    if (blocks.size() > 1) whole = false;
    for (int c2 : blocks) {
      GLFactor g;
      for (const auto& l : lines)
        if (l.c2 == c2) ++g.weights[l.mu];
      eta.child_factors.push_back(g);
      eta.child_parent.push_back(f);
    }
  }
  eta.d_eta = l0g - l0p + lnp;
  eta.whole = whole;
  return eta;
}

std::vector<OrbitEta> enumerate_orbits(const std::vector<GLFactor>& factors, int n, FlagOrder order) {
  std::vector<OrbitEta> r;
  for (const auto& m : multisegments(factors, n)) r.push_back(child_datum_of_orbit(factors, m, n, order));
  return r;
}

bool closure_leq(const Multisegment& a, const Multisegment& b, int n) {
  const int step = iabs(n);
  for (std::size_t f = 0; f < a.size(); ++f) {
    std::set<int> ws;
    for (const auto& s : a[f])
      for (int j = 0; j < s.len; ++j) ws.insert(s.lo + j * step);
    for (int p : ws)
      for (int q : ws) {
        if (q < p || (q - p) % step) continue;
        auto rank = [&](const std::vector<Segment>& segs) {
          int r = 0;
          for (const auto& s : segs)
            if (s.lo <= p && s.hi(step) >= q) ++r;
          return r;
        };
        if (rank(a[f]) > rank(b[f])) return false;
      }
  }
  return true;
}

/******** rigidity ***********************************************************/

static LaurentPoly qfactorial_v2(int m) {
  LaurentPoly r = 1;
  for (int i = 1; i <= m; ++i) {
    LaurentPoly q;
    for (int k = 0; k < i; ++k) q += LaurentPoly::monomial(2 * k);
    r *= q;
  }
  return r;
}

static bool factor_rigid(const GLFactor& f, int n) {
  int m = f.dim();
  long sum = 0;
  for (auto [w, k] : f.weights) sum += static_cast<long>(w) * k;
  if ((2 * sum) % m) return false;
  long c = 2 * sum / m;
  std::multiset<long> ks;
  for (auto [w, k] : f.weights) {
    long t = 2L * w - c;
    if (t % n) return false;
    for (int i = 0; i < k; ++i) ks.insert(t / n);
  }
  while (!ks.empty()) {
    long K = *ks.rbegin();
    if (K < 0) return false;
    for (long x = K; x >= -K; x -= 2) {
      auto it = ks.find(x);
      if (it == ks.end()) return false;
      ks.erase(it);
    }
  }
  return true;
}

LeafData rigidity_check(const std::vector<GLFactor>& factors, int n) {
  LeafData leaf;
  leaf.rigid = std::all_of(factors.begin(), factors.end(), [&](const GLFactor& f) { return factor_rigid(f, iabs(n)); });
  bool central = std::all_of(factors.begin(), factors.end(), [](const GLFactor& f) { return f.weights.size() == 1; });
  if (leaf.rigid && central) {
    LaurentPoly e = 1;
    int dimX = 0;
    for (const auto& f : factors) {
      int m = f.dim();
      e *= qfactorial_v2(m);
      dimX += m * (m - 1) / 2;
    }
    leaf.cprime.push_back({0, e.shifted(-dimX), "triv"});
  }
  return leaf;
}

/******** datum construction *************************************************/

static std::vector<std::vector<int>> arrangements(const GLFactor& f) {
  std::vector<int> w = f.sorted();
  std::vector<std::vector<int>> r;
  do r.push_back(w);
  while (std::next_permutation(w.begin(), w.end()));
  return r;
}

template <class T>
static std::vector<std::vector<T>> cartesian(const std::vector<std::vector<T>>& opts) {
  std::vector<std::vector<T>> all{{}};
  for (const auto& o : opts) {
    std::vector<std::vector<T>> next;
    for (const auto& p : all)
      for (const auto& x : o) {
        auto q = p;
        q.push_back(x);
        next.push_back(std::move(q));
      }
    all = std::move(next);
  }
  return all;
}

// Every way of attaching line identities to the arrangement of one factor.
static std::vector<std::vector<Line>> lined_variants(const std::vector<int>& arr) {
  std::map<int, std::vector<std::size_t>> pos;
  for (std::size_t i = 0; i < arr.size(); ++i) pos[arr[i]].push_back(i);
  std::vector<std::vector<Line>> out{std::vector<Line>(arr.size())};
  for (const auto& [w, ps] : pos) {
    std::vector<int> perm(ps.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<Line>> next;
    for (const auto& base : out) {
      auto p = perm;
      do {
        auto v = base;
        for (std::size_t k = 0; k < ps.size(); ++k) v[ps[k]] = {w, p[k]};
        next.push_back(std::move(v));
      } while (std::next_permutation(p.begin(), p.end()));
    }
    out = std::move(next);
  }
  return out;
}

namespace {
std::mutex g_memo_mutex;
std::map<std::string, std::shared_ptr<const GradedDatum>> g_memo;
}  // namespace

static std::shared_ptr<const GradedDatum> build(const std::vector<GLFactor>& factors, int n, FlagOrder order) {
  n = iabs(n);
  auto d = std::make_shared<GradedDatum>();
  auto info = std::make_shared<TypeAInfo>();
  info->factors = factors;
  info->n = n;
  info->order = order;
  d->name = gl_spec_name(factors, n, order);
  d->n = n;

  std::vector<std::vector<std::vector<int>>> per;
  for (const auto& f : factors) per.push_back(arrangements(f));
  info->words = cartesian(per);
  std::map<Word, std::size_t> index;
  for (std::size_t i = 0; i < info->words.size(); ++i) {
    index[info->words[i]] = i;
    d->basis.push_back({i, word_label(info->words[i])});
  }
  const std::size_t N = info->words.size();

  int rank = 0;
  LaurentPoly theta = 1, thetaG = 1;
  for (const auto& f : factors) {
    rank += f.dim();
    for (auto [w, m] : f.weights) {
      theta *= qfactorial_v2(m);
      for (int i = 1; i <= m; ++i) thetaG *= LaurentPoly(1) - LaurentPoly::monomial(2 * i);
    }
  }
  PrimitiveClass F;
  F.id = 0;
  F.dual = 0;
  F.c_F = dim_graded(factors, n) - dim_graded(factors, 0) + rank;
  for (std::size_t i = 0; i < N; ++i) F.members.push_back(i);
  F.theta_ratio = theta;
  d->classes.push_back(F);
  d->theta_G = thetaG;

  // pairing: representative x per class, y over the whole target class
  std::vector<std::vector<LinedWord>> yvars;
  for (const auto& w : info->words) {
    std::vector<std::vector<std::vector<Line>>> pf;
    for (const auto& a : w) pf.push_back(lined_variants(a));
    yvars.push_back(cartesian(pf));
  }
  for (std::size_t s = 0; s < N; ++s) {
    LinedWord x = lined(info->words[s]);
    for (std::size_t sp = 0; sp < N; ++sp)
      for (const auto& y : yvars[sp]) d->pairing.push_back({s, sp, tau_of_pair(x, y, n)});
  }

  for (std::size_t i = 0; i < N; ++i) {
    Word r = info->words[i];
    for (auto& f : r) std::reverse(f.begin(), f.end());
    d->sigma.push_back(index.at(r));
  }

  d->leaf = rigidity_check(factors, n);

  for (int k : {n, -n}) {
    auto etas = enumerate_orbits(factors, k, order);
    int whole = 0;
    std::size_t eid = 0;
    for (const auto& e : etas) {
      std::string nm = multisegment_name(e.orbit, k);
      d->orbits[k].push_back({nm, e.d_eta});
      info->orbit_segments[k].push_back(e.orbit);
      if (e.whole) {
        ++whole;
        continue;
      }
      EtaClass ec;
      ec.id = eid++;
      ec.n = k;
      ec.d_eta = e.d_eta;
      ec.orbit = nm;
      auto child = make_type_a_shared(e.child_factors, n, order);
      ec.child = child;
      const auto& cw = child->type_a->words;
      for (std::size_t ci = 0; ci < cw.size(); ++ci) {
        Word pw(factors.size());
        for (std::size_t b = 0; b < e.child_factors.size(); ++b) {
          auto& dst = pw[e.child_parent[b]];
          dst.insert(dst.end(), cw[ci][b].begin(), cw[ci][b].end());
        }
        ec.induction.emplace_back(ci, index.at(pw));
      }
      d->etas[k].push_back(std::move(ec));
    }
    if (whole != (d->leaf.rigid ? 1 : 0))
      throw std::logic_error("type A: whole-group orbit count disagrees with rigidity for " + d->name);
    for (const auto& a : etas)
      for (const auto& b : etas)
        if (a.orbit != b.orbit && closure_leq(a.orbit, b.orbit, k))
          d->closure[k].emplace_back(multisegment_name(a.orbit, k), multisegment_name(b.orbit, k));
  }
  d->type_a = info;
  return d;
}

std::shared_ptr<const GradedDatum> make_type_a_shared(const std::vector<GLFactor>& factors, int n, FlagOrder order) {
  std::string key = gl_spec_name(factors, n, order);
  {
    std::lock_guard<std::mutex> lk(g_memo_mutex);
    if (auto it = g_memo.find(key); it != g_memo.end()) return it->second;
  }
  auto d = build(factors, n, order);
  std::lock_guard<std::mutex> lk(g_memo_mutex);
  return g_memo.emplace(key, d).first->second;
}

GradedDatum make_type_a_datum(const std::vector<GLFactor>& factors, int n, FlagOrder order) {
  if (n == 0) throw std::invalid_argument("n must be nonzero");
  return *make_type_a_shared(factors, n, order);
}

}  // namespace gic
