#include "gic/engine.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "gic/errors.hpp"

namespace gic {

const char* origin_name(Origin o) {
  switch (o) {
    case Origin::Induced: return "Induced";
    case Origin::CFromFourier: return "CFromFourier";
    case Origin::CPrime: return "CPrime";
  }
  return "?";
}

namespace {

using Vec = std::vector<RatFunc>;

Vec gram_apply(const RFMatrix& G, const Vec& x) {
  Vec y(G.rows());
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j].is_zero()) continue;
    for (std::size_t i = 0; i < G.rows(); ++i)
      if (!G(i, j).is_zero()) y[i] += G(i, j) * x[j];
  }
  return y;
}

RatFunc dot(const Vec& a, const Vec& b) {
  RatFunc s;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a[i].is_zero() && !b[i].is_zero()) s += a[i] * b[i];
  return s;
}

Vec bar(const Vec& x) {
  Vec y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i].bar();
  return y;
}

Vec axpy(Vec y, const RatFunc& a, const Vec& x) {
  if (a.is_zero()) return y;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!x[i].is_zero()) y[i] += a * x[i];
  return y;
}

Vec from_kv(const KVector& k, std::size_t N) {
  Vec v(N);
  for (const auto& [i, c] : k) v[i] = c;
  return v;
}

KVector to_kv(const Vec& v) {
  KVector k;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) k[i] = v[i];
  return k;
}

bool in_vZv(const RatFunc& r) { return r.is_laurent() && (r.is_zero() || r.to_laurent().min_exp() >= 1); }
bool in_Zv(const RatFunc& r) { return r.is_laurent() && (r.is_zero() || r.to_laurent().min_exp() >= 0); }
bool nonneg(const RatFunc& r) { return r.is_laurent() && r.to_laurent().all_nonneg(); }

// Solve M x = b for each column of B with M symmetric.
RFMatrix gram_solve(const RFMatrix& M, const RFMatrix& B, const std::string& step) {
  try {
    return solve_linear(M, B);
  } catch (const SingularMatrix& e) {
    throw AlgorithmBroken(step, e.what());
  }
}

struct Side {
  int n = 0;
  std::vector<ZElement> zp;
  std::vector<Vec> zp_g;  // G * zp[i]
  RFMatrix gram_p;
  RFMatrix a, cp;
  std::vector<Vec> wp;
  std::vector<ZElement> top;
  std::vector<std::vector<RatFunc>> top_gamma;  // Z'-coordinates of W for top elements
  std::vector<std::size_t> top_zp_partner;      // C: index in the other side's zp
  std::vector<std::size_t> top_pos;             // position of top[t] in the assembled z
};

bool z_before(const ZElement& a, const ZElement& b) {
  if (a.d != b.d) return a.d > b.d;
  return a.kappa.str() < b.kappa.str();
}

class Runner {
 public:
  Runner(Engine& eng, const GradedDatum& d, const RunOptions& opt, RunResult& out)
      : eng_(eng), d_(d), opt_(opt), R_(out), N_(d.size()) {}

  void go();

 private:
  Engine& eng_;
  const GradedDatum& d_;
  const RunOptions& opt_;
  RunResult& R_;
  std::size_t N_;
  std::array<Side, 2> w_;
  std::array<std::vector<std::shared_ptr<const RunResult>>, 2> child_runs_;

  void note(const std::string& code, const std::string& msg) { R_.findings.push_back({code, d_.name + ": " + msg}); }
  std::string sgn(int k) const { return "n=" + std::to_string(w_[k].n); }

  void check_gram_bar();
  void compute_z_prime(int k);
  void bar_and_w(int k);
  void rigid_top(int k);
  void assemble(int k);
  void assemble_c_matrix(int k);
  void e_matrix(int k);
  void fourier_match();
  void partial_order();
  void l_table();
  void xi_set();
  void lattice_checks(int k);
};

void Runner::check_gram_bar() {
  const RFMatrix& G = R_.gram;
  for (std::size_t s = 0; s < N_; ++s) {
    const PrimitiveClass& F = d_.class_of(s);
    RatFunc th(F.theta_ratio);
    Int sign = (opt_.conv == SignConvention::PrintedMinusV && (F.c_F % 2 != 0)) ? -1 : 1;
    RatFunc eps(LaurentPoly::monomial(-F.c_F, sign));
    for (std::size_t sp = 0; sp < N_; ++sp) {
      RatFunc lhs = G(s, sp).bar() * th;
      RatFunc rhs = eps * th.bar() * G(d_.sigma[s], sp);
      if (lhs != rhs) {
        note("gram-bar", "Gram-bar identity fails at (" + d_.basis[s].label + "," + d_.basis[sp].label + ")");
        return;
      }
    }
  }
}

void Runner::compute_z_prime(int k) {
  Side& S = w_[k];
  auto it = d_.etas.find(S.n);
  if (it != d_.etas.end()) {
    for (const auto& eta : it->second) {
      auto cr = eng_.run(eta.child);
      child_runs_[k].push_back(cr);
      R_.children.push_back(cr);
      const SideResult& cs = cr->side(S.n);
      for (std::size_t t = 0; t < cs.z.size(); ++t) {
        const ZElement& ce = cs.z[t];
        if (ce.origin == Origin::Induced) continue;
        ZElement z;
        z.vec = from_kv(induction_extend(eta, to_kv(ce.vec)), N_);
        z.origin = Origin::Induced;
        z.eta = static_cast<int>(eta.id);
        z.kappa = {eta.orbit, ce.kappa.ls};
        z.d = eta.d_eta;
        z.child_index = t;
        S.zp.push_back(std::move(z));
      }
    }
  }
  std::stable_sort(S.zp.begin(), S.zp.end(), z_before);
  for (std::size_t i = 0; i < S.zp.size(); ++i)
    for (std::size_t j = i + 1; j < S.zp.size(); ++j)
      if (S.zp[i].vec == S.zp[j].vec)
        throw AlgorithmBroken("disjointness", d_.name + " " + sgn(k) + ": induced elements " +
                                                  S.zp[i].kappa.str() + " and " + S.zp[j].kappa.str() + " collide");
  const std::size_t m = S.zp.size();
  S.zp_g.resize(m);
  for (std::size_t i = 0; i < m; ++i) S.zp_g[i] = gram_apply(R_.gram, S.zp[i].vec);
  S.gram_p = RFMatrix(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) S.gram_p(i, j) = dot(S.zp[i].vec, S.zp_g[j]);
}

void Runner::bar_and_w(int k) {
  Side& S = w_[k];
  const std::size_t m = S.zp.size();
  S.a = RFMatrix(m, m);
  S.cp = RFMatrix::identity(m);
  S.wp.clear();
  if (m == 0) return;
  // rhs(xi2, xi) = (beta(xi) : xi2)
  RFMatrix B(m, m);
  for (std::size_t x = 0; x < m; ++x) {
    Vec bx = bar(S.zp[x].vec);
    for (std::size_t x2 = 0; x2 < m; ++x2) B(x2, x) = dot(bx, S.zp_g[x2]);
  }
  RFMatrix X = gram_solve(S.gram_p, B, "bar-matrix");
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t x1 = 0; x1 < m; ++x1) S.a(x, x1) = X(x1, x);
  std::string where = d_.name + " " + sgn(k);
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t x1 = 0; x1 < m; ++x1) {
      const RatFunc& e = S.a(x, x1);
      if (!e.is_laurent()) throw AlgorithmBroken("bar-matrix not Laurent", where + " at " + S.zp[x].kappa.str());
      if (x == x1 && !e.is_one()) throw AlgorithmBroken("triangularity violated", where + ": diagonal of a is not 1");
      if (x != x1 && !e.is_zero() && S.zp[x1].d >= S.zp[x].d)
        throw AlgorithmBroken("triangularity violated",
                              where + ": a(" + S.zp[x].kappa.str() + "," + S.zp[x1].kappa.str() + ") = " + e.to_string());
    }
  // sum_xi2 bar(a(xi,xi2)) a(xi2,xi1) = delta
  RFMatrix aa = S.a.bar() * S.a;
  if (!(aa == RFMatrix::identity(m))) note("bar-consistency", sgn(k) + ": bar(a)*a is not the identity");

  // c row by row, columns in decreasing d
  std::vector<std::size_t> ord(m);
  std::iota(ord.begin(), ord.end(), 0);
  std::stable_sort(ord.begin(), ord.end(), [&](auto p, auto q) { return S.zp[p].d > S.zp[q].d; });
  for (std::size_t x = 0; x < m; ++x) {
    for (std::size_t x1 : ord) {
      if (S.zp[x1].d >= S.zp[x].d) continue;
      RatFunc r;
      for (std::size_t x2 = 0; x2 < m; ++x2)
        if (x2 != x1 && S.zp[x2].d > S.zp[x1].d && !S.cp(x, x2).is_zero()) r += S.cp(x, x2).bar() * S.a(x2, x1);
      if (!r.is_laurent() || r.bar() != -r)
        throw AlgorithmBroken("no vZ[v] solution", where + " at (" + S.zp[x].kappa.str() + "," + S.zp[x1].kappa.str() + ")");
      LaurentPoly rl = r.to_laurent();
      S.cp(x, x1) = RatFunc(rl.truncate_below(1));
    }
  }
  if (!(S.cp.bar() * S.a == S.cp)) throw AlgorithmBroken("no vZ[v] solution", where + ": c != bar(c)*a");
  S.wp.resize(m);
  for (std::size_t x = 0; x < m; ++x) {
    Vec w(N_);
    for (std::size_t x1 = 0; x1 < m; ++x1) w = axpy(std::move(w), S.cp(x, x1), S.zp[x1].vec);
    S.wp[x] = std::move(w);
  }
}

void Runner::rigid_top(int k) {
  Side& S = w_[k];
  const Side& O = w_[1 - k];
  const std::string open = d_.open_orbit(S.n);
  const int open_dim = d_.find_orbit(S.n, open)->dim;
  const std::size_t m = S.zp.size();
  for (std::size_t j = 0; j < O.zp.size(); ++j) {
    const Vec& X = O.wp[j];
    std::vector<RatFunc> gamma(m);
    Vec Y = X;
    if (m > 0) {
      RFMatrix b(m, 1);
      Vec gx = gram_apply(R_.gram, X);
      for (std::size_t i = 0; i < m; ++i) b(i, 0) = dot(S.zp[i].vec, gx);
      RFMatrix g = gram_solve(S.gram_p, b, "rigid-top");
      for (std::size_t i = 0; i < m; ++i) {
        gamma[i] = g(i, 0);
        Y = axpy(std::move(Y), -gamma[i], S.zp[i].vec);
      }
    }
    if (radical_member(R_.gram, to_kv(Y))) continue;
    ZElement z;
    z.vec = std::move(Y);
    z.origin = Origin::CFromFourier;
    z.kappa = {open, "triv"};
    for (const auto& r : d_.open_labels)
      if (r.partner_orbit == O.zp[j].kappa.orbit && r.partner_ls == O.zp[j].kappa.ls) z.kappa.ls = r.label;
    z.d = open_dim;
    S.top.push_back(std::move(z));
    S.top_gamma.push_back(std::move(gamma));
    S.top_zp_partner.push_back(j);
  }
  for (const auto& c : d_.leaf.cprime) {
    ZElement z;
    z.vec = Vec(N_);
    z.vec[c.s_F] = RatFunc(c.r_F).inverse();
    z.origin = Origin::CPrime;
    z.kappa = {open, c.kappa_label};
    z.d = open_dim;
    S.top.push_back(std::move(z));
    S.top_gamma.emplace_back(m);
    S.top_zp_partner.push_back(0);
  }
  // h_n injective mod the radical: the C_n elements are independent of each other and of Z'
  std::vector<std::size_t> cs;
  for (std::size_t t = 0; t < S.top.size(); ++t)
    if (S.top[t].origin == Origin::CFromFourier) cs.push_back(t);
  for (std::size_t a = 0; a < cs.size(); ++a)
    for (std::size_t b = a + 1; b < cs.size(); ++b) {
      Vec diff = S.top[cs[a]].vec;
      diff = axpy(std::move(diff), RatFunc(-1), S.top[cs[b]].vec);
      if (radical_member(R_.gram, to_kv(diff)))
        throw AlgorithmBroken("h_n not injective", d_.name + " " + sgn(k) + ": two elements of J have the same image");
    }
}

void Runner::assemble(int k) {
  Side& S = w_[k];
  SideResult& out = R_.sides[k];
  out.n = S.n;
  struct Item {
    ZElement z;
    int src;  // >= 0: zp index; < 0: -(top index) - 1
  };
  std::vector<Item> all;
  for (std::size_t i = 0; i < S.zp.size(); ++i) all.push_back({S.zp[i], static_cast<int>(i)});
  for (std::size_t t = 0; t < S.top.size(); ++t) all.push_back({S.top[t], -static_cast<int>(t) - 1});
  std::stable_sort(all.begin(), all.end(), [](const Item& a, const Item& b) { return z_before(a.z, b.z); });
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      if (all[i].z.vec == all[j].z.vec)
        throw AlgorithmBroken("disjointness", d_.name + " " + sgn(k) + ": " + all[i].z.kappa.str() + " and " +
                                                  all[j].z.kappa.str() + " coincide");
      if (all[i].z.kappa.str() == all[j].z.kappa.str())
        note("labels", sgn(k) + ": label " + all[i].z.kappa.str() + " is not unique");
    }
  out.z.clear();
  out.zprime.clear();
  S.top_pos.assign(S.top.size(), 0);
  for (std::size_t i = 0; i < all.size(); ++i) {
    out.z.push_back(all[i].z);
    if (all[i].src >= 0) {
      out.zprime.push_back(i);
    } else {
      std::size_t t = static_cast<std::size_t>(-all[i].src - 1);
      S.top_pos[t] = i;
      out.z[i].partner = S.top_zp_partner[t];  // index in the other side's zp for now
    }
  }
  // a-matrix in the order of zprime (already sorted the same way)
  out.a_matrix = S.a;
  const std::size_t m = out.z.size();
  out.gram_z = RFMatrix(m, m);
  std::vector<Vec> g(m);
  for (std::size_t i = 0; i < m; ++i) g[i] = gram_apply(R_.gram, out.z[i].vec);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) out.gram_z(i, j) = dot(out.z[i].vec, g[j]);
  std::size_t rk = rank_of(out.gram_z), rg = rank_of(R_.gram);
  if (rk != m) throw AlgorithmBroken("disjointness", d_.name + " " + sgn(k) + ": Z is dependent modulo the radical");
  if (m != rg)
    throw AlgorithmBroken("basis", d_.name + " " + sgn(k) + ": |Z| = " + std::to_string(m) +
                                       " but the Gram rank is " + std::to_string(rg));
}

void Runner::assemble_c_matrix(int k) {
  Side& S = w_[k];
  SideResult& out = R_.sides[k];
  const std::size_t m = out.z.size();
  out.c_matrix = RFMatrix(m, m);
  out.w_vectors.assign(m, Vec(N_));
  const std::vector<std::size_t>& pos_zp = out.zprime;

  for (std::size_t i = 0; i < S.zp.size(); ++i) {
    for (std::size_t j = 0; j < S.zp.size(); ++j) out.c_matrix(pos_zp[i], pos_zp[j]) = S.cp(i, j);
    out.w_vectors[pos_zp[i]] = S.wp[i];
  }
  for (std::size_t t = 0; t < S.top.size(); ++t) {
    std::size_t p = S.top_pos[t];
    out.c_matrix(p, p) = RatFunc(1);
    if (S.top[t].origin == Origin::CFromFourier) {
      for (std::size_t j = 0; j < S.zp.size(); ++j) out.c_matrix(p, pos_zp[j]) = S.top_gamma[t][j];
      out.w_vectors[p] = w_[1 - k].wp[S.top_zp_partner[t]];
    } else {
      out.w_vectors[p] = S.top[t].vec;
    }
  }
  std::string where = sgn(k);
  for (std::size_t i = 0; i < m; ++i) {
    Vec res = out.w_vectors[i];
    for (std::size_t j = 0; j < m; ++j) {
      const RatFunc& c = out.c_matrix(i, j);
      if (!c.is_laurent())
        throw AlgorithmBroken("c not Laurent", d_.name + " " + where + " at (" + out.z[i].kappa.str() + "," +
                                                   out.z[j].kappa.str() + ")");
      if (i != j && !in_vZv(c))
        note("c off-diagonal", where + ": c(" + out.z[i].kappa.str() + "," + out.z[j].kappa.str() +
                                   ") = " + c.to_string() + " not in vZ[v]");
      if (!nonneg(c)) note("nonnegativity", where + ": c entry " + c.to_string() + " has a negative coefficient");
      res = axpy(std::move(res), -c, out.z[j].vec);
    }
    if (!radical_member(R_.gram, to_kv(res)))
      note("w-expansion", where + ": W of " + out.z[i].kappa.str() + " differs from its c-row modulo the radical");
  }
}

void Runner::e_matrix(int k) {
  SideResult& out = R_.sides[k];
  const std::size_t m = out.z.size();
  RFMatrix rhs(m, N_);
  for (std::size_t j = 0; j < m; ++j) {
    Vec g = gram_apply(R_.gram, out.z[j].vec);
    for (std::size_t s = 0; s < N_; ++s) rhs(j, s) = g[s];
  }
  RFMatrix X = gram_solve(out.gram_z, rhs, "e-matrix");
  out.e_matrix = RFMatrix(N_, m);
  out.weight_dims.assign(N_, std::vector<Int>(m));
  for (std::size_t s = 0; s < N_; ++s) {
    Vec res(N_);
    res[s] = RatFunc(1);
    for (std::size_t j = 0; j < m; ++j) {
      const RatFunc& e = X(j, s);
      if (!e.is_laurent())
        throw AlgorithmBroken("e not Laurent", d_.name + " " + sgn(k) + " at (" + d_.basis[s].label + "," +
                                                   out.z[j].kappa.str() + ")");
      out.e_matrix(s, j) = e;
      out.weight_dims[s][j] = eval_at_one(e.to_laurent());
      if (!nonneg(e)) note("nonnegativity", sgn(k) + ": e entry " + e.to_string() + " has a negative coefficient");
      res = axpy(std::move(res), -e, out.z[j].vec);
    }
    if (!radical_member(R_.gram, to_kv(res)))
      note("e-residual", sgn(k) + ": residual of " + d_.basis[s].label + " is not in the radical");
  }
  // Gram on Z and on W: delta + vZ[[v]]
  for (std::size_t i = 0; i < m; ++i) {
    Vec gw = gram_apply(R_.gram, out.w_vectors[i]);
    for (std::size_t j = 0; j < m; ++j) {
      for (int basis = 0; basis < 2; ++basis) {
        RatFunc p = basis == 0 ? out.gram_z(i, j) : dot(out.w_vectors[j], gw);
        const char* nm = basis == 0 ? "Z" : "W";
        std::vector<RatFunc> forms{p};
        if (d_.theta_G) forms.push_back(p / RatFunc(*d_.theta_G));
        for (const RatFunc& f : forms) {
          try {
            LaurentPoly ser = series_prefix(f, 10);
            if ((!ser.is_zero() && ser.min_exp() < 0) || ser.coeff(0) != Int(i == j ? 1 : 0))
              note("gram-expansion", sgn(k) + ": " + nm + "-Gram entry (" + out.z[i].kappa.str() + "," +
                                         out.z[j].kappa.str() + ") = " + f.to_string() + " not in delta + vZ[[v]]");
          } catch (const NotExpandable&) {
            note("gram-expansion", sgn(k) + ": " + nm + "-Gram entry " + f.to_string() + " has no power series");
          }
        }
      }
    }
  }
}

void Runner::fourier_match() {
  for (int k = 0; k < 2; ++k) {
    SideResult& A = R_.sides[k];
    const SideResult& B = R_.sides[1 - k];
    A.fourier.assign(A.z.size(), 0);
    std::vector<Vec> gb(B.z.size());
    for (std::size_t j = 0; j < B.z.size(); ++j) gb[j] = gram_apply(R_.gram, B.w_vectors[j]);
    for (std::size_t i = 0; i < A.z.size(); ++i) {
      Vec ga = gram_apply(R_.gram, A.w_vectors[i]);
      std::vector<std::size_t> hits;
      for (std::size_t j = 0; j < B.z.size(); ++j) {
        bool eq = true;
        for (std::size_t s = 0; s < N_ && eq; ++s) eq = ga[s] == gb[j][s];
        if (eq) hits.push_back(j);
      }
      if (hits.size() != 1)
        throw AlgorithmBroken(hits.empty() ? "no Fourier partner" : "ambiguous Fourier partner",
                              d_.name + " " + sgn(k) + " for " + A.z[i].kappa.str());
      A.fourier[i] = hits[0];
    }
  }
  for (int k = 0; k < 2; ++k) {
    const SideResult& A = R_.sides[k];
    const SideResult& B = R_.sides[1 - k];
    for (std::size_t i = 0; i < A.z.size(); ++i) {
      std::size_t j = A.fourier[i];
      if (B.fourier[j] != i) note("fourier-involution", sgn(k) + ": double match is not the identity at " + A.z[i].kappa.str());
      const ZElement& u = A.z[i];
      if (u.origin == Origin::CFromFourier && B.zprime.size() > 0) {
        std::size_t want = B.zprime[u.partner];
        if (j != want) note("h_n", sgn(k) + ": Fourier partner of " + u.kappa.str() + " is not its h_n preimage");
      }
      if (u.origin == Origin::CPrime) {
        const ZElement& v = B.z[j];
        if (v.origin != Origin::CPrime || v.vec != u.vec)
          note("fourier-cprime", sgn(k) + ": C' element " + u.kappa.str() + " is not matched to itself");
      }
    }
  }
}

void Runner::partial_order() {
  // base relation: cases (i)-(iii); case (iv) needs the other side's base relation
  std::array<std::vector<std::vector<int>>, 2> base;  // 1 true, 0 false, -1 undecided
  for (int k = 0; k < 2; ++k) {
    const SideResult& S = R_.sides[k];
    const std::size_t m = S.z.size();
    auto& b = base[k];
    b.assign(m, std::vector<int>(m, 0));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        const ZElement &x = S.z[i], &y = S.z[j];
        if (i == j) b[i][j] = 1;
        else if (x.origin == Origin::CPrime || y.origin == Origin::CPrime) b[i][j] = 0;
        else if (x.kappa.orbit != y.kappa.orbit) b[i][j] = d_.closure_lt(S.n, x.kappa.orbit, y.kappa.orbit);
        else if (x.origin == Origin::Induced && y.origin == Origin::Induced) {
          if (x.eta != y.eta) {
            note("order", sgn(k) + ": same orbit but different eta for " + x.kappa.str());
            continue;
          }
          const auto& cr = child_runs_[k][static_cast<std::size_t>(x.eta)];
          b[i][j] = cr->side(S.n).leq[x.child_index][y.child_index];
        } else if (x.origin == Origin::CFromFourier && y.origin == Origin::CFromFourier) {
          b[i][j] = -1;
        } else {
          note("order", sgn(k) + ": mixed origins on one orbit at " + x.kappa.str());
        }
      }
  }
  for (int k = 0; k < 2; ++k) {
    SideResult& S = R_.sides[k];
    const SideResult& O = R_.sides[1 - k];
    const std::size_t m = S.z.size();
    S.leq.assign(m, std::vector<bool>(m, false));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        int v = base[k][i][j];
        if (v < 0) {
          std::size_t pi = S.fourier[i], pj = S.fourier[j];
          if (O.z[pi].origin != Origin::Induced || O.z[pj].origin != Origin::Induced)
            note("order", sgn(k) + ": Fourier partner of " + S.z[i].kappa.str() + " is not induced");
          v = base[1 - k][pi][pj] > 0;
        }
        S.leq[i][j] = v > 0;
      }
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        if (i != j && S.leq[i][j] && S.leq[j][i]) note("order", sgn(k) + ": relation is not antisymmetric");
        for (std::size_t l = 0; l < m; ++l)
          if (S.leq[i][j] && S.leq[j][l] && !S.leq[i][l]) note("order", sgn(k) + ": relation is not transitive");
      }
    // c is triangular for the order
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        if (i != j && !S.c_matrix(i, j).is_zero() && !S.leq[j][i])
          note("c-triangularity", sgn(k) + ": c(" + S.z[i].kappa.str() + "," + S.z[j].kappa.str() +
                                      ") nonzero outside the order");
  }
}

void Runner::l_table() {
  std::array<std::vector<bool>, 2> done;
  for (int k = 0; k < 2; ++k) {
    SideResult& S = R_.sides[k];
    S.l_table.assign(S.z.size(), LRow{});
    done[k].assign(S.z.size(), false);
    for (std::size_t i = 0; i < S.z.size(); ++i) {
      const ZElement& z = S.z[i];
      LRow& row = S.l_table[i];
      if (z.origin == Origin::CPrime) {
        for (const auto& c : d_.leaf.cprime)
          if (c.kappa_label == z.kappa.ls) {
            row.s_kappa = c.s_F;
            row.r_kappa = c.r_F;
          }
        done[k][i] = true;
      } else if (z.origin == Origin::Induced) {
        const auto& eta = d_.etas.at(S.n)[static_cast<std::size_t>(z.eta)];
        const LRow& cr = child_runs_[k][static_cast<std::size_t>(z.eta)]->side(S.n).l_table[z.child_index];
        for (auto [c, p] : eta.induction)
          if (c == cr.s_kappa) row.s_kappa = p;
        row.r_kappa = cr.r_kappa;
        done[k][i] = true;
      }
    }
  }
  for (int k = 0; k < 2; ++k) {
    SideResult& S = R_.sides[k];
    const SideResult& O = R_.sides[1 - k];
    for (std::size_t i = 0; i < S.z.size(); ++i) {
      if (done[k][i]) continue;
      std::size_t p = S.fourier[i];
      if (!done[1 - k][p]) {
        note("l-table", sgn(k) + ": no L-data for " + S.z[i].kappa.str());
        continue;
      }
      S.l_table[i].s_kappa = O.l_table[p].s_kappa;
      S.l_table[i].r_kappa = O.l_table[p].r_kappa;
    }
    const std::size_t m = S.z.size();
    RFMatrix L(m, m);
    std::set<std::size_t> used;
    for (std::size_t i = 0; i < m; ++i) {
      LRow& row = S.l_table[i];
      RatFunc rinv = RatFunc(row.r_kappa).inverse();
      row.L_z.assign(m, RatFunc());
      for (std::size_t j = 0; j < m; ++j) {
        row.L_z[j] = rinv * S.e_matrix(row.s_kappa, j);
        L(i, j) = row.L_z[j];
        if (!row.L_z[j].is_laurent()) note("l-table", sgn(k) + ": L of " + S.z[i].kappa.str() + " is not integral");
      }
      if (!row.L_z[i].is_one()) note("l-triangularity", sgn(k) + ": L of " + S.z[i].kappa.str() + " has leading coefficient " + row.L_z[i].to_string());
      for (std::size_t j = 0; j < m; ++j)
        if (j != i && !row.L_z[j].is_zero() && !(S.leq[j][i]))
          note("l-triangularity", sgn(k) + ": L of " + S.z[i].kappa.str() + " involves " + S.z[j].kappa.str());
      if (!used.insert(row.s_kappa).second) note("s-injectivity", sgn(k) + ": s is not injective at " + S.z[i].kappa.str());
    }
    // W-basis coordinates: L_w = L_z * c^{-1}
    RFMatrix Lw = solve_linear(S.c_matrix.transpose(), L.transpose()).transpose();
    for (std::size_t i = 0; i < m; ++i) {
      S.l_table[i].L_w.assign(m, RatFunc());
      for (std::size_t j = 0; j < m; ++j) S.l_table[i].L_w[j] = Lw(i, j);
    }
  }
}

void Runner::xi_set() {
  for (int k = 0; k < 2; ++k) {
    SideResult& S = R_.sides[k];
    const SideResult& O = R_.sides[1 - k];
    std::string open = d_.open_orbit(S.n), open_o = d_.open_orbit(O.n);
    S.xi.clear();
    for (std::size_t i = 0; i < S.z.size(); ++i)
      if (S.z[i].kappa.orbit != open && O.z[S.fourier[i]].kappa.orbit == open_o) S.xi.push_back(i);
  }
}

// The Z[v]-lattice spanned by Z_n contains the W-elements and the generating set
// Z'_n, Z'_{-n}, C', and Z_n is recovered from them with Z[v] coefficients.
void Runner::lattice_checks(int k) {
  const SideResult& S = R_.sides[k];
  const SideResult& O = R_.sides[1 - k];
  const std::size_t m = S.z.size();
  if (m == 0) return;
  // c^{-1} over Z[v]
  RFMatrix ci = solve_linear(S.c_matrix, RFMatrix::identity(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (!in_Zv(ci(i, j))) {
        note("lattice", sgn(k) + ": inverse c-matrix leaves Z[v]");
        i = m;
        break;
      }
  // coordinates over Z_n of a vector (mod the radical)
  auto coords = [&](const Vec& x) {
    RFMatrix b(m, 1);
    Vec g = gram_apply(R_.gram, x);
    for (std::size_t i = 0; i < m; ++i) b(i, 0) = dot(S.z[i].vec, g);
    return solve_linear(S.gram_z, b);
  };
  // Z'_{-n} lies in M
  for (std::size_t p : O.zprime) {
    RFMatrix c = coords(O.z[p].vec);
    for (std::size_t i = 0; i < m; ++i)
      if (!in_Zv(c(i, 0))) {
        note("lattice", sgn(k) + ": " + O.z[p].kappa.str() + " at -n is not in the Z[v]-span of Z_n");
        break;
      }
  }
  // u - partner(u) in vM, in Z coordinates and in W coordinates
  for (std::size_t i = 0; i < m; ++i) {
    Vec diff = S.w_vectors[i];
    diff = axpy(std::move(diff), RatFunc(-1), O.w_vectors[S.fourier[i]]);
    Vec d2 = S.z[i].vec;
    d2 = axpy(std::move(d2), RatFunc(-1), O.z[S.fourier[i]].vec);
    RFMatrix c = coords(d2);
    bool ok = radical_member(R_.gram, to_kv(diff));
    for (std::size_t j = 0; j < m && ok; ++j) ok = in_vZv(c(j, 0));
    if (!ok) note("lattice", sgn(k) + ": " + S.z[i].kappa.str() + " minus its Fourier partner is not in vM");
  }
}

void Runner::go() {
  R_.gram = gram_matrix(d_, opt_.conv, opt_.threads);
  for (auto& f : validate_datum(d_)) R_.findings.push_back(f);
  check_gram_bar();
  w_[0].n = d_.n;
  w_[1].n = -d_.n;
  for (int k = 0; k < 2; ++k) {
    compute_z_prime(k);
    bar_and_w(k);
  }
  if (d_.leaf.rigid)
    for (int k = 0; k < 2; ++k) rigid_top(k);
  for (int k = 0; k < 2; ++k) assemble(k);
  for (int k = 0; k < 2; ++k) {
    assemble_c_matrix(k);
    e_matrix(k);
  }
  fourier_match();
  partial_order();
  l_table();
  xi_set();
  for (int k = 0; k < 2; ++k) lattice_checks(k);
  // partner as a position in the other side's z list
  for (int k = 0; k < 2; ++k)
    for (auto& z : R_.sides[k].z)
      if (z.origin == Origin::CFromFourier) z.partner = R_.sides[1 - k].zprime[z.partner];
}

}  // namespace

std::shared_ptr<const RunResult> Engine::run(const std::shared_ptr<const GradedDatum>& d) {
  std::string key = d->name + (opt_.conv == SignConvention::PlusV ? "#plusv" : "#printed");
  {
    std::lock_guard<std::mutex> lk(mu_);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  }
  auto r = std::make_shared<RunResult>();
  r->datum = d;
  r->conv = opt_.conv;
  Runner(*this, *d, opt_, *r).go();
  std::lock_guard<std::mutex> lk(mu_);
  auto [it, fresh] = memo_.emplace(key, r);
  return it->second;
}

std::shared_ptr<const RunResult> run(const GradedDatum& d, RunOptions opt) {
  Engine e(opt);
  return e.run(std::make_shared<const GradedDatum>(d));
}

std::vector<Finding> all_findings(const RunResult& r) {
  std::vector<Finding> out;
  std::set<std::pair<std::string, std::string>> seen;
  std::set<const RunResult*> visited;
  std::vector<const RunResult*> todo{&r};
  while (!todo.empty()) {
    const RunResult* x = todo.back();
    todo.pop_back();
    if (!visited.insert(x).second) continue;
    for (const auto& f : x->findings)
      if (seen.insert({f.code, f.message}).second) out.push_back(f);
    for (const auto& c : x->children) todo.push_back(c.get());
  }
  return out;
}

}  // namespace gic
