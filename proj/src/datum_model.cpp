#include "gic/datum_model.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <thread>

#include "gic/errors.hpp"

namespace gic {

const PrimitiveClass& GradedDatum::class_of(std::size_t b) const {
  for (const auto& c : classes)
    if (std::find(c.members.begin(), c.members.end(), b) != c.members.end()) return c;
  throw DatumInvalid("basis element " + std::to_string(b) + " lies in no primitive class");
}

const OrbitLabel* GradedDatum::find_orbit(int k, const std::string& nm) const {
  auto it = orbits.find(k);
  if (it == orbits.end()) return nullptr;
  for (const auto& o : it->second)
    if (o.name == nm) return &o;
  return nullptr;
}

std::string GradedDatum::open_orbit(int k) const {
  auto it = orbits.find(k);
  if (it == orbits.end() || it->second.empty()) throw DatumInvalid("no orbits at degree " + std::to_string(k));
  const OrbitLabel* best = &it->second.front();
  for (const auto& o : it->second)
    if (o.dim > best->dim) best = &o;
  return best->name;
}

bool GradedDatum::closure_lt(int k, const std::string& a, const std::string& b) const {
  if (a == b) return false;
  auto it = closure.find(k);
  if (it == closure.end()) return false;
  // transitive search upward from a
  std::set<std::string> seen{a};
  std::vector<std::string> todo{a};
  while (!todo.empty()) {
    std::string x = todo.back();
    todo.pop_back();
    for (const auto& [lo, hi] : it->second)
      if (lo == x && seen.insert(hi).second) {
        if (hi == b) return true;
        todo.push_back(hi);
      }
  }
  return false;
}

std::map<std::pair<std::size_t, std::size_t>, std::vector<int>> pairing_table(const GradedDatum& d) {
  std::map<std::pair<std::size_t, std::size_t>, std::vector<int>> t;
  for (const auto& o : d.pairing) t[{o.s, o.s_prime}].push_back(o.tau);
  for (auto& [k, v] : t) std::sort(v.begin(), v.end());
  return t;
}

RFMatrix gram_matrix(const GradedDatum& d, SignConvention conv, unsigned threads) {
  std::size_t N = d.size();
  std::vector<std::vector<const PairingOrbit*>> by_row(N);
  for (const auto& o : d.pairing) {
    if (o.s >= N || o.s_prime >= N) throw DatumInvalid("pairing orbit refers to unknown basis element");
    by_row[o.s].push_back(&o);
  }
  std::vector<std::size_t> cls(N);
  for (std::size_t b = 0; b < N; ++b) cls[b] = d.class_of(b).id;
  auto class_by_id = [&](std::size_t id) -> const PrimitiveClass& {
    for (const auto& c : d.classes)
      if (c.id == id) return c;
    throw DatumInvalid("unknown primitive class id");
  };

  RFMatrix G(N, N);
  auto fill_row = [&](std::size_t s) {
    std::map<std::size_t, LaurentPoly> acc;
    for (const PairingOrbit* o : by_row[s]) {
      Int sign = (conv == SignConvention::PrintedMinusV && (o->tau % 2 != 0)) ? -1 : 1;
      acc[o->s_prime] += LaurentPoly::monomial(o->tau, sign);
    }
    const PrimitiveClass& F = class_by_id(cls[s]);
    for (auto& [sp, sum] : acc) G(s, sp) = RatFunc(F.theta_ratio * sum);
  };
  if (threads <= 1 || N < 8) {
    for (std::size_t s = 0; s < N; ++s) fill_row(s);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t s = t; s < N; s += threads) fill_row(s);
      });
    for (auto& th : pool) th.join();
  }

  for (std::size_t s = 0; s < N; ++s)
    for (std::size_t sp = 0; sp < N; ++sp) {
      if (G(s, sp) != G(sp, s))
        throw DatumInvalid("Gram matrix not symmetric at (" + d.basis[s].label + "," + d.basis[sp].label + ")");
      if (!G(s, sp).is_zero() && class_by_id(cls[s]).dual != cls[sp])
        throw DatumInvalid("Gram block between non-dual primitive classes is nonzero");
    }
  return G;
}

KVector induction_extend(const EtaClass& eta, const KVector& x) {
  KVector y;
  for (const auto& [i, c] : x) {
    auto it = std::find_if(eta.induction.begin(), eta.induction.end(),
                           [&](const auto& p) { return p.first == i; });
    if (it == eta.induction.end())
      throw std::out_of_range("induction map has no image for child basis " + std::to_string(i));
    if (!c.is_zero()) y[it->second] += c;
  }
  for (auto it = y.begin(); it != y.end();) it = it->second.is_zero() ? y.erase(it) : std::next(it);
  return y;
}

bool radical_member(const RFMatrix& gram, const KVector& x) {
  for (std::size_t r = 0; r < gram.rows(); ++r) {
    RatFunc s;
    for (const auto& [i, c] : x) s += gram(r, i) * c;
    if (!s.is_zero()) return false;
  }
  return true;
}

bool radical_member(const GradedDatum& d, const KVector& x, SignConvention conv) {
  return radical_member(gram_matrix(d, conv), x);
}

static void validate_into(const GradedDatum& d, const std::string& prefix, std::vector<Finding>& out,
                          std::set<const GradedDatum*>& visited) {
  auto add = [&](const std::string& code, const std::string& msg) {
    out.push_back({code, prefix + msg});
  };
  const std::size_t N = d.size();
  for (std::size_t i = 0; i < N; ++i)
    if (d.basis[i].index != i) add("basis index", "basis indices are not 0..N-1 in order");
  if (d.n == 0) add("delta", "delta contains 0");

  // primitive classes partition the basis; duality is an involution
  std::vector<int> seen(N, 0);
  std::map<std::size_t, const PrimitiveClass*> byid;
  for (const auto& c : d.classes) {
    byid[c.id] = &c;
    for (auto m : c.members) {
      if (m >= N) add("class member", "primitive class member out of range");
      else ++seen[m];
    }
    if (c.theta_ratio.is_zero()) add("theta", "theta ratio is zero");
  }
  for (std::size_t i = 0; i < N; ++i)
    if (seen[i] != 1) add("class partition", "primitive classes do not partition the basis");
  for (const auto& c : d.classes) {
    auto it = byid.find(c.dual);
    if (it == byid.end() || it->second->dual != c.id) add("dual", "class duality is not an involution");
  }
  bool classes_ok = std::all_of(seen.begin(), seen.end(), [](int x) { return x == 1; });

  // sigma
  bool sigma_ok = d.sigma.size() == N;
  if (!sigma_ok) add("sigma", "sigma has wrong length");
  for (std::size_t i = 0; sigma_ok && i < N; ++i)
    if (d.sigma[i] >= N || d.sigma[d.sigma[i]] != i) {
      add("sigma", "sigma not involutive");
      sigma_ok = false;
    }
  if (sigma_ok && classes_ok)
    for (std::size_t i = 0; i < N; ++i)
      if (d.class_of(i).id != d.class_of(d.sigma[i]).id) add("sigma", "sigma does not preserve primitive classes");

  // pairing orbits live over dual classes; tau + tau~ = c_F as a multiset identity
  bool pairing_ok = classes_ok;
  for (const auto& o : d.pairing) {
    if (o.s >= N || o.s_prime >= N) {
      add("pairing", "pairing orbit refers to unknown basis element");
      pairing_ok = false;
    } else if (classes_ok && d.class_of(o.s).dual != d.class_of(o.s_prime).id) {
      add("pairing", "pairing orbit between non-dual classes");
    }
  }
  if (pairing_ok && sigma_ok) {
    auto table = pairing_table(d);
    bool mismatch = false;
    for (std::size_t s = 0; s < N && !mismatch; ++s)
      for (std::size_t sp = 0; sp < N && !mismatch; ++sp) {
        auto a = table.count({s, sp}) ? table[{s, sp}] : std::vector<int>{};
        auto b = table.count({d.sigma[s], sp}) ? table[{d.sigma[s], sp}] : std::vector<int>{};
        int cF = d.class_of(s).c_F;
        for (auto& t : b) t = cF - t;
        std::sort(b.begin(), b.end());
        if (a != b) {
          add("c_F", "c_F mismatch for (" + d.basis[s].label + "," + d.basis[sp].label + ")");
          mismatch = true;
        }
      }
    try {
      gram_matrix(d);
    } catch (const DatumInvalid& e) {
      add("gram", e.what());
    }
  }

  // orbits, closure, etas
  for (int k : d.delta()) {
    auto it = d.orbits.find(k);
    if (it == d.orbits.end() || it->second.empty()) {
      add("orbits", "no orbits listed at degree " + std::to_string(k));
      continue;
    }
    std::set<std::string> names;
    int maxdim = -1, nmax = 0;
    for (const auto& o : it->second) {
      if (!names.insert(o.name).second) add("orbits", "duplicate orbit name " + o.name);
      if (o.dim > maxdim) {
        maxdim = o.dim;
        nmax = 1;
      } else if (o.dim == maxdim) {
        ++nmax;
      }
    }
    if (nmax != 1) add("orbits", "no unique open orbit at degree " + std::to_string(k));
    if (auto c = d.closure.find(k); c != d.closure.end())
      for (const auto& [lo, hi] : c->second) {
        if (!names.count(lo) || !names.count(hi)) add("closure", "closure refers to unknown orbit");
        else if (d.closure_lt(k, hi, lo)) add("closure", "closure relation has a cycle");
      }
    if (auto e = d.etas.find(k); e != d.etas.end())
      for (const auto& eta : e->second) {
        std::string tag = "eta " + std::to_string(eta.id) + " at " + std::to_string(k) + ": ";
        const OrbitLabel* o = d.find_orbit(k, eta.orbit);
        if (!o) add("eta orbit", tag + "unknown orbit " + eta.orbit);
        else if (o->dim != eta.d_eta) add("d_eta", tag + "d_eta differs from orbit dimension");
        if (!eta.child) {
          add("eta child", tag + "missing child datum");
          continue;
        }
        if (eta.child->n != d.n && eta.child->n != -d.n) add("child delta", tag + "child delta differs");
        std::set<std::size_t> srcs, imgs;
        for (auto [c, p] : eta.induction) {
          if (c >= eta.child->size() || p >= N) add("induction", tag + "induction index out of range");
          srcs.insert(c);
          imgs.insert(p);
        }
        if (srcs.size() != eta.child->size() || srcs.size() != eta.induction.size())
          add("induction", tag + "induction is not a map on the child basis");
        if (imgs.size() != eta.induction.size()) add("induction", tag + "induction map not injective");
        if (visited.insert(eta.child.get()).second)
          validate_into(*eta.child, prefix + "child " + eta.child->name + ": ", out, visited);
      }
  }

  // leaf
  if (!d.leaf.rigid && !d.leaf.cprime.empty()) add("leaf", "C' data on a non-rigid datum");
  std::set<std::size_t> sfs;
  for (const auto& c : d.leaf.cprime) {
    if (c.s_F >= N) add("leaf", "C' entry refers to unknown basis element");
    if (!sfs.insert(c.s_F).second) add("leaf", "C' entries share a basis element");
    if (c.r_F.is_zero()) add("leaf", "r_F is zero");
  }
  if (d.theta_G && d.theta_G->is_zero()) add("theta", "theta_G is zero");
}

std::vector<Finding> validate_datum(const GradedDatum& d) {
  std::vector<Finding> out;
  std::set<const GradedDatum*> visited;
  validate_into(d, "", out, visited);
  return out;
}

}  // namespace gic
