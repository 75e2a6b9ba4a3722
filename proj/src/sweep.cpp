#include "gic/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <functional>
#include <thread>

#include "gic/errors.hpp"
#include "gic/oracles.hpp"

namespace gic {

namespace {

// weight multisets of the given size inside [0, 4] containing 0
void weight_sets(int size, std::vector<std::map<int, int>>& out) {
  std::vector<int> cur{0};
  std::function<void(int)> rec = [&](int from) {
    if (static_cast<int>(cur.size()) == size) {
      std::map<int, int> m;
      for (int w : cur) ++m[w];
      out.push_back(m);
      return;
    }
    for (int w = from; w <= 4; ++w) {
      cur.push_back(w);
      rec(w);
      cur.pop_back();
    }
  };
  rec(0);
}

std::vector<std::vector<int>> partitions(int total, int maxpart) {
  if (total == 0) return {{}};
  std::vector<std::vector<int>> out;
  for (int p = std::min(total, maxpart); p >= 1; --p)
    for (auto rest : partitions(total - p, p)) {
      rest.insert(rest.begin(), p);
      out.push_back(rest);
    }
  return out;
}

int total_dim(const std::vector<GLFactor>& f) {
  int t = 0;
  for (const auto& x : f) t += x.dim();
  return t;
}

}  // namespace

std::vector<SweepItem> enumerate_type_a(int max_total_dim, const std::vector<int>& ns) {
  std::vector<SweepItem> out;
  std::map<int, std::vector<GLFactor>> by_dim;
  for (int k = 1; k <= max_total_dim; ++k) {
    std::vector<std::map<int, int>> sets;
    weight_sets(k, sets);
    for (auto& s : sets) by_dim[k].push_back(GLFactor{s});
  }
  for (int total = 1; total <= max_total_dim; ++total)
    for (const auto& parts : partitions(total, total)) {
      // nondecreasing choice of factor per part, parts are nonincreasing in size
      std::vector<std::vector<GLFactor>> combos{{}};
      for (std::size_t i = 0; i < parts.size(); ++i) {
        std::vector<std::vector<GLFactor>> next;
        const auto& opts = by_dim[parts[i]];
        for (const auto& c : combos)
          for (std::size_t o = 0; o < opts.size(); ++o) {
            if (i > 0 && parts[i] == parts[i - 1] && opts[o].sorted() < c.back().sorted()) continue;
            auto cc = c;
            cc.push_back(opts[o]);
            next.push_back(std::move(cc));
          }
        combos = std::move(next);
      }
      for (const auto& c : combos)
        for (int n : ns) out.push_back({c, n, gl_spec_name(c, n)});
    }
  return out;
}

std::vector<Finding> type_a_invariants(const RunResult& r) {
  std::vector<Finding> out = all_findings(r);
  const GradedDatum& d = *r.datum;
  for (const auto& S : r.sides) {
    // Xi: the trivial system on the zero orbit when L_nG != 0, else nothing
    std::vector<std::string> want;
    if (dim_graded(d.type_a->factors, S.n) > 0) {
      for (const auto& z : S.z)
        if (z.d == 0) want.push_back(z.kappa.str());
    }
    std::vector<std::string> got;
    for (auto i : S.xi) got.push_back(S.z[i].kappa.str());
    if (got != want) {
      std::string g;
      for (const auto& x : got) g += " " + x;
      out.push_back({"xi", d.name + " n=" + std::to_string(S.n) + ": Xi is {" + g + " }"});
    }
    // |Z| equals the number of orbits (all local systems trivial)
    if (S.z.size() != d.orbits.at(S.n).size())
      out.push_back({"labels", d.name + ": |Z| differs from the number of orbits"});
  }
  for (const auto& f : check_orbit_dimensions(r)) out.push_back(f);
  return out;
}

std::string default_sp4_path() {
  if (const char* p = std::getenv("GIC_DATA_DIR")) return std::string(p) + "/sp4.json";
#ifdef GIC_DATA_DIR
  return std::string(GIC_DATA_DIR) + "/sp4.json";
#else
  return "data/sp4.json";
#endif
}

SelftestReport selftest(const SelftestOptions& opt, std::ostream* log) {
  SelftestReport rep;
  auto say = [&](const std::string& s) {
    if (log) *log << s << "\n";
  };

  // fixtures
  {
    Engine eng;
    int n;
    auto a1 = eng.run(make_type_a_shared(parse_gl_spec("glq:0,1;n=1", &n), 1));
    const auto& s = a1->side(1);
    if (s.c_matrix.rows() != 2 || s.c_matrix(0, 1) != RatFunc(LaurentPoly::v()))
      rep.findings.push_back({"fixture", "a1: f-matrix is not [[1,v],[0,1]]"});
    auto a001 = eng.run(make_type_a_shared(parse_gl_spec("glq:0,0,1;n=1", &n), 1));
    if (a001->side(1).c_matrix(0, 1) != RatFunc(LaurentPoly::monomial(2)))
      rep.findings.push_back({"fixture", "a001: f-matrix is not [[1,v^2],[0,1]]"});
    try {
      auto sp4 = std::make_shared<const GradedDatum>(load_table_datum_file(default_sp4_path()));
      auto r = eng.run(sp4);
      for (const auto& f : all_findings(*r)) rep.findings.push_back(f);
      for (const auto& S : r->sides)
        if (S.xi.size() != 2) rep.findings.push_back({"fixture", "sp4: Xi does not have two elements"});
    } catch (const std::exception& e) {
      rep.findings.push_back({"fixture", std::string("sp4: ") + e.what()});
    }
    say("fixtures: a1 a001 sp4");
  }

  int depth = opt.depth;
  if (depth > opt.engine_cap) {
    rep.skipped.push_back("type-A data with total dimension " + std::to_string(opt.engine_cap + 1) + ".." +
                          std::to_string(depth) + " (engine sweep cap)");
    depth = opt.engine_cap;
  }
  auto items = enumerate_type_a(depth);
  std::vector<std::vector<Finding>> per(items.size());
  std::vector<char> oracle_run(items.size(), 0);
  std::atomic<std::size_t> next{0};
  bool guard_noted = false;
  std::mutex mu;
  auto worker = [&] {
    Engine eng;
    for (std::size_t i = next++; i < items.size(); i = next++) {
      const auto& it = items[i];
      try {
        auto r = eng.run(make_type_a_shared(it.factors, it.n));
        per[i] = type_a_invariants(*r);
        int td = total_dim(it.factors);
        if (opt.oracles && td <= opt.oracle_cap) {
          try {
            for (int q : {2, 3})
              for (const auto& f : check_e_against_counts(*r, q, opt.seed)) per[i].push_back(f);
            oracle_run[i] = 1;
          } catch (const TooLarge&) {
            std::lock_guard<std::mutex> lk(mu);
            guard_noted = true;
          }
        }
      } catch (const AlgorithmBroken& e) {
        per[i].push_back({"algorithm-broken", it.spec + ": " + e.what()});
      } catch (const std::exception& e) {
        per[i].push_back({"error", it.spec + ": " + e.what()});
      }
    }
  };
  unsigned T = std::max(1u, opt.threads);
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < T; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (const auto& f : per[i]) rep.findings.push_back(f);
    rep.oracle_data += oracle_run[i];
  }
  rep.data = static_cast<int>(items.size());
  if (guard_noted) rep.skipped.push_back("point-count oracle beyond the dimension guard " + std::to_string(oracle_max_dim()));
  if (opt.oracles && opt.oracle_cap < depth)
    rep.skipped.push_back("point-count oracle for total dimension above " + std::to_string(opt.oracle_cap));
  say("type-A data: " + std::to_string(rep.data) + ", with oracle: " + std::to_string(rep.oracle_data));
  return rep;
}

}  // namespace gic
