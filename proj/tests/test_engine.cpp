#include <algorithm>
#include <thread>

#include "doctest.h"
#include "gic/datum_model.hpp"
#include "gic/engine.hpp"
#include "gic/errors.hpp"
#include "gic/report.hpp"
#include "gic/sweep.hpp"
#include "gic/type_a_builder.hpp"
#include "json.hpp"

using namespace gic;

namespace {

LaurentPoly P(const char* s) { return LaurentPoly::parse(s); }
RatFunc R(const char* s) { return RatFunc(P(s)); }

std::shared_ptr<const RunResult> run_spec(const std::string& spec, RunOptions opt = {}) {
  int n = 1;
  auto f = parse_gl_spec(spec, &n);
  return Engine(opt).run(make_type_a_shared(f, n));
}

std::size_t idx(const SideResult& s, const std::string& kappa) {
  for (std::size_t i = 0; i < s.z.size(); ++i)
    if (s.z[i].kappa.str() == kappa) return i;
  FAIL("no element " << kappa);
  return 0;
}

std::size_t basis(const GradedDatum& d, const std::string& label) {
  for (const auto& b : d.basis)
    if (b.label == label) return b.index;
  FAIL("no basis element " << label);
  return 0;
}

std::shared_ptr<const RunResult> sp4() {
  static auto r = Engine().run(std::make_shared<const GradedDatum>(load_table_datum_file(default_sp4_path())));
  return r;
}

nlohmann::json torus_json() {
  return nlohmann::json::parse(R"({
    "name": "torus", "delta": [1, -1],
    "basis": [{"index": 0, "label": "t"}],
    "primitive_classes": [{"id": 0, "dual": 0, "c_F": 0, "members": [0], "theta_ratio": "1"}],
    "pairing": [{"s": 0, "s_prime": 0, "tau": 0}],
    "sigma": [0],
    "orbits": {"1": [{"name": "0", "dim": 0}], "-1": [{"name": "0", "dim": 0}]},
    "leaf": {"rigid": true, "cprime": [{"s_F": 0, "r_F": "1", "kappa_label": "triv"}]}
  })");
}

}  // namespace

TEST_CASE("torus base case") {
  auto r = run(load_table_datum(torus_json().dump()));
  for (const auto& s : r->sides) {
    REQUIRE(s.z.size() == 1);
    CHECK(s.z[0].origin == Origin::CPrime);
    CHECK(s.z[0].vec[0] == RatFunc(1));
    CHECK(s.c_matrix(0, 0) == RatFunc(1));
    CHECK(s.e_matrix(0, 0) == RatFunc(1));
  }
  CHECK(all_findings(*r).empty());
}

TEST_CASE("rank-one datum") {
  auto r = run_spec("glq:0,1;n=1");
  const GradedDatum& d = *r->datum;
  const SideResult& s = r->side(1);
  REQUIRE(s.z.size() == 2);
  std::size_t open = idx(s, "[0..1]/triv"), pt = idx(s, "[0]+[1]/triv");
  std::size_t i01 = basis(d, "0,1"), i10 = basis(d, "1,0");

  // Z' = {I01}; the rigid top element is I10 - v I01.
  REQUIRE(s.zprime.size() == 1);
  CHECK(s.z[s.zprime[0]].vec[i01] == RatFunc(1));
  CHECK(s.z[s.zprime[0]].vec[i10].is_zero());
  CHECK(s.z[open].origin == Origin::CFromFourier);
  CHECK(s.z[open].vec[i10] == RatFunc(1));
  CHECK(s.z[open].vec[i01] == R("-v"));

  CHECK(s.c_matrix(open, open) == RatFunc(1));
  CHECK(s.c_matrix(open, pt) == R("v"));
  CHECK(s.c_matrix(pt, open).is_zero());
  CHECK(s.c_matrix(pt, pt) == RatFunc(1));

  CHECK(s.e_matrix(i01, open).is_zero());
  CHECK(s.e_matrix(i01, pt) == RatFunc(1));
  CHECK(s.e_matrix(i10, open) == RatFunc(1));
  CHECK(s.e_matrix(i10, pt) == R("v"));
  CHECK(s.weight_dims[i01] == std::vector<Int>{0, 1});
  CHECK(s.weight_dims[i10] == std::vector<Int>{1, 1});

  CHECK(s.leq[pt][open]);
  CHECK_FALSE(s.leq[open][pt]);

  // Fourier: the open element at n goes to I10 in Z'_{-1}, and I01 in Z'_1 to the open one at -1.
  const SideResult& m = r->side(-1);
  CHECK(m.z[s.fourier[open]].kappa.str() == "[0]+[1]/triv");
  CHECK(m.z[s.fourier[open]].vec[i10] == RatFunc(1));
  CHECK(m.z[s.fourier[pt]].kappa.str() == "[0..1]/triv");

  CHECK(s.l_table[pt].s_kappa == i01);
  CHECK(s.l_table[pt].r_kappa == LaurentPoly(1));
  REQUIRE(s.xi.size() == 1);
  CHECK(s.xi[0] == pt);
  CHECK(all_findings(*r).empty());
}

TEST_CASE("weights 0,0,1") {
  auto r = run_spec("glq:0,0,1;n=1");
  const GradedDatum& d = *r->datum;
  const SideResult& s = r->side(1);
  std::size_t top = idx(s, "[0]+[0..1]/triv"), pt = idx(s, "[0]+[0]+[1]/triv");
  std::size_t i001 = basis(d, "0,0,1"), i010 = basis(d, "0,1,0"), i100 = basis(d, "1,0,0");

  // Zero-orbit element v/(1+v^2) I001; the rank-one one is I010 - v I001.
  CHECK(s.z[pt].vec[i001] == R("v") / R("1+v^2"));
  CHECK(s.z[pt].vec[i010].is_zero());
  CHECK(s.z[top].vec[i010] == RatFunc(1));
  CHECK(s.z[top].vec[i001] == R("-v"));
  CHECK(s.z[top].vec[i100].is_zero());

  // a and c over Z' in the order (rank one, zero)
  REQUIRE(s.zprime.size() == 2);
  CHECK(s.zprime[0] == top);
  CHECK(s.a_matrix(0, 1) == R("v^2-v^-2"));
  CHECK(s.a_matrix(1, 0).is_zero());
  CHECK(s.c_matrix(top, pt) == R("v^2"));
  CHECK(s.c_matrix(pt, top).is_zero());

  CHECK(s.e_matrix(i001, top).is_zero());
  CHECK(s.e_matrix(i001, pt) == R("v^-1+v"));
  CHECK(s.e_matrix(i010, top) == RatFunc(1));
  CHECK(s.e_matrix(i010, pt) == R("1+v^2"));
  CHECK(s.weight_dims[i001] == std::vector<Int>{0, 2});
  CHECK(s.weight_dims[i010] == std::vector<Int>{1, 2});
  CHECK(s.xi == std::vector<std::size_t>{pt});
  CHECK(all_findings(*r).empty());
}

TEST_CASE("printed convention changes the rank-one f-matrix") {
  RunOptions o;
  o.conv = SignConvention::PrintedMinusV;
  auto r = run_spec("glq:0,1;n=1", o);
  const SideResult& s = r->side(1);
  CHECK(s.c_matrix(idx(s, "[0..1]/triv"), idx(s, "[0]+[1]/triv")) == R("-v"));
}

TEST_CASE("symplectic fixture") {
  auto r = sp4();
  const SideResult& s = r->side(2);
  const SideResult& m = r->side(-2);
  REQUIRE(s.z.size() == 4);
  std::size_t k0 = idx(s, "O0/triv"), k2 = idx(s, "O2/triv"), k3 = idx(s, "O3/triv"), k3s = idx(s, "O3/sgn");

  // rigid top: two elements, no C'
  int from_fourier = 0, cprime = 0;
  for (const auto& z : s.z) {
    from_fourier += z.origin == Origin::CFromFourier;
    cprime += z.origin == Origin::CPrime;
  }
  CHECK(from_fourier == 2);
  CHECK(cprime == 0);

  // chain k0 < k2 < k3 < k3~
  std::vector<std::size_t> chain{k0, k2, k3, k3s};
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) CHECK(s.leq[chain[a]][chain[b]] == (a <= b));

  CHECK(m.z[s.fourier[k0]].kappa.str() == "O3/triv");
  CHECK(m.z[s.fourier[k2]].kappa.str() == "O3/sgn");
  CHECK(m.z[s.fourier[k3]].kappa.str() == "O0/triv");
  CHECK(m.z[s.fourier[k3s]].kappa.str() == "O2/triv");

  // L in the W basis
  auto Lw = [&](std::size_t i, std::size_t j) { return s.l_table[i].L_w[j]; };
  CHECK(Lw(k0, k0) == RatFunc(1));
  CHECK(Lw(k2, k2) == RatFunc(1));
  CHECK(Lw(k2, k0) == RatFunc(1));
  CHECK(Lw(k3, k3) == RatFunc(1));
  CHECK(Lw(k3, k2).is_zero());
  CHECK(Lw(k3s, k3s) == RatFunc(1));
  CHECK(Lw(k3s, k3) == RatFunc(1));
  CHECK(Lw(k3s, k0).is_zero());

  std::vector<std::size_t> xi = s.xi;
  std::sort(xi.begin(), xi.end());
  std::vector<std::size_t> want{k0, k2};
  std::sort(want.begin(), want.end());
  CHECK(xi == want);
  CHECK(all_findings(*r).empty());
}

TEST_CASE("no graded part means no Xi") {
  auto r = run_spec("glq:0,0;n=1");
  for (const auto& s : r->sides) {
    CHECK(s.xi.empty());
    REQUIRE(s.z.size() == 1);
    CHECK(s.z[0].origin == Origin::CPrime);
  }
}

TEST_CASE("f-matrix is unitriangular with off-diagonal entries in vN[v]") {
  for (const auto& item : enumerate_type_a(4)) {
    auto r = run_spec(item.spec);
    INFO(item.spec);
    CHECK(all_findings(*r).empty());
    for (const auto& s : r->sides) {
      for (std::size_t i = 0; i < s.z.size(); ++i)
        for (std::size_t j = 0; j < s.z.size(); ++j) {
          const RatFunc& c = s.c_matrix(i, j);
          if (i == j) {
            CHECK(c == RatFunc(1));
          } else if (!c.is_zero()) {
            REQUIRE(c.is_laurent());
            CHECK(c.to_laurent().min_exp() >= 1);
            CHECK(c.to_laurent().all_nonneg());
            CHECK(s.leq[j][i]);
          }
        }
    }
  }
}

TEST_CASE("weight dimensions are nonnegative") {
  auto r = run_spec("glq:0,1,2;n=1");
  for (const auto& s : r->sides)
    for (const auto& row : s.weight_dims)
      for (const auto& x : row) CHECK(x >= 0);
}

TEST_CASE("memoization and determinism") {
  int n = 1;
  auto f = parse_gl_spec("glq:0,1,1,2;n=1", &n);
  auto d = make_type_a_shared(f, n);
  Engine e;
  auto a = e.run(d);
  auto b = e.run(d);
  CHECK(a.get() == b.get());

  RunOptions o;
  o.threads = 4;
  auto c = Engine(o).run(d);
  CHECK(run_to_json(*a).dump() == run_to_json(*c).dump());
  CHECK(run_to_csv(*a) == run_to_csv(*c));
}

TEST_CASE("concurrent runs on a shared engine agree") {
  int n = 1;
  auto f = parse_gl_spec("glq:0,0,1,1;n=1", &n);
  auto d = make_type_a_shared(f, n);
  Engine e;
  std::vector<std::string> out(4);
  std::vector<std::thread> ts;
  for (int i = 0; i < 4; ++i) ts.emplace_back([&, i] { out[i] = run_to_json(*e.run(d)).dump(); });
  for (auto& t : ts) t.join();
  for (int i = 1; i < 4; ++i) CHECK(out[i] == out[0]);
}

TEST_CASE("a leaf without C' is reported as broken") {
  auto j = torus_json();
  j["leaf"]["cprime"] = nlohmann::json::array();
  GradedDatum d = load_table_datum(j.dump());
  CHECK_THROWS_AS(run(d), AlgorithmBroken);
}

TEST_CASE("json encoding of Laurent polynomials") {
  CHECK(laurent_to_json(P("1+v^2")).dump() == "[[0,1],[2,1]]");
  CHECK(laurent_from_json(nlohmann::json::parse("[[0,1],[2,1]]")) == P("1+v^2"));
  CHECK(laurent_from_json(nlohmann::json("v^-1+v")) == P("v^-1+v"));
  LaurentPoly big = LaurentPoly::monomial(3, Int("123456789012345678901234567890"));
  CHECK(laurent_from_json(laurent_to_json(big)) == big);
}
