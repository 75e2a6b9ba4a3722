#include <algorithm>
#include <array>
#include <set>

#include "doctest.h"
#include "gic/datum_model.hpp"
#include "gic/errors.hpp"
#include "gic/sweep.hpp"
#include "gic/type_a_builder.hpp"
#include "json.hpp"

using namespace gic;

namespace {

LaurentPoly P(const char* s) { return LaurentPoly::parse(s); }

std::shared_ptr<const GradedDatum> glq(const std::string& spec) {
  int n = 1;
  auto f = parse_gl_spec(spec, &n);
  return make_type_a_shared(f, n);
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

bool has_code(const std::vector<Finding>& fs, const std::string& needle) {
  return std::any_of(fs.begin(), fs.end(), [&](const Finding& f) {
    return f.code.find(needle) != std::string::npos || f.message.find(needle) != std::string::npos;
  });
}

}  // namespace

TEST_CASE("gram of the rank-one datum") {
  auto d = glq("glq:0,1;n=1");
  REQUIRE(d->size() == 2);
  CHECK(d->basis[0].label == "0,1");
  RFMatrix g = gram_matrix(*d);
  CHECK(g(0, 0) == RatFunc(1));
  CHECK(g(0, 1) == RatFunc(P("v")));
  CHECK(g(1, 0) == RatFunc(P("v")));
  CHECK(g(1, 1) == RatFunc(1));
  RFMatrix gp = gram_matrix(*d, SignConvention::PrintedMinusV);
  CHECK(gp(0, 1) == RatFunc(P("-v")));
}

TEST_CASE("gram entry for weights 0,0,1") {
  auto d = glq("glq:0,0,1;n=1");
  REQUIRE(d->basis[0].label == "0,0,1");
  RFMatrix g = gram_matrix(*d);
  CHECK(g(0, 0) == RatFunc(P("1+v^2") * P("1+v^-2")));
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) CHECK(g(i, j) == g(j, i));
}

TEST_CASE("gram is zero between non-dual classes") {
  auto j = torus_json();
  j["basis"].push_back({{"index", 1}, {"label", "u"}});
  j["primitive_classes"] = nlohmann::json::parse(R"([
    {"id": 0, "dual": 1, "c_F": 0, "members": [0], "theta_ratio": "1"},
    {"id": 1, "dual": 0, "c_F": 0, "members": [1], "theta_ratio": "1"}])");
  j["pairing"] = nlohmann::json::parse(R"([{"s": 0, "s_prime": 1, "tau": 0}, {"s": 1, "s_prime": 0, "tau": 0}])");
  j["sigma"] = {0, 1};
  j["leaf"]["cprime"] = nlohmann::json::array();
  GradedDatum d = load_table_datum(j.dump());
  RFMatrix g = gram_matrix(d);
  CHECK(g(0, 0).is_zero());
  CHECK(g(1, 1).is_zero());
  CHECK(g(0, 1) == RatFunc(1));
}

TEST_CASE("load the shipped fixture") {
  GradedDatum d = load_table_datum_file(default_sp4_path());
  CHECK(d.size() == 4);
  CHECK(d.n == 2);
  CHECK(validate_datum(d).empty());
  CHECK(d.open_orbit(2) == "O3");
  CHECK(d.closure_lt(2, "O0", "O3"));
  CHECK_FALSE(d.closure_lt(2, "O3", "O0"));
}

TEST_CASE("fixture tau values agree with a recomputation from the root system") {
  // Signed permutations of (2,1) give the chambers; the grading sends 2e1, 2e2, e1+e2
  // to degree 2 and e1-e2 to degree 0.
  using V = std::array<int, 2>;
  const std::array<V, 3> deg2 = {V{2, 0}, V{0, 2}, V{1, 1}};
  const V deg0 = {1, -1};
  auto ev = [](const V& r, const V& x) { return r[0] * x[0] + r[1] * x[1]; };
  std::vector<V> chambers;
  for (int perm = 0; perm < 2; ++perm)
    for (int s0 : {-1, 1})
      for (int s1 : {-1, 1}) {
        V base = perm ? V{1, 2} : V{2, 1};
        chambers.push_back({s0 * base[0], s1 * base[1]});
      }
  auto coset = [](const V& x) { return std::set<V>{x, V{x[1], x[0]}}; };
  std::vector<std::set<V>> classes;
  for (const V& c : chambers)
    if (std::find(classes.begin(), classes.end(), coset(c)) == classes.end()) classes.push_back(coset(c));
  REQUIRE(classes.size() == 4);

  GradedDatum d = load_table_datum_file(default_sp4_path());
  auto table = pairing_table(d);
  // Match each fixture basis element with a coset by its sign label.
  auto label_of = [](const std::set<V>& c) {
    V x = *std::max_element(c.begin(), c.end(), [](const V& a, const V& b) { return std::abs(a[0]) < std::abs(b[0]); });
    std::string s = "(";
    s += x[0] < 0 ? "-" : "+";
    s += ",";
    s += x[1] < 0 ? "-" : "+";
    return s + ")";
  };
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t k = 0; k < 4; ++k) {
      const auto& ci = classes[i];
      const auto& ck = classes[k];
      V x = *ci.begin();
      std::vector<int> taus;
      for (const V& y : ck) {
        int t = 0;
        for (const V& r : deg2) t += (ev(r, x) > 0) != (ev(r, y) > 0);
        t -= 2 * ((ev(deg0, x) > 0) != (ev(deg0, y) > 0));
        taus.push_back(t);
      }
      std::sort(taus.begin(), taus.end());
      std::size_t a = 0, b = 0;
      for (std::size_t j = 0; j < 4; ++j) {
        if (d.basis[j].label == label_of(ci)) a = j;
        if (d.basis[j].label == label_of(ck)) b = j;
      }
      auto got = table.at({a, b});
      std::sort(got.begin(), got.end());
      CHECK(got == taus);
    }
}

TEST_CASE("c_F mismatch is rejected") {
  auto j = torus_json();
  j["primitive_classes"][0]["c_F"] = 1;
  CHECK_THROWS_WITH_AS(load_table_datum(j.dump()), doctest::Contains("c_F mismatch"), DatumInvalid);
}

TEST_CASE("minimal torus datum is a valid leaf") {
  GradedDatum d = load_table_datum(torus_json().dump());
  CHECK(d.size() == 1);
  CHECK(d.leaf.rigid);
  REQUIRE(d.leaf.cprime.size() == 1);
  CHECK(d.leaf.cprime[0].r_F == P("1"));
  CHECK(validate_datum(d).empty());
}

TEST_CASE("malformed input") {
  CHECK_THROWS_AS(load_table_datum("{"), ParseError);
  auto j = torus_json();
  j.erase("basis");
  CHECK_THROWS(load_table_datum(j.dump()));
}

TEST_CASE("validate_datum findings") {
  CHECK(validate_datum(*glq("glq:0,1;n=1")).empty());
  CHECK(validate_datum(*glq("glq:0,0,1;n=1")).empty());
  GradedDatum d = *glq("glq:0,1;n=1");
  d.sigma = {0, 0};
  CHECK(has_code(validate_datum(d), "sigma not involutive"));
}

TEST_CASE("induction_extend") {
  auto d = glq("glq:0,1;n=1");
  REQUIRE(d->etas.count(1));
  const EtaClass& eta = d->etas.at(1).at(0);
  REQUIRE(eta.induction.size() == 1);
  auto [c, p] = eta.induction[0];
  KVector x{{c, RatFunc(1)}};
  KVector y = induction_extend(eta, x);
  CHECK(y.size() == 1);
  CHECK(y.at(p) == RatFunc(1));
  CHECK(induction_extend(eta, {}).empty());
  RatFunc s = RatFunc(P("v")) / RatFunc(P("1+v^2"));
  CHECK(induction_extend(eta, {{c, s}}).at(p) == s);
  CHECK(d->basis[p].label == "0,1");
}

TEST_CASE("induction_extend commutes with bar") {
  auto d = glq("glq:0,0,1;n=1");
  for (const auto& [k, es] : d->etas)
    for (const auto& eta : es) {
      KVector x;
      int e = 1;
      for (auto [c, p] : eta.induction) x[c] = RatFunc(LaurentPoly::from_terms({{e, 1}, {0, 2}})) / RatFunc(P("1+v"));
      KVector bx;
      for (auto& [i, r] : x) bx[i] = rf_bar(r);
      KVector a = induction_extend(eta, bx), b = induction_extend(eta, x);
      for (auto& [i, r] : b) CHECK(a.at(i) == rf_bar(r));
      ++e;
    }
}

TEST_CASE("radical membership") {
  auto a1 = glq("glq:0,1;n=1");
  CHECK(radical_member(*a1, {}));
  CHECK_FALSE(radical_member(*a1, {{0, RatFunc(1)}}));

  auto d = glq("glq:0,0,1;n=1");
  RFMatrix g = gram_matrix(*d);
  // Kernel: fix the last coordinate to 1 and solve the leading 2x2 block.
  RFMatrix A(2, 2), B(2, 1);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) A(i, j) = g(i, j);
    B(i, 0) = -g(i, 2);
  }
  RFMatrix X = solve_linear(A, B);
  KVector k{{0, X(0, 0)}, {1, X(1, 0)}, {2, RatFunc(1)}};
  CHECK(radical_member(*d, k));
  CHECK_FALSE(radical_member(*d, {{2, RatFunc(1)}}));
}
