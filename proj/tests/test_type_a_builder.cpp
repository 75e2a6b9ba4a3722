#include <algorithm>

#include "doctest.h"
#include "gic/datum_model.hpp"
#include "gic/sweep.hpp"
#include "gic/type_a_builder.hpp"

using namespace gic;

namespace {

std::vector<GLFactor> F(const std::string& spec, int* n = nullptr) {
  int k = 1;
  auto f = parse_gl_spec(spec, &k);
  if (n) *n = k;
  return f;
}

std::size_t proper_etas(const GradedDatum& d, int k) { return d.etas.count(k) ? d.etas.at(k).size() : 0; }

Multisegment ms(std::vector<std::vector<Segment>> m) {
  for (auto& f : m) std::sort(f.begin(), f.end());
  return m;
}

}  // namespace

TEST_CASE("spec parsing and names") {
  int n = 0;
  auto f = F("glq:0,0,1;n=1", &n);
  CHECK(n == 1);
  REQUIRE(f.size() == 1);
  CHECK(f[0].dim() == 3);
  CHECK(f[0].weights.at(0) == 2);
  CHECK(gl_spec_name(f, 1) == "glq:0,0,1;n=1");
  CHECK(F("glq:0|1;n=2", &n).size() == 2);
  CHECK(n == 2);
  CHECK_THROWS(F("0,1"));
}

TEST_CASE("rank-one datum") {
  GradedDatum d = make_type_a_datum(F("glq:0,1;n=1"), 1);
  CHECK(d.size() == 2);
  REQUIRE(d.classes.size() == 1);
  CHECK(d.classes[0].theta_ratio == LaurentPoly(1));
  CHECK(proper_etas(d, 1) == 1);
  CHECK(d.etas.at(1)[0].d_eta == 0);
  CHECK(d.leaf.rigid);
  CHECK(d.leaf.cprime.empty());
}

TEST_CASE("GL2 in degree zero only") {
  GradedDatum d = make_type_a_datum(F("glq:0,0;n=1"), 1);
  CHECK(d.size() == 1);
  CHECK(proper_etas(d, 1) == 0);
  CHECK(proper_etas(d, -1) == 0);
  CHECK(d.leaf.rigid);
  REQUIRE(d.leaf.cprime.size() == 1);
  CHECK(d.leaf.cprime[0].s_F == 0);
  CHECK(d.leaf.cprime[0].r_F == LaurentPoly::parse("v^-1+v"));
}

TEST_CASE("weights 0,0,1") {
  GradedDatum d = make_type_a_datum(F("glq:0,0,1;n=1"), 1);
  CHECK(d.size() == 3);
  CHECK_FALSE(d.leaf.rigid);
  REQUIRE(proper_etas(d, 1) == 2);
  std::vector<int> ds;
  for (const auto& e : d.etas.at(1)) ds.push_back(e.d_eta);
  std::sort(ds.begin(), ds.end());
  CHECK(ds == std::vector<int>{0, 2});
}

TEST_CASE("tau_of_pair examples") {
  Word x{{0, 1}}, y{{1, 0}};
  CHECK(tau_of_pair(lined(x), lined(x), 1) == 0);
  CHECK(tau_of_pair(lined(x), lined(y), 1) == 1);
  // Same word with the two 0-lines exchanged.
  LinedWord a = lined(Word{{0, 0, 1}});
  LinedWord b = a;
  std::swap(b[0][0], b[0][1]);
  CHECK(tau_of_pair(a, b, 1) == -2);
}

TEST_CASE("tau plus tau of the sigma image equals c_F") {
  for (const char* spec : {"glq:0,1;n=1", "glq:0,0,1;n=1", "glq:0,1,2;n=1", "glq:0,1|1;n=1", "glq:0,2,2;n=2"}) {
    int n = 1;
    auto f = F(spec, &n);
    GradedDatum d = make_type_a_datum(f, n);
    INFO(spec);
    for (const auto& cls : d.classes)
      for (std::size_t s : cls.members)
        for (std::size_t t : cls.members) {
          // Each orbit over (s, t) pairs with one over (sigma s, t): compare the multisets.
          auto tab = pairing_table(d);
          auto u = tab[{s, t}];
          auto w = tab[{d.sigma[s], t}];
          std::vector<int> comp;
          for (int x : w) comp.push_back(cls.c_F - x);
          std::sort(u.begin(), u.end());
          std::sort(comp.begin(), comp.end());
          CHECK(u == comp);
        }
  }
}

TEST_CASE("enumerate_orbits") {
  auto a1 = enumerate_orbits(F("glq:0,1;n=1"), 1);
  REQUIRE(a1.size() == 2);
  std::sort(a1.begin(), a1.end(), [](const OrbitEta& x, const OrbitEta& y) { return x.d_eta < y.d_eta; });
  CHECK(a1[0].d_eta == 0);
  CHECK_FALSE(a1[0].whole);
  CHECK(gl_spec_name(a1[0].child_factors, 1) == "glq:0|1;n=1");
  CHECK(a1[1].d_eta == 1);
  CHECK(a1[1].whole);

  auto b = enumerate_orbits(F("glq:0,0,1;n=1"), 1);
  REQUIRE(b.size() == 2);
  for (const auto& o : b) CHECK_FALSE(o.whole);

  auto c = enumerate_orbits(F("glq:0,0;n=1"), 1);
  CHECK(c.size() == 1);
  CHECK(c[0].d_eta == 0);
}

TEST_CASE("child_datum_of_orbit") {
  auto f = F("glq:0,1;n=1");
  OrbitEta z = child_datum_of_orbit(f, ms({{{0, 1}, {1, 1}}}), 1);
  CHECK(gl_spec_name(z.child_factors, 1) == "glq:0|1;n=1");

  auto g = F("glq:0,0,1;n=1");
  OrbitEta r = child_datum_of_orbit(g, ms({{{0, 1}, {0, 2}}}), 1);
  CHECK(r.d_eta == 2);
  CHECK(gl_spec_name(r.child_factors, 1) == "glq:0|0,1;n=1");

  // Induction of the rank-one child: (0)(0,1) -> 0,0,1 and (0)(1,0) -> 0,1,0.
  auto d = make_type_a_shared(g, 1);
  const EtaClass* eta = nullptr;
  for (const auto& e : d->etas.at(1))
    if (e.d_eta == 2) eta = &e;
  REQUIRE(eta);
  std::vector<std::pair<std::string, std::string>> got;
  for (auto [c, p] : eta->induction) got.emplace_back(eta->child->basis[c].label, d->basis[p].label);
  std::sort(got.begin(), got.end());
  CHECK(got == std::vector<std::pair<std::string, std::string>>{{"0|0,1", "0,0,1"}, {"0|1,0", "0,1,0"}});
}

TEST_CASE("rigidity_check") {
  CHECK(rigidity_check(F("glq:0,1;n=1"), 1).rigid);
  CHECK(rigidity_check(F("glq:0,1;n=1"), 1).cprime.empty());
  LeafData l = rigidity_check(F("glq:0,0;n=1"), 1);
  CHECK(l.rigid);
  REQUIRE(l.cprime.size() == 1);
  CHECK(l.cprime[0].r_F == LaurentPoly::parse("v^-1+v"));
  CHECK_FALSE(rigidity_check(F("glq:0,0,1;n=1"), 1).rigid);
  CHECK(rigidity_check(F("glq:0,1,1,2;n=1"), 1).rigid);
}

TEST_CASE("closure_leq") {
  Multisegment zero = ms({{{0, 1}, {1, 1}}});
  Multisegment one = ms({{{0, 2}}});
  CHECK(closure_leq(zero, zero, 1));
  CHECK(closure_leq(zero, one, 1));
  CHECK_FALSE(closure_leq(one, zero, 1));

  // Two chains 0-1 and 5-6: a long segment on one chain against one on the other.
  Multisegment a = ms({{{0, 2}, {5, 1}, {6, 1}}});
  Multisegment b = ms({{{0, 1}, {1, 1}, {5, 2}}});
  CHECK_FALSE(closure_leq(a, b, 1));
  CHECK_FALSE(closure_leq(b, a, 1));
}

TEST_CASE("word counts are multinomials") {
  CHECK(make_type_a_datum(F("glq:0,0,1,1;n=1"), 1).size() == 6);
  CHECK(make_type_a_datum(F("glq:0,1,2;n=1"), 1).size() == 6);
  CHECK(make_type_a_datum(F("glq:0,1|0,0,1;n=1"), 1).size() == 6);
}

TEST_CASE("unique open orbit and proper etas below it") {
  for (const auto& item : enumerate_type_a(4)) {
    auto d = make_type_a_shared(item.factors, item.n);
    for (int k : d->delta()) {
      const auto& os = d->orbits.at(k);
      int top = 0, count = 0;
      for (const auto& o : os) top = std::max(top, o.dim);
      for (const auto& o : os) count += o.dim == top;
      CHECK(count == 1);
      if (d->etas.count(k))
        for (const auto& e : d->etas.at(k)) CHECK(e.d_eta <= top);
    }
  }
}

TEST_CASE("every small datum validates") {
  auto items = enumerate_type_a(5);
  CHECK(items.size() > 100);
  std::size_t bad = 0;
  for (const auto& item : items) {
    auto d = make_type_a_shared(item.factors, item.n);
    auto fs = validate_datum(*d);
    if (!fs.empty()) {
      ++bad;
      MESSAGE(item.spec << ": " << fs[0].code << " " << fs[0].message);
    }
  }
  CHECK(bad == 0);
}
