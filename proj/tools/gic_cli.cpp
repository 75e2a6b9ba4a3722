// gic: command-line front end.
//
//   gic compute  --gl "glq:0,1;n=1" | --datum file.json  [--n K] [--format json|csv] [--out path]
//   gic validate --gl ... | --datum ...
//   gic oracle   count|echeck|orbits|kl ...
//   gic selftest [--depth D] [--threads T]
//   gic example  a1|a001|sp4
//
// Exit status: 0 ok, 1 bad input or failed check, 2 AlgorithmBroken.

#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "gic/errors.hpp"
#include "gic/oracles.hpp"
#include "gic/report.hpp"
#include "gic/sweep.hpp"

using namespace gic;

namespace {

struct Source {
  std::string gl, datum, sign = "plusv", order = "asc";
  unsigned threads = 1;
};

void add_source(CLI::App* c, Source& s) {
  auto* g = c->add_option("--gl", s.gl, "type-A datum, e.g. glq:0,1|2;n=1");
  auto* d = c->add_option("--datum", s.datum, "table datum JSON file");
  g->excludes(d);
  c->add_option("--sign-convention", s.sign, "plusv|printed")->check(CLI::IsMember({"plusv", "printed"}));
  c->add_option("--flag-order", s.order, "asc|desc")->check(CLI::IsMember({"asc", "desc"}));
  c->add_option("--threads", s.threads, "worker threads");
}

std::shared_ptr<const GradedDatum> load(const Source& s) {
  if (s.gl.empty() == s.datum.empty()) throw ParseError("give exactly one of --gl and --datum");
  if (!s.gl.empty()) {
    int n = 1;
    auto f = parse_gl_spec(s.gl, &n);
    return make_type_a_shared(f, n, s.order == "desc" ? FlagOrder::Desc : FlagOrder::Asc);
  }
  return std::make_shared<const GradedDatum>(load_table_datum_file(s.datum));
}

RunOptions run_options(const Source& s) {
  RunOptions o;
  o.conv = s.sign == "printed" ? SignConvention::PrintedMinusV : SignConvention::PlusV;
  o.threads = std::max(1u, s.threads);
  return o;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw ParseError("cannot write " + out);
  f << text;
}

ojson findings_json(const std::vector<Finding>& fs) {
  ojson a = ojson::array();
  for (const auto& f : fs) a.push_back({{"code", f.code}, {"message", f.message}});
  return a;
}

std::vector<int> int_list(const std::string& s) {
  std::vector<int> v;
  std::stringstream ss(s);
  std::string t;
  while (std::getline(ss, t, ','))
    if (!t.empty()) v.push_back(std::stoi(t));
  return v;
}

/******** example *************************************************************/

std::string row_str(const SideResult& s, std::size_t i) {
  std::string r;
  for (std::size_t j = 0; j < s.z.size(); ++j) r += (j ? ", " : "") + s.c_matrix(i, j).to_string();
  return "[" + r + "]";
}

void line(const std::string& what, const std::string& expected, const std::string& computed) {
  std::cout << "  " << what << "\n    expected: " << expected << "\n    computed: " << computed
            << (expected == computed ? "   ok" : "   DIFFERENT") << "\n";
}

int example_type_a(const std::string& spec, const std::vector<std::string>& f_rows,
                   const std::vector<std::pair<std::string, std::string>>& e_rows) {
  int n = 1;
  auto factors = parse_gl_spec(spec, &n);
  auto d = make_type_a_shared(factors, n);
  Engine eng;
  auto r = eng.run(d);
  const SideResult& s = r->side(n);
  std::cout << spec << ", degree " << n << "\n";
  bool ok = true;
  for (std::size_t i = 0; i < s.z.size(); ++i) {
    std::string c = row_str(s, i);
    line("f row " + s.z[i].kappa.str(), f_rows[i], c);
    ok &= f_rows[i] == c;
  }
  for (const auto& [label, want] : e_rows) {
    std::size_t b = 0;
    while (d->basis[b].label != label) ++b;
    std::string got;
    for (std::size_t j = 0; j < s.z.size(); ++j) got += (j ? ", " : "") + s.e_matrix(b, j).to_string();
    got = "(" + got + ")";
    line("e row " + label, want, got);
    ok &= want == got;
  }
  return ok ? 0 : 1;
}

int example_sp4() {
  auto d = std::make_shared<const GradedDatum>(load_table_datum_file(default_sp4_path()));
  Engine eng;
  auto r = eng.run(d);
  const SideResult& s = r->side(d->n);
  const SideResult& o = r->side(-d->n);
  // kappa_0, kappa_2, kappa_3, tilde kappa_3
  const std::vector<std::pair<std::string, std::string>> names{
      {"k0", "O0/triv"}, {"k2", "O2/triv"}, {"k3", "O3/triv"}, {"k3~", "O3/sgn"}};
  auto nm = [&](const std::string& lab) {
    for (const auto& [a, b] : names)
      if (b == lab) return a;
    return lab;
  };
  auto idx = [&](const SideResult& side, const std::string& lab) {
    for (std::size_t i = 0; i < side.z.size(); ++i)
      if (side.z[i].kappa.str() == lab) return i;
    throw AlgorithmBroken("example", "missing label " + lab);
  };
  std::cout << "Sp4, degree " << d->n << " (k0, k2, k3, k3~ on the orbits of dimension 0, 2, 3, 3)\n";
  bool ok = true;
  const std::vector<std::string> fourier_want{"k3", "k3~", "k0", "k2"};
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::string got = nm(o.z[s.fourier[idx(s, names[i].second)]].kappa.str());
    line("Fourier partner of " + names[i].first, fourier_want[i] + " at -n", got + " at -n");
    ok &= got == fourier_want[i];
  }
  std::string chain;
  for (std::size_t i = 0; i + 1 < names.size(); ++i) {
    std::size_t a = idx(s, names[i].second), b = idx(s, names[i + 1].second);
    chain += names[i].first + (s.leq[a][b] && !s.leq[b][a] ? " < " : " ? ");
  }
  chain += names.back().first;
  line("order", "k0 < k2 < k3 < k3~", chain);
  ok &= chain == "k0 < k2 < k3 < k3~";
  const std::vector<std::string> l_want{"k0", "k2 + k0", "k3", "k3~ + k3"};
  for (std::size_t i = 0; i < names.size(); ++i) {
    const LRow& L = s.l_table[idx(s, names[i].second)];
    std::string got;
    // terms in the W basis, leading term first
    std::vector<std::string> terms;
    for (std::size_t k = names.size(); k-- > 0;) {
      const RatFunc& c = L.L_w[idx(s, names[k].second)];
      if (c.is_zero()) continue;
      terms.push_back((c.is_one() ? "" : c.to_string() + "*") + names[k].first);
    }
    for (std::size_t t = 0; t < terms.size(); ++t) got += (t ? " + " : "") + terms[t];
    line("L of " + names[i].first + " (canonical basis)", l_want[i], got);
    ok &= got == l_want[i];
  }
  std::string xi;
  for (auto i : s.xi) xi += (xi.empty() ? "" : ", ") + nm(s.z[i].kappa.str());
  line("Xi", "k2, k0", xi);
  ok &= xi == "k2, k0";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graded Lie algebra IC multiplicities"};
  app.require_subcommand(1);

  Source src;
  int only_n = 0;
  std::string format = "json", out;
  auto* compute = app.add_subcommand("compute", "run the algorithm and write the result");
  add_source(compute, src);
  compute->add_option("--n", only_n, "restrict the output to one degree");
  compute->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  compute->add_option("--out", out, "output file (default stdout)");

  auto* validate = app.add_subcommand("validate", "check a datum and list findings");
  add_source(validate, src);

  auto* oracle = app.add_subcommand("oracle", "independent checks");
  oracle->require_subcommand(1);
  std::string word, orbit;
  int q = 2;
  std::uint64_t seed = 1;
  auto* ocount = oracle->add_subcommand("count", "flag point count for a word and an orbit");
  add_source(ocount, src);
  ocount->add_option("--word", word, "e.g. 0,0,1 or 0,1|2")->required();
  ocount->add_option("--orbit", orbit, "multisegment name, e.g. [0]+[0..1]")->required();
  ocount->add_option("--n", only_n, "degree (default: the datum's n)");
  ocount->add_option("--q", q, "prime");
  ocount->add_option("--seed", seed, "seed for the second representative");
  auto* oe = oracle->add_subcommand("echeck", "compare every e-entry with point counts");
  add_source(oe, src);
  oe->add_option("--q", q, "prime");
  oe->add_option("--seed", seed, "seed for the second representatives");
  auto* oorb = oracle->add_subcommand("orbits", "orbit dimensions from ranks of ad(x)");
  add_source(oorb, src);
  std::string kx, ky;
  auto* okl = oracle->add_subcommand("kl", "Kazhdan-Lusztig polynomial of S_m (powers of q)");
  okl->add_option("--x", kx, "one-line permutation of 0..m-1")->required();
  okl->add_option("--y", ky, "one-line permutation of 0..m-1")->required();
  auto* okc = oracle->add_subcommand("klcheck", "f-matrix against KL polynomials (weights 0..k-1, n=1)");
  add_source(okc, src);

  SelftestOptions st;
  auto* selft = app.add_subcommand("selftest", "invariant suite over fixtures and small type-A data");
  selft->add_option("--depth", st.depth, "maximal total dimension (engine runs stop at 5, point counts at 4; larger data are listed as skipped)");
  selft->add_option("--threads", st.threads, "worker threads");
  selft->add_option("--seed", st.seed, "seed for sampled orbit representatives");
  bool no_oracles = false;
  selft->add_flag("--no-oracles", no_oracles, "skip point counts");

  std::string ex_name;
  auto* example = app.add_subcommand("example", "worked examples, expected next to computed");
  example->add_option("name", ex_name, "a1|a001|sp4")->required()->check(CLI::IsMember({"a1", "a001", "sp4"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // help and version exit 0; usage errors count as input errors
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (compute->parsed()) {
      auto d = load(src);
      Engine eng(run_options(src));
      auto r = eng.run(d);
      ReportOptions ro;
      if (only_n != 0) {
        if (only_n != d->n && only_n != -d->n) throw ParseError("--n must be one of the two degrees");
        ro.only_n = {only_n};
      }
      emit(format == "csv" ? run_to_csv(*r, ro) : run_to_json(*r, ro).dump(1) + "\n", out);
      return 0;
    }
    if (validate->parsed()) {
      // table data are validated while loading; type-A data here
      auto d = load(src);
      auto fs = validate_datum(*d);
      std::cout << findings_json(fs).dump(1) << "\n";
      return fs.empty() ? 0 : 1;
    }
    if (ocount->parsed()) {
      auto d = load(src);
      if (!d->type_a) throw ParseError("point counts need --gl");
      int k = only_n ? only_n : d->n;
      const auto& names = d->orbits.at(k);
      std::size_t oi = 0;
      while (oi < names.size() && names[oi].name != orbit) ++oi;
      if (oi == names.size()) throw ParseError("unknown orbit " + orbit);
      Word w;
      std::stringstream ss(word);
      std::string part;
      while (std::getline(ss, part, '|')) w.push_back(int_list(part));
      const auto& ms = d->type_a->orbit_segments.at(k)[oi];
      FlagCountQuery Q{d->type_a->factors, k, w, orbit_representative(d->type_a->factors, ms, k), q};
      auto c1 = flag_point_count(Q);
      Q.x = conjugate_representative(d->type_a->factors, Q.x, q, seed);
      auto c2 = flag_point_count(Q);
      ojson j{{"datum", d->name}, {"n", k}, {"word", word}, {"orbit", orbit}, {"q", q}, {"count", c1},
              {"count_second_representative", c2}};
      std::cout << j.dump(1) << "\n";
      return c1 == c2 ? 0 : 1;
    }
    if (oe->parsed() || oorb->parsed() || okc->parsed()) {
      auto d = load(src);
      Engine eng(run_options(src));
      auto r = eng.run(d);
      std::vector<Finding> fs = oe->parsed() ? check_e_against_counts(*r, q, seed)
                                : oorb->parsed() ? check_orbit_dimensions(*r)
                                                 : kl_crosscheck(*r);
      std::cout << ojson{{"datum", d->name}, {"findings", findings_json(fs)}}.dump(1) << "\n";
      return fs.empty() ? 0 : 1;
    }
    if (okl->parsed()) {
      auto x = int_list(kx), y = int_list(ky);
      auto p = kl_polynomial(x, y);
      std::cout << ojson{{"x", x}, {"y", y}, {"P", laurent_to_json(p)}}.dump(1) << "\n";
      return 0;
    }
    if (selft->parsed()) {
      st.oracles = !no_oracles;
      if (st.threads == 0) st.threads = std::max(1u, std::thread::hardware_concurrency());
      auto rep = selftest(st, &std::cerr);
      ojson j{{"data", rep.data},
              {"oracle_data", rep.oracle_data},
              {"skipped", rep.skipped},
              {"findings", findings_json(rep.findings)}};
      std::cout << j.dump(1) << "\n";
      return rep.ok() ? 0 : 1;
    }
    if (example->parsed()) {
      if (ex_name == "a1") return example_type_a("glq:0,1;n=1", {"[1, v]", "[0, 1]"}, {{"0,1", "(0, 1)"}, {"1,0", "(1, v)"}});
      if (ex_name == "a001")
        return example_type_a("glq:0,0,1;n=1", {"[1, v^2]", "[0, 1]"},
                              {{"0,0,1", "(0, v^-1+v)"}, {"0,1,0", "(1, 1+v^2)"}});
      return example_sp4();
    }
  } catch (const AlgorithmBroken& e) {
    std::cerr << "algorithm broken at step '" << e.step << "': " << e.what() << "\n";
    return 2;
  } catch (const TooLarge& e) {
    std::cerr << "too large: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
