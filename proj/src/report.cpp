#include "gic/report.hpp"

#include <sstream>

#include "gic/errors.hpp"

namespace gic {

namespace {

ojson int_json(const Int& c) {
  if (c.fits_slong_p()) return c.get_si();
  return c.get_str();
}

template <class J>
LaurentPoly laurent_any(const J& j) {
  if (j.is_string()) return LaurentPoly::parse(j.template get<std::string>());
  if (j.is_number_integer()) return LaurentPoly(static_cast<long>(j.template get<long long>()));
  if (!j.is_array()) throw ParseError("Laurent polynomial must be a string, an integer or a list of [exp, coeff]");
  std::map<int, Int> t;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2) throw ParseError("Laurent term must be [exp, coeff]");
    Int c = p.at(1).is_string() ? Int(p.at(1).template get<std::string>()) : Int(static_cast<long>(p.at(1).template get<long long>()));
    t[p.at(0).template get<int>()] += c;
  }
  return LaurentPoly::from_terms(t);
}

ojson matrix_json(const RFMatrix& m) {
  ojson rows = ojson::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    ojson row = ojson::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(ratfunc_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ojson vec_json(const std::vector<RatFunc>& v, const GradedDatum& d) {
  ojson o = ojson::object();
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) o[d.basis[i].label] = ratfunc_to_json(v[i]);
  return o;
}

ojson coords_json(const std::vector<RatFunc>& v, const SideResult& s) {
  ojson o = ojson::object();
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) o[s.z[i].kappa.str()] = ratfunc_to_json(v[i]);
  return o;
}

bool wanted(const ReportOptions& opt, int n) {
  return opt.only_n.empty() || std::find(opt.only_n.begin(), opt.only_n.end(), n) != opt.only_n.end();
}

std::string cell(const RatFunc& r) { return r.to_string(); }

std::string field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace

ojson laurent_to_json(const LaurentPoly& p) {
  ojson a = ojson::array();
  for (const auto& [e, c] : p.terms()) a.push_back(ojson::array({e, int_json(c)}));
  return a;
}

LaurentPoly laurent_from_json(const nlohmann::json& j) { return laurent_any(j); }
LaurentPoly laurent_from_json(const ojson& j) { return laurent_any(j); }

ojson ratfunc_to_json(const RatFunc& r) {
  if (r.is_laurent()) return laurent_to_json(r.to_laurent());
  ojson o;
  o["num"] = laurent_to_json(LaurentPoly::from_dense(0, r.num()));
  o["den"] = laurent_to_json(LaurentPoly::from_dense(0, r.den()));
  return o;
}

ojson run_to_json(const RunResult& r, const ReportOptions& opt) {
  const GradedDatum& d = *r.datum;
  ojson j;
  j["datum"] = d.name;
  j["delta"] = {d.n, -d.n};
  j["sign_convention"] = r.conv == SignConvention::PlusV ? "plusv" : "printed";
  ojson basis = ojson::array();
  for (const auto& b : d.basis) basis.push_back(b.label);
  j["basis"] = basis;
  j["gram"] = matrix_json(r.gram);
  ojson sides = ojson::array();
  for (const auto& s : r.sides) {
    if (!wanted(opt, s.n)) continue;
    const SideResult& o = r.side(-s.n);
    ojson js;
    js["n"] = s.n;
    ojson labels = ojson::array(), zs = ojson::array();
    for (const auto& z : s.z) {
      labels.push_back(z.kappa.str());
      ojson e;
      e["kappa"] = z.kappa.str();
      e["orbit"] = z.kappa.orbit;
      e["local_system"] = z.kappa.ls;
      e["d"] = z.d;
      e["origin"] = origin_name(z.origin);
      if (z.origin == Origin::Induced) e["eta"] = z.eta;
      if (z.origin == Origin::CFromFourier) e["h_preimage"] = o.z[z.partner].kappa.str();
      e["vector"] = vec_json(z.vec, d);
      zs.push_back(std::move(e));
    }
    js["labels"] = labels;
    js["z_elements"] = zs;
    ojson zp = ojson::array();
    for (auto p : s.zprime) zp.push_back(s.z[p].kappa.str());
    js["z_prime"] = zp;
    js["a_matrix"] = matrix_json(s.a_matrix);
    js["c_matrix"] = matrix_json(s.c_matrix);
    js["e_matrix"] = matrix_json(s.e_matrix);
    ojson wd = ojson::array();
    for (const auto& row : s.weight_dims) {
      ojson jr = ojson::array();
      for (const auto& x : row) jr.push_back(int_json(x));
      wd.push_back(jr);
    }
    js["weight_dims"] = wd;
    ojson ws = ojson::array();
    for (const auto& w : s.w_vectors) ws.push_back(vec_json(w, d));
    js["w_vectors"] = ws;
    ojson order = ojson::array();
    for (std::size_t i = 0; i < s.z.size(); ++i)
      for (std::size_t k = 0; k < s.z.size(); ++k)
        if (i != k && s.leq[i][k]) order.push_back(ojson::array({s.z[i].kappa.str(), s.z[k].kappa.str()}));
    js["order"] = order;
    ojson four = ojson::array();
    for (std::size_t i = 0; i < s.z.size(); ++i)
      four.push_back(ojson::array({s.z[i].kappa.str(), o.z[s.fourier[i]].kappa.str()}));
    js["fourier"] = four;
    ojson lt = ojson::array();
    for (std::size_t i = 0; i < s.l_table.size(); ++i) {
      const LRow& L = s.l_table[i];
      ojson e;
      e["kappa"] = s.z[i].kappa.str();
      e["s"] = d.basis[L.s_kappa].label;
      e["r"] = laurent_to_json(L.r_kappa);
      e["L_z"] = coords_json(L.L_z, s);
      e["L_w"] = coords_json(L.L_w, s);
      lt.push_back(std::move(e));
    }
    js["l_table"] = lt;
    ojson xi = ojson::array();
    for (auto i : s.xi) xi.push_back(s.z[i].kappa.str());
    js["xi"] = xi;
    sides.push_back(std::move(js));
  }
  j["sides"] = sides;
  ojson fs = ojson::array();
  for (const auto& f : all_findings(r)) fs.push_back({{"code", f.code}, {"message", f.message}});
  j["findings"] = fs;
  return j;
}

std::string run_to_csv(const RunResult& r, const ReportOptions& opt) {
  const GradedDatum& d = *r.datum;
  std::ostringstream out;
  bool first = true;
  for (const auto& s : r.sides) {
    if (!wanted(opt, s.n)) continue;
    if (!first) out << "\n";
    first = false;
    out << "# f n=" << s.n << "\n";
    out << "kappa";
    for (const auto& z : s.z) out << "," << field(z.kappa.str());
    out << "\n";
    for (std::size_t i = 0; i < s.z.size(); ++i) {
      out << field(s.z[i].kappa.str());
      for (std::size_t k = 0; k < s.z.size(); ++k) out << "," << cell(s.c_matrix(i, k));
      out << "\n";
    }
    out << "\n# weight_dims n=" << s.n << "\n";
    out << "basis";
    for (const auto& z : s.z) out << "," << field(z.kappa.str());
    out << "\n";
    for (std::size_t b = 0; b < d.size(); ++b) {
      out << field(d.basis[b].label);
      for (std::size_t k = 0; k < s.z.size(); ++k) out << "," << s.weight_dims[b][k].get_str();
      out << "\n";
    }
  }
  return out.str();
}

std::vector<CsvTable> parse_csv(const std::string& text) {
  std::vector<CsvTable> out;
  std::istringstream in(text);
  std::string line;
  auto split = [](const std::string& l) {
    std::vector<std::string> f;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < l.size(); ++i) {
      char c = l[i];
      if (quoted) {
        if (c == '"' && i + 1 < l.size() && l[i + 1] == '"') {
          cur += '"';
          ++i;
        } else if (c == '"') {
          quoted = false;
        } else {
          cur += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        f.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    f.push_back(cur);
    return f;
  };
  CsvTable* t = nullptr;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      out.push_back({});
      t = &out.back();
      t->title = line.substr(2);
      header = true;
      continue;
    }
    if (!t) throw ParseError("CSV row before any table title");
    auto f = split(line);
    if (header) {
      t->columns.assign(f.begin() + 1, f.end());
      header = false;
    } else {
      if (f.size() != t->columns.size() + 1) throw ParseError("CSV row has the wrong number of cells");
      t->row_labels.push_back(f[0]);
      t->cells.emplace_back(f.begin() + 1, f.end());
    }
  }
  return out;
}

}  // namespace gic
