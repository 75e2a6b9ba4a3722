#include <fstream>
#include <sstream>

#include "gic/datum_model.hpp"
#include "gic/errors.hpp"
#include "gic/report.hpp"
#include "json.hpp"

namespace gic {

using json = nlohmann::json;

namespace {

struct Loader {
  const json* defs = nullptr;
  std::map<std::string, std::shared_ptr<const GradedDatum>> built;
  std::vector<std::string> stack;

  static const json& need(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) throw ParseError((where.empty() ? std::string("datum") : where) + ": missing field '" + key + "'");
    return j.at(key);
  }

  std::shared_ptr<const GradedDatum> child(const json& j, const std::string& where) {
    if (j.is_string()) {
      std::string nm = j.get<std::string>();
      if (auto it = built.find(nm); it != built.end()) return it->second;
      if (!defs || !defs->contains(nm)) throw ParseError(where + ": unknown child reference '" + nm + "'");
      if (std::find(stack.begin(), stack.end(), nm) != stack.end())
        throw DatumInvalid("child references form a cycle through '" + nm + "'");
      stack.push_back(nm);
      auto d = std::make_shared<const GradedDatum>(datum(defs->at(nm), nm));
      stack.pop_back();
      built[nm] = d;
      return d;
    }
    return std::make_shared<const GradedDatum>(datum(j, where));
  }

  GradedDatum datum(const json& j, const std::string& where) {
    GradedDatum d;
    try {
      d.name = need(j, "name", where).get<std::string>();
      std::string at = where.empty() ? d.name : where;
      auto delta = need(j, "delta", at).get<std::vector<int>>();
      if (delta.size() != 2 || delta[0] + delta[1] != 0 || delta[0] == 0)
        throw ParseError(at + ": delta must be [n,-n] with n != 0");
      d.n = delta[0];
      for (const auto& b : need(j, "basis", at))
        d.basis.push_back({b.at("index").get<std::size_t>(), b.at("label").get<std::string>()});
      for (const auto& c : need(j, "primitive_classes", at)) {
        PrimitiveClass pc;
        pc.id = c.at("id").get<std::size_t>();
        pc.dual = c.at("dual").get<std::size_t>();
        pc.c_F = c.at("c_F").get<int>();
        pc.members = c.at("members").get<std::vector<std::size_t>>();
        pc.theta_ratio = laurent_from_json(c.at("theta_ratio"));
        d.classes.push_back(std::move(pc));
      }
      for (const auto& o : need(j, "pairing", at))
        d.pairing.push_back({o.at("s").get<std::size_t>(), o.at("s_prime").get<std::size_t>(), o.at("tau").get<int>()});
      d.sigma = need(j, "sigma", at).get<std::vector<std::size_t>>();
      for (const auto& [k, list] : need(j, "orbits", at).items())
        for (const auto& o : list) d.orbits[std::stoi(k)].push_back({o.at("name").get<std::string>(), o.at("dim").get<int>()});
      if (j.contains("closure"))
        for (const auto& [k, list] : j.at("closure").items())
          for (const auto& p : list)
            d.closure[std::stoi(k)].emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
      if (j.contains("etas"))
        for (const auto& [k, list] : j.at("etas").items()) {
          int deg = std::stoi(k);
          std::size_t id = 0;
          for (const auto& e : list) {
            EtaClass eta;
            eta.id = id++;
            eta.n = deg;
            eta.d_eta = e.at("d").get<int>();
            eta.orbit = e.at("orbit").get<std::string>();
            eta.child = child(e.at("child"), at + "/eta");
            for (const auto& p : e.at("induction"))
              eta.induction.emplace_back(p.at(0).get<std::size_t>(), p.at(1).get<std::size_t>());
            d.etas[deg].push_back(std::move(eta));
          }
        }
      const json& leaf = need(j, "leaf", at);
      d.leaf.rigid = leaf.at("rigid").get<bool>();
      if (leaf.contains("cprime"))
        for (const auto& c : leaf.at("cprime"))
          d.leaf.cprime.push_back({c.at("s_F").get<std::size_t>(), laurent_from_json(c.at("r_F")),
                                   c.value("kappa_label", std::string("triv"))});
      if (j.contains("open_labels"))
        for (const auto& r : j.at("open_labels"))
          d.open_labels.push_back({r.at("partner_orbit").get<std::string>(), r.at("partner_ls").get<std::string>(),
                                   r.at("label").get<std::string>()});
      if (j.contains("theta_G")) d.theta_G = laurent_from_json(j.at("theta_G"));
    } catch (const json::exception& e) {
      throw ParseError((where.empty() ? d.name : where) + ": " + e.what());
    }
    return d;
  }
};

}  // namespace

GradedDatum load_table_datum(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  Loader L;
  if (j.contains("definitions")) L.defs = &j.at("definitions");
  GradedDatum d = L.datum(j, "");
  auto findings = validate_datum(d);
  if (!findings.empty()) throw DatumInvalid(findings.front().code + ": " + findings.front().message);
  return d;
}

GradedDatum load_table_datum_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open datum file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_table_datum(ss.str());
}

}  // namespace gic
