#include "bowenlab/system.hpp"

#include <cmath>
#include <fstream>

#include "json.hpp"

namespace bowenlab {

using nlohmann::json;

std::vector<std::string> registry_names() {
  return {"linear_ifs1", "linear_ifs2", "cont_frac", "finite_markov"};
}

SystemDescription registry_system(const std::string& name, double a) {
  SystemDescription sys;
  sys.name = name;
  if (name == "linear_ifs1") {
    if (std::isnan(a)) a = 10.0;
    sys.depth_one.weights.kind = PerturbedWeightFamily::Kind::Geometric;
    sys.depth_one.weights.base_ratio = 5.0;
    sys.depth_one.weights.coeff_ratios = {a};
    sys.depth_one.weights.coeff_scales = {1.0};
    sys.depth_one.name = name;
  } else if (name == "linear_ifs2") {
    sys.depth_one.weights.kind = PerturbedWeightFamily::Kind::Geometric;
    sys.depth_one.weights.base_ratio = 5.0;
    sys.depth_one.weights.coeff_ratios = {4.0, 3.0};
    sys.depth_one.weights.coeff_scales = {1.0, 1.0};
    sys.depth_one.name = name;
  } else if (name == "cont_frac") {
    sys.contfrac = true;
    sys.cf.full_alphabet = false;
    sys.cf.edges.clear();
    for (int e = 2; e <= 20; ++e) sys.cf.edges.push_back(e);
    sys.cf.a = std::isnan(a) ? 1.0 : a;
  } else if (name == "finite_markov") {
    sys.depth_one.graph = build_graph(
        {"u", "v"},
        {{"e1", "u", "u"}, {"e2", "u", "v"}, {"e3", "v", "u"}});
    sys.depth_one.weights.kind = PerturbedWeightFamily::Kind::Tabulated;
    sys.depth_one.weights.tab_base = {0.30, 0.25, 0.20};
    sys.depth_one.weights.tab_coeffs = {{0.02, 0.01, 0.03}};
    sys.depth_one.name = name;
  } else {
    throw Error(ErrorCode::SchemaViolation, "unknown registry name: " + name);
  }
  return sys;
}

namespace {

PerturbedWeightFamily parse_weights(const json& w) {
  PerturbedWeightFamily fam;
  const std::string kind = w.value("kind", "geometric");
  if (kind == "geometric") {
    fam.kind = PerturbedWeightFamily::Kind::Geometric;
    fam.base_ratio = w.value("base_ratio", 5.0);
    fam.base_scale = w.value("base_scale", 1.0);
    if (w.contains("coeff_ratios"))
      fam.coeff_ratios = w.at("coeff_ratios").get<std::vector<double>>();
    if (w.contains("coeff_scales"))
      fam.coeff_scales = w.at("coeff_scales").get<std::vector<double>>();
    if (fam.coeff_scales.empty())
      fam.coeff_scales.assign(fam.coeff_ratios.size(), 1.0);
    if (fam.coeff_scales.size() != fam.coeff_ratios.size())
      throw Error(ErrorCode::SchemaViolation,
                  "weights: coeff_scales/coeff_ratios length mismatch");
  } else if (kind == "power_law") {
    fam.kind = PerturbedWeightFamily::Kind::PowerLaw;
    fam.beta = w.value("beta", 2.0);
  } else if (kind == "tabulated") {
    fam.kind = PerturbedWeightFamily::Kind::Tabulated;
    fam.tab_base = w.at("base").get<std::vector<double>>();
    if (w.contains("coeffs"))
      fam.tab_coeffs = w.at("coeffs").get<std::vector<std::vector<double>>>();
    for (const auto& row : fam.tab_coeffs)
      if (row.size() != fam.tab_base.size())
        throw Error(ErrorCode::SchemaViolation,
                    "weights: coefficient row length != base length");
  } else {
    throw Error(ErrorCode::SchemaViolation, "weights.kind: " + kind);
  }
  if (w.contains("eps_max")) fam.eps_max = w.at("eps_max").get<double>();
  return fam;
}

}  // namespace

SystemDescription load_system_file(const std::string& path, double a_override) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::SchemaViolation, "cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaViolation,
                path + ": " + std::string(e.what()));
  }
  try {
    if (doc.contains("registry")) {
      double a = a_override;
      if (std::isnan(a) && doc.contains("a")) a = doc.at("a").get<double>();
      SystemDescription sys =
          registry_system(doc.at("registry").get<std::string>(), a);
      if (doc.contains("name")) sys.name = doc.at("name").get<std::string>();
      if (doc.contains("trunc")) {
        int t = doc.at("trunc").get<int>();
        sys.depth_one.fixed_trunc = t;
        sys.cf.trunc = t;
      }
      if (doc.contains("edges") && sys.contfrac) {
        sys.cf.edges = doc.at("edges").get<std::vector<int>>();
        sys.cf.full_alphabet = false;
      }
      return sys;
    }
    SystemDescription sys;
    sys.name = doc.value("name", "custom");
    if (doc.contains("graph")) {
      const json& g = doc.at("graph");
      std::vector<EdgeSpec> specs;
      for (const auto& e : g.at("edges"))
        specs.push_back({e.at("id").get<std::string>(),
                         e.at("from").get<std::string>(),
                         e.at("to").get<std::string>()});
      sys.depth_one.graph =
          build_graph(g.at("vertices").get<std::vector<std::string>>(), specs);
    }
    if (!doc.contains("weights"))
      throw Error(ErrorCode::SchemaViolation, path + ": missing weights");
    sys.depth_one.weights = parse_weights(doc.at("weights"));
    if (!std::isnan(a_override) && !sys.depth_one.weights.coeff_ratios.empty())
      sys.depth_one.weights.coeff_ratios[0] = a_override;
    if (sys.depth_one.weights.kind == PerturbedWeightFamily::Kind::Tabulated &&
        sys.depth_one.graph.num_edges() > 0 &&
        sys.depth_one.weights.tabulated_size() !=
            sys.depth_one.graph.num_edges())
      throw Error(ErrorCode::SchemaViolation,
                  path + ": tabulated weights do not match edge count");
    if (doc.contains("trunc"))
      sys.depth_one.fixed_trunc = doc.at("trunc").get<int>();
    sys.depth_one.name = sys.name;
    return sys;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaViolation, path + ": " + std::string(e.what()));
  }
}

}  // namespace bowenlab
