#include "heatbloch/serialize.hpp"

#include <fstream>

namespace heatbloch {

nlohmann::json to_json(const Vector& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Vector vector_from_json(const nlohmann::json& arr) {
  require(arr.is_array(), "serialize", "expected a numeric array");
  Vector v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    require(arr[i].is_number(), "serialize", "expected a numeric array");
    v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
  }
  return v;
}

nlohmann::json to_json(const HeatMap& F) {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : F.components()) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& term : c.terms()) {
      if (const auto* p = std::get_if<PolyTerm>(&term)) {
        terms.push_back({{"type", "poly"}, {"coef", p->coef}, {"degrees", p->degrees}});
      } else {
        const auto& k = std::get<KernelTerm>(term);
        terms.push_back({{"type", "kernel"}, {"coef", k.coef}, {"source", to_json(k.source)}});
      }
    }
    comps.push_back(std::move(terms));
  }
  return {{"m", F.dim()}, {"normalized", F.normalized()}, {"components", std::move(comps)}};
}

HeatMap heat_map_from_json(const nlohmann::json& doc) {
  try {
    const int m = doc.at("m").get<int>();
    const bool normalized = doc.value("normalized", false);
    std::vector<CaloricComponent> comps;
    for (const auto& jc : doc.at("components")) {
      std::vector<Term> terms;
      for (const auto& jt : jc) {
        const std::string type = jt.at("type").get<std::string>();
        const double coef = jt.at("coef").get<double>();
        if (type == "poly") {
          terms.emplace_back(PolyTerm{coef, jt.at("degrees").get<std::vector<int>>()});
        } else if (type == "kernel") {
          terms.emplace_back(KernelTerm{coef, vector_from_json(jt.at("source"))});
        } else {
          throw InvalidInput("serialize", "unknown term type '" + type + "'");
        }
      }
      comps.emplace_back(m, std::move(terms));
    }
    return HeatMap(m, std::move(comps), normalized);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("serialize", std::string("malformed map document: ") + e.what());
  }
}

HeatMap load_heat_map(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("serialize", "cannot open map document " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("serialize", path.string() + ": " + e.what());
  }
  return heat_map_from_json(doc);
}

void save_heat_map(const HeatMap& F, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("serialize", "cannot write " + path.string());
  out << to_json(F).dump(2) << '\n';
}

}  // namespace heatbloch
