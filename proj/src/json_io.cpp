#include <cmath>

#include "orbis/error.hpp"
#include "orbis/io.hpp"

namespace orbis {

using nlohmann::json;

json to_json(const Moebius& m) {
  return {{"a", round15(m.a)}, {"b", round15(m.b)}, {"c", round15(m.c)}, {"d", round15(m.d)}};
}

Moebius moebius_from_json(const json& j) {
  double e[4];
  if (j.is_object()) {
    const char* keys[4] = {"a", "b", "c", "d"};
    for (int k = 0; k < 4; ++k) {
      if (!j.contains(keys[k]) || !j[keys[k]].is_number()) {
        throw Error(ErrorCode::InvalidInput, "matrix needs numeric entries a, b, c, d");
      }
      e[k] = j[keys[k]].get<double>();
    }
  } else if (j.is_array() && j.size() == 4) {
    for (std::size_t k = 0; k < 4; ++k) {
      if (!j[k].is_number()) throw Error(ErrorCode::InvalidInput, "matrix entries must be numbers");
      e[k] = j[k].get<double>();
    }
  } else {
    throw Error(ErrorCode::InvalidInput, "a matrix is {\"a\":..,\"b\":..,\"c\":..,\"d\":..}");
  }
  const Moebius m{e[0], e[1], e[2], e[3]};
  if (std::abs(m.det() - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidInput, "generator determinant must be 1");
  }
  return m;
}

HyperbolicStructure structure_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidInput, "structure JSON must be an object");
  try {
    OrbifoldSignature sig(j.value("genus", 0), j.value("cone_orders", std::vector<int>{}));
    std::optional<std::vector<Moebius>> gens;
    if (j.contains("generators")) {
      gens.emplace();
      for (const auto& g : j.at("generators")) gens->push_back(moebius_from_json(g));
    }
    return make_structure(sig, std::move(gens));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("structure JSON: ") + e.what());
  }
}

json to_json(const HyperbolicStructure& s) {
  json j{{"genus", s.signature.genus},
         {"cone_orders", s.signature.cone_orders},
         {"area", round15(s.area)}};
  if (s.generators) {
    json gens = json::array();
    for (const auto& g : *s.generators) gens.push_back(to_json(g));
    j["generators"] = gens;
  }
  return j;
}

json spectrum_entry_json(const SpectrumEntry& e) {
  json j{{"length", round15(e.length)}, {"multiplicity", e.multiplicity}, {"primitive", true}};
  if (!e.word.empty()) j["word"] = e.word;
  return j;
}

json trace_sidecar(const MollifiedTrace& trace, double area) {
  return {{"sigma", round15(trace.sigma)}, {"area", round15(area)}, {"parts", trace.parts}};
}

MollifiedTrace trace_from(SampledFunction samples, const json& sidecar, double* area) {
  if (samples.variable != "t") throw Error(ErrorCode::InvalidInput, "wave trace CSV must be in t");
  try {
    MollifiedTrace trace;
    trace.sigma = sidecar.at("sigma").get<double>();
    trace.parts = sidecar.value("parts", std::vector<std::string>{"identity", "singular", "smooth"});
    trace.samples = std::move(samples);
    if (area) *area = sidecar.at("area").get<double>();
    if (!(trace.sigma > 0.0)) throw Error(ErrorCode::InvalidInput, "sidecar sigma must be positive");
    return trace;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("trace sidecar: ") + e.what());
  }
}

json rounded(json j) {
  if (j.is_number_float()) return round15(j.get<double>());
  if (j.is_array() || j.is_object()) {
    for (auto& x : j) x = rounded(x);
  }
  return j;
}

}  // namespace orbis
