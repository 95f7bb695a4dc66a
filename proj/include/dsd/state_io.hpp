#pragma once

// State files: {"da":3,"db":3,"mat":[[re,im],...]} with (da*db)^2 row-major entries.

#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "dsd/error.hpp"
#include "dsd/qstate.hpp"

namespace dsd {

inline nlohmann::json state_to_json(const DensityMatrix& rho) {
  nlohmann::json mat = nlohmann::json::array();
  for (const auto& z : rho.matrix().entries()) mat.push_back({z.real(), z.imag()});
  return {{"da", rho.dims().da}, {"db", rho.dims().db}, {"mat", std::move(mat)}};
}

inline DensityMatrix state_from_json(const nlohmann::json& j) {
  try {
    const auto da = j.at("da").get<std::size_t>();
    const auto db = j.at("db").get<std::size_t>();
    const Dims dims(da, db);
    const auto& mat = j.at("mat");
    if (!mat.is_array() || mat.size() != dims.total() * dims.total()) {
      throw Error(Errc::BadShape, "\"mat\" must hold " + std::to_string(dims.total() * dims.total()) + " entries");
    }
    std::vector<cplx> entries;
    entries.reserve(mat.size());
    for (const auto& e : mat) {
      if (!e.is_array() || e.size() != 2) throw Error(Errc::BadShape, "entries must be [re, im] pairs");
      entries.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return make_state(dims, ComplexMatrix(dims.total(), dims.total(), std::move(entries)));
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::BadShape, std::string("malformed state JSON: ") + e.what());
  }
}

/// Parse failures (syntax, schema, validation) raise dsd::Error.
inline DensityMatrix parse_state(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::BadShape, std::string("malformed state JSON: ") + e.what());
  }
  return state_from_json(j);
}

}  // namespace dsd
