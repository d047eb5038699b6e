#pragma once

// Sparse JSON dumps of matrices and vectors:
//   {"rows": n, "cols": m, "entries": [[r, c, "re", "im"], ...]}
//   {"length": n, "entries": [[k, "re", "im"], ...]}
// Only nonzero entries are listed, sorted by position; "re" and "im" are the
// canonical "a/b" rational strings.

#include <json.hpp>

#include "cubetriple/matrix.hpp"

namespace cubetriple {

inline nlohmann::json matrix_to_json(const ExactMatrix& m) {
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const auto& x = m(r, c);
      if (x.is_zero()) continue;
      entries.push_back({r, c, x.re().to_string(), x.im().to_string()});
    }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

inline ExactMatrix matrix_from_json(const nlohmann::json& j) {
  try {
    ExactMatrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
    for (const auto& e : j.at("entries")) {
      auto r = e.at(0).get<std::size_t>();
      auto c = e.at(1).get<std::size_t>();
      if (r >= m.rows() || c >= m.cols()) throw Error(ErrorCode::parse_error, "entry index out of bounds");
      m(r, c) = GaussRat(Rational::parse(e.at(2).get<std::string>()), Rational::parse(e.at(3).get<std::string>()));
    }
    return m;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::parse_error, ex.what());
  }
}

inline nlohmann::json vector_to_json(const ExactVector& v) {
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k].is_zero()) continue;
    entries.push_back({k, v[k].re().to_string(), v[k].im().to_string()});
  }
  return {{"length", v.size()}, {"entries", std::move(entries)}};
}

inline ExactVector vector_from_json(const nlohmann::json& j) {
  try {
    ExactVector v(j.at("length").get<std::size_t>());
    for (const auto& e : j.at("entries")) {
      auto k = e.at(0).get<std::size_t>();
      if (k >= v.size()) throw Error(ErrorCode::parse_error, "entry index out of bounds");
      v[k] = GaussRat(Rational::parse(e.at(1).get<std::string>()), Rational::parse(e.at(2).get<std::string>()));
    }
    return v;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::parse_error, ex.what());
  }
}

}  // namespace cubetriple
