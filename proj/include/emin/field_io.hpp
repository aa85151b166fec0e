#pragma once

// JSON field files.
//
//   {"label": "sqrt2", "min_poly": ["-2", "0", "1"],
//    "integral_basis": [["1","0"], ["0","1"]],     // optional, power coordinates
//    "fundamental_units": [["1","1"]],             // integral-basis coordinates
//    "torsion": 2,                                 // optional
//    "generator_in_K": ["0","1","0","0"]}          // subfield files only

#include "emin/cm.hpp"
#include "emin/quadratic_units.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace emin {

using json = nlohmann::json;

namespace detail {

inline Rational json_rational(const json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(Integer(std::to_string(v.get<long long>())));
  throw InputError("expected a rational string, got " + v.dump());
}

inline RationalVector json_vector(const json& v) {
  if (!v.is_array()) throw InputError("expected an array, got " + v.dump());
  RationalVector out;
  for (const auto& x : v) out.push_back(json_rational(x));
  return out;
}

}  // namespace detail

inline json to_json(const Rational& q) { return to_string(q); }

inline json to_json(const FieldElement& x) {
  json a = json::array();
  for (const auto& c : x.coords()) a.push_back(to_string(c));
  return a;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open field file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("malformed JSON in '" + path + "': " + e.what());
  }
}

/// Builds a field from a parsed field file. Real quadratic fields without
/// units get their fundamental unit computed.
inline NumberField field_from_json(const json& j, bool allow_degree_one = false) {
  if (!j.is_object() || !j.contains("min_poly")) throw InputError("field file needs a 'min_poly' array");
  std::vector<Integer> mp;
  for (const auto& c : detail::json_vector(j.at("min_poly"))) {
    if (c.get_den() != 1) throw InputError("min_poly coefficients must be integers");
    mp.push_back(c.get_num());
  }
  NumberField::Options o;
  o.allow_degree_one = allow_degree_one;
  if (j.contains("label")) o.label = j.at("label").get<std::string>();
  if (j.contains("integral_basis")) {
    const json& b = j.at("integral_basis");
    if (!b.is_array()) throw InputError("integral_basis must be an array");
    std::size_t d = mp.size() - 1;
    RationalMatrix m(d, RationalVector(d));
    if (b.size() != d) throw InputError("integral_basis must list d elements");
    for (std::size_t col = 0; col < d; ++col) {
      RationalVector e = detail::json_vector(b[col]);
      if (e.size() != d) throw InputError("integral_basis entries must have length d");
      for (std::size_t row = 0; row < d; ++row) m[row][col] = e[row];
    }
    o.integral_basis = m;
  }
  if (j.contains("fundamental_units"))
    for (const auto& u : j.at("fundamental_units")) o.units.push_back(detail::json_vector(u));
  if (j.contains("torsion")) o.torsion = j.at("torsion").get<int>();
  return with_quadratic_unit(NumberField::create(mp, o));
}

inline NumberField load_field(const std::string& path) { return field_from_json(read_json_file(path)); }

inline Subfield subfield_from_json(const json& j, const NumberField& K) {
  NumberField F = field_from_json(j, true);
  if (!j.contains("generator_in_K")) throw InputError("subfield file needs 'generator_in_K'");
  RationalVector g = detail::json_vector(j.at("generator_in_K"));
  if (g.size() != static_cast<std::size_t>(K.degree())) throw InputError("generator_in_K has the wrong length");
  return {F, K.element(g)};
}

inline Subfield load_subfield(const std::string& path, const NumberField& K) {
  return subfield_from_json(read_json_file(path), K);
}

/// "a0/q,a1/q,..." -> element of K.
inline FieldElement parse_point(const NumberField& K, const std::string& text) {
  RationalVector c;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) c.push_back(parse_rational(part));
  if (c.size() != static_cast<std::size_t>(K.degree()))
    throw InputError("point must have " + std::to_string(K.degree()) + " coordinates");
  return K.element(std::move(c));
}

}  // namespace emin
