#pragma once

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "m0n/basis.hpp"
#include "m0n/cohft.hpp"
#include "m0n/errors.hpp"
#include "m0n/linalg.hpp"
#include "m0n/monomial.hpp"
#include "m0n/rational.hpp"
#include "m0n/trees.hpp"

namespace m0n::json_io {

using json = nlohmann::json;

inline json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw input_error(path + ": " + e.what());
  }
}

inline json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw input_error(std::string("invalid JSON: ") + e.what());
  }
}

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw input_error(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline int as_int(const json& j, const char* what) {
  if (!j.is_number_integer()) throw input_error(std::string(what) + " must be an integer");
  return j.get<int>();
}

/// Rationals are strings "p/q"; plain JSON integers are accepted too.
inline Rational as_rational(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw input_error("rational values must be strings like \"-3/2\"");
}

inline json rational_json(const Rational& q) { return to_string(q); }

inline Subset subset_from_json(const json& j) {
  if (!j.is_array()) throw input_error("a set must be an array of labels");
  Subset s;
  int prev = 0;
  for (const auto& x : j) {
    const int label = as_int(x, "label");
    if (label <= prev) throw input_error("set labels must be strictly ascending");
    s.insert(label);
    prev = label;
  }
  return s;
}

inline json subset_json(Subset s) { return s.labels(); }

inline json family_json(const Family& f) {
  json out = json::array();
  for (Subset s : f) out.push_back(subset_json(s));
  return out;
}

/// {"n": 5, "sets": [[1,2,3]], "mult": [2]}; "mult" defaults to all ones.
inline DivisorMonomial monomial_from_json(const json& j) {
  const int n = as_int(field(j, "n"), "n");
  check_point_count(n);
  const json& sets = field(j, "sets");
  if (!sets.is_array()) throw input_error("'sets' must be an array");
  std::vector<int> mult(sets.size(), 1);
  if (j.contains("mult")) {
    const json& m = j.at("mult");
    if (!m.is_array() || m.size() != sets.size()) throw input_error("'mult' must align with 'sets'");
    for (std::size_t i = 0; i < m.size(); ++i) mult[i] = as_int(m[i], "multiplicity");
  }
  std::vector<Factor> f;
  for (std::size_t i = 0; i < sets.size(); ++i) f.push_back({subset_from_json(sets[i]), mult[i]});
  return DivisorMonomial(n, std::move(f));
}

inline json monomial_json(const DivisorMonomial& m) {
  json sets = json::array(), mult = json::array();
  for (const auto& f : m.factors()) {
    sets.push_back(subset_json(f.set));
    mult.push_back(f.exp);
  }
  return {{"n", m.n()}, {"sets", sets}, {"mult", mult}};
}

inline StableTree tree_from_json(const json& j) {
  const DivisorMonomial m = monomial_from_json(j);
  if (!m.is_nice()) throw input_error("the sets do not form a nice family");
  return StableTree::from_nice_family(m.n(), m.family());
}

inline json tree_json(const StableTree& t) { return {{"n", t.n()}, {"sets", family_json(t.sets())}}; }

inline json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(rational_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

inline Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw input_error("a matrix must be a non-empty array of rows");
  const int rows = static_cast<int>(j.size());
  const int cols = j[0].is_array() ? static_cast<int>(j[0].size()) : -1;
  if (cols <= 0) throw input_error("matrix rows must be non-empty arrays");
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != cols) throw input_error("ragged matrix");
    for (int c = 0; c < cols; ++c) m(r, c) = as_rational(j[r][c]);
  }
  return m;
}

inline json basis_element_json(const BasisElement& b) {
  return {{"sets", family_json(b.sets())}, {"exponents", b.exponents()}, {"root_exponent", b.root_exponent()}};
}

/// {"n", "order", "M"} and, on request, "Minv".
inline json gram_json(const PairingMatrices& pm, bool with_inverse) {
  json order = json::array();
  for (const auto& b : pm.order) order.push_back(b.to_string());
  json out = {{"n", pm.n}, {"order", order}, {"M", matrix_json(pm.M)}};
  if (with_inverse) out["Minv"] = matrix_json(pm.Minv);
  return out;
}

/// CSV with the basis order as header; integer-valued matrices only.
inline std::string matrix_csv(const PairingMatrices& pm, const Matrix& m) {
  std::ostringstream os;
  os << "\"\"";
  for (const auto& b : pm.order) os << ",\"" << b.to_string() << "\"";
  os << "\n";
  for (int i = 0; i < m.rows(); ++i) {
    os << "\"" << pm.order[i].to_string() << "\"";
    for (int j = 0; j < m.cols(); ++j) {
      if (!is_integer(m(i, j))) throw capability_error("CSV output is limited to integer matrices");
      os << "," << m(i, j).get_str();
    }
    os << "\n";
  }
  return os.str();
}

/// {"dim": 2, "metric": [["0","1"],["1","0"]], "truncation": 5,
///  "correlators": {"3": [{"idx": [1,1,2], "val": "1"}]}}, indices 1-based.
/// Without "truncation" the largest listed arity (at least 3) is used.
inline FrobeniusData frobenius_from_json(const json& j) {
  const int dim = as_int(field(j, "dim"), "dim");
  if (dim < 1) throw input_error("dim must be positive");
  const Matrix metric = matrix_from_json(field(j, "metric"));
  if (metric.rows() != dim || metric.cols() != dim) throw input_error("metric must be dim x dim");
  const json& corr = j.contains("correlators") ? j.at("correlators") : json::object();
  if (!corr.is_object()) throw input_error("'correlators' must be an object keyed by arity");
  int top = 3;
  for (const auto& [key, list] : corr.items()) {
    int arity = 0;
    try {
      std::size_t used = 0;
      arity = std::stoi(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw input_error("correlator arity key '" + key + "' is not an integer");
    }
    top = std::max(top, arity);
  }
  const int truncation = j.contains("truncation") ? as_int(j.at("truncation"), "truncation") : top;
  if (truncation < top) throw input_error("truncation is below a listed arity");
  FrobeniusData f(metric, truncation);
  for (const auto& [key, list] : corr.items()) {
    const int arity = std::stoi(key);
    if (!list.is_array()) throw input_error("correlators of each arity must be a list");
    for (const auto& entry : list) {
      const json& idx = field(entry, "idx");
      if (!idx.is_array() || static_cast<int>(idx.size()) != arity) throw input_error("index tuple length must equal its arity");
      std::vector<int> ix;
      for (const auto& x : idx) ix.push_back(as_int(x, "index") - 1);
      const Rational v = as_rational(field(entry, "val"));
      const Rational prev = f.get(ix);
      if (prev != 0 && prev != v) throw input_error("conflicting values for a permuted index tuple");
      f.set(ix, v);
    }
  }
  return f;
}

inline json frobenius_json(const FrobeniusData& f) {
  json corr = json::object();
  for (const auto& [arity, table] : f.tables()) {
    json list = json::array();
    for (const auto& [idx, v] : table) {
      std::vector<int> one;
      for (int a : idx) one.push_back(a + 1);
      list.push_back({{"idx", one}, {"val", rational_json(v)}});
    }
    if (!list.empty()) corr[std::to_string(arity)] = list;
  }
  return {{"dim", f.dim()}, {"metric", matrix_json(f.metric())}, {"truncation", f.max_arity()}, {"correlators", corr}};
}

inline std::string exponent_key(const std::vector<int>& alpha) {
  std::string s;
  for (std::size_t i = 0; i < alpha.size(); ++i) s += (i ? "," : "") + std::to_string(alpha[i]);
  return s;
}

/// {"dim": 4, "order": 6, "coeffs": {"1,0,2,0": "1/2", ...}}; keys are exponent vectors.
inline json potential_json(const FormalPotential& p) {
  json coeffs = json::object();
  for (const auto& [alpha, c] : p.coeffs)
    if (c != 0) coeffs[exponent_key(alpha)] = rational_json(c);
  return {{"dim", p.dim}, {"order", p.order}, {"coeffs", coeffs}};
}

inline FormalPotential potential_from_json(const json& j) {
  FormalPotential p;
  p.dim = as_int(field(j, "dim"), "dim");
  p.order = as_int(field(j, "order"), "order");
  const json& coeffs = field(j, "coeffs");
  if (!coeffs.is_object()) throw input_error("'coeffs' must be an object");
  for (const auto& [key, val] : coeffs.items()) {
    std::vector<int> alpha;
    std::stringstream ss(key);
    std::string part;
    while (std::getline(ss, part, ',')) {
      try {
        alpha.push_back(std::stoi(part));
      } catch (const std::exception&) {
        throw input_error("bad exponent key '" + key + "'");
      }
    }
    if (static_cast<int>(alpha.size()) != p.dim) throw input_error("exponent key '" + key + "' has the wrong length");
    p.coeffs[alpha] = as_rational(val);
  }
  return p;
}

}  // namespace m0n::json_io
