#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "kbott/bott_samelson.hpp"
#include "kbott/error.hpp"
#include "kbott/laurent.hpp"
#include "kbott/presentation.hpp"
#include "kbott/quotient.hpp"
#include "kbott/tower.hpp"

namespace kbott {

// All emitted documents use insertion-ordered JSON so output bytes are a
// pure function of the data.
using json = nlohmann::ordered_json;

namespace detail {

inline const json& require_field(const json& doc, const std::string& key,
                                 const std::string& path) {
  if (!doc.is_object())
    throw_validation(path + ": expected an object");
  auto it = doc.find(key);
  if (it == doc.end())
    throw_validation(path + "/" + key + ": missing");
  return *it;
}

inline std::int64_t require_int(const json& value, const std::string& path) {
  if (!value.is_number_integer())
    throw_validation(path + ": expected an integer");
  return value.get<std::int64_t>();
}

inline const json& require_array(const json& value, const std::string& path) {
  if (!value.is_array())
    throw_validation(path + ": expected an array");
  return value;
}

}  // namespace detail

inline json parse_json_text(const std::string& text, const std::string& what) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded())
    throw_validation(what + ": not valid JSON");
  return doc;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_usage("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// ---------------------------------------------------------------------------
// Tower spec documents: {"stages": [n_1, ...], "matrices": [{"l", "j",
// "entries"}, ...]}. Parsing validates structure and the tower itself.

inline TowerSpec parse_spec(const json& doc) {
  TowerSpec spec;
  const json& stages = detail::require_array(
      detail::require_field(doc, "stages", ""), "/stages");
  for (std::size_t i = 0; i < stages.size(); ++i) {
    const std::string path = "/stages/" + std::to_string(i);
    const std::int64_t n = detail::require_int(stages[i], path);
    if (n < 1 || n > 1'000'000)
      throw_validation(path + ": stage dimension out of range");
    spec.dims.push_back(static_cast<int>(n));
  }

  if (doc.contains("matrices")) {
    const json& mats = detail::require_array(doc["matrices"], "/matrices");
    for (std::size_t i = 0; i < mats.size(); ++i) {
      const std::string path = "/matrices/" + std::to_string(i);
      const json& entry = mats[i];
      const std::int64_t l =
          detail::require_int(detail::require_field(entry, "l", path), path + "/l");
      const std::int64_t j =
          detail::require_int(detail::require_field(entry, "j", path), path + "/j");
      const json& rows = detail::require_array(
          detail::require_field(entry, "entries", path), path + "/entries");
      std::vector<std::vector<std::int64_t>> data;
      for (std::size_t r = 0; r < rows.size(); ++r) {
        const std::string row_path = path + "/entries/" + std::to_string(r);
        const json& row = detail::require_array(rows[r], row_path);
        std::vector<std::int64_t> out_row;
        for (std::size_t c = 0; c < row.size(); ++c)
          out_row.push_back(detail::require_int(
              row[c], row_path + "/" + std::to_string(c)));
        data.push_back(std::move(out_row));
      }
      if (data.empty()) throw_validation(path + "/entries: empty matrix");
      for (const auto& row : data)
        if (row.size() != data.front().size())
          throw_validation(path + "/entries: ragged rows");
      if (spec.matrices.contains({static_cast<int>(l), static_cast<int>(j)}))
        throw_validation(path + ": duplicate matrix for (l=" +
                         std::to_string(l) + ", j=" + std::to_string(j) + ")");
      spec.matrices[{static_cast<int>(l), static_cast<int>(j)}] =
          PMatrix::from_rows(data);
    }
  }

  validate_tower(spec);
  return spec;
}

inline TowerSpec parse_spec_text(const std::string& text) {
  return parse_spec(parse_json_text(text, "spec document"));
}

inline json emit_spec(const TowerSpec& spec) {
  json doc;
  doc["stages"] = json::array();
  for (int n : spec.dims) doc["stages"].push_back(n);
  doc["matrices"] = json::array();
  // Canonical order: by target stage j, then source stage l.
  for (int j = 2; j <= spec.stages(); ++j)
    for (int l = 1; l < j; ++l) {
      const PMatrix& p = spec.matrix(l, j);
      json m;
      m["l"] = l;
      m["j"] = j;
      json rows = json::array();
      for (int r = 1; r <= p.rows; ++r) {
        json row = json::array();
        for (int c = 1; c <= p.cols; ++c) row.push_back(p.at(r, c));
        rows.push_back(std::move(row));
      }
      m["entries"] = std::move(rows);
      doc["matrices"].push_back(std::move(m));
    }
  return doc;
}

// ---------------------------------------------------------------------------
// Cartan and word documents.

inline CartanSpec parse_cartan(const json& doc) {
  CartanSpec cartan;
  cartan.rank = static_cast<int>(detail::require_int(
      detail::require_field(doc, "rank", ""), "/rank"));
  const json& rows = detail::require_array(
      detail::require_field(doc, "matrix", ""), "/matrix");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::string path = "/matrix/" + std::to_string(r);
    const json& row = detail::require_array(rows[r], path);
    std::vector<std::int64_t> out_row;
    for (std::size_t c = 0; c < row.size(); ++c)
      out_row.push_back(
          detail::require_int(row[c], path + "/" + std::to_string(c)));
    cartan.entries.push_back(std::move(out_row));
  }
  validate_cartan(cartan);
  return cartan;
}

inline CartanSpec parse_cartan_text(const std::string& text) {
  return parse_cartan(parse_json_text(text, "cartan document"));
}

// {"word": [[1,2],[1,2]]}; a bare integer element is shorthand for a
// singleton row. Enumeration validity is checked by the operations that
// need it, not here.
inline SubsetSequence parse_word(const json& doc) {
  SubsetSequence seq;
  const json& rows = detail::require_array(
      detail::require_field(doc, "word", ""), "/word");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::string path = "/word/" + std::to_string(r);
    std::vector<int> row;
    if (rows[r].is_number_integer()) {
      row.push_back(static_cast<int>(detail::require_int(rows[r], path)));
    } else {
      const json& cells = detail::require_array(rows[r], path);
      for (std::size_t c = 0; c < cells.size(); ++c)
        row.push_back(static_cast<int>(detail::require_int(
            cells[c], path + "/" + std::to_string(c))));
    }
    seq.rows.push_back(std::move(row));
  }
  return seq;
}

inline SubsetSequence parse_word_text(const std::string& text) {
  return parse_word(parse_json_text(text, "word document"));
}

// Rows that are all singletons collapse to a plain word vector.
inline std::vector<int> require_singleton_word(const SubsetSequence& seq) {
  std::vector<int> word;
  for (std::size_t r = 0; r < seq.rows.size(); ++r) {
    if (seq.rows[r].size() != 1)
      throw_validation("/word/" + std::to_string(r) +
                       ": expected a singleton row for this operation");
    word.push_back(seq.rows[r].front());
  }
  return word;
}

// ---------------------------------------------------------------------------
// Presentations and quotient elements. Coefficients are decimal strings so
// no consumer ever faces integer-precision surprises.

inline json emit_variable_list(const std::vector<VarId>& vars) {
  json out = json::array();
  for (const VarId& v : vars) out.push_back(v.json_name());
  return out;
}

inline json emit_terms(const LaurentPolynomial& poly) {
  json terms = json::array();
  for (const auto& [e, c] : poly.terms()) {
    json term;
    term["coeff"] = c.str();
    json exps = json::object();
    for (const auto& [v, exp] : e.entries()) exps[v.json_name()] = exp;
    term["exponents"] = std::move(exps);
    terms.push_back(std::move(term));
  }
  return terms;
}

inline json emit_presentation(const Presentation& pres) {
  json doc = emit_spec(pres.spec);
  doc["variables"] = emit_variable_list(pres.variables);
  json relations = json::array();
  for (const Relation& rel : pres.relations) {
    json r;
    r["stage"] = rel.stage;
    r["r"] = rel.r;
    r["terms"] = emit_terms(rel.poly);
    relations.push_back(std::move(r));
  }
  doc["relations"] = std::move(relations);
  return doc;
}

inline VarId parse_variable_name(const std::string& name,
                                 const std::string& path) {
  // Expected shape: y_<stage>_<slot>
  if (name.size() < 5 || name[0] != 'y' || name[1] != '_')
    throw_validation(path + ": malformed variable name '" + name + "'");
  const std::size_t second = name.find('_', 2);
  if (second == std::string::npos || second + 1 >= name.size())
    throw_validation(path + ": malformed variable name '" + name + "'");
  try {
    const int j = std::stoi(name.substr(2, second - 2));
    const int k = std::stoi(name.substr(second + 1));
    if (j < 1 || k < 1) throw std::invalid_argument("range");
    return VarId{j, k};
  } catch (const std::exception&) {
    throw_validation(path + ": malformed variable name '" + name + "'");
  }
}

inline LaurentPolynomial parse_terms(const json& terms,
                                     const std::string& path) {
  LaurentPolynomial poly;
  detail::require_array(terms, path);
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const std::string term_path = path + "/" + std::to_string(t);
    const json& term = terms[t];
    const json& coeff = detail::require_field(term, "coeff", term_path);
    if (!coeff.is_string())
      throw_validation(term_path + "/coeff: expected a decimal string");
    Int c;
    try {
      c = Int(coeff.get<std::string>());
    } catch (const std::exception&) {
      throw_validation(term_path + "/coeff: not a decimal integer");
    }
    const json& exps = detail::require_field(term, "exponents", term_path);
    if (!exps.is_object())
      throw_validation(term_path + "/exponents: expected an object");
    ExponentVector e;
    for (const auto& [key, value] : exps.items()) {
      const VarId v = parse_variable_name(key, term_path + "/exponents");
      e.set_exponent(v, detail::require_int(value, term_path + "/exponents/" + key));
    }
    poly.add_term(e, c);
  }
  return poly;
}

inline Presentation parse_presentation(const json& doc) {
  Presentation pres;
  pres.spec = parse_spec(doc);
  const json& vars = detail::require_array(
      detail::require_field(doc, "variables", ""), "/variables");
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const std::string path = "/variables/" + std::to_string(i);
    if (!vars[i].is_string()) throw_validation(path + ": expected a string");
    pres.variables.push_back(
        parse_variable_name(vars[i].get<std::string>(), path));
  }
  const json& relations = detail::require_array(
      detail::require_field(doc, "relations", ""), "/relations");
  for (std::size_t i = 0; i < relations.size(); ++i) {
    const std::string path = "/relations/" + std::to_string(i);
    const json& r = relations[i];
    Relation rel;
    rel.stage = static_cast<int>(detail::require_int(
        detail::require_field(r, "stage", path), path + "/stage"));
    rel.r = static_cast<int>(detail::require_int(
        detail::require_field(r, "r", path), path + "/r"));
    rel.poly = parse_terms(detail::require_field(r, "terms", path),
                           path + "/terms");
    pres.relations.push_back(std::move(rel));
  }
  return pres;
}

inline json emit_quotient_element(const QuotientElement& q) {
  return emit_terms(q.to_polynomial());
}

inline json emit_mult_matrix(const std::vector<std::vector<Int>>& m) {
  json rows = json::array();
  for (const auto& row : m) {
    json r = json::array();
    for (const Int& c : row) r.push_back(c.str());
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace kbott
