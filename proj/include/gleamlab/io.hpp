#pragma once

// Text and JSON input formats.
//
//   PD text:     one crossing per line, "X a b c d" (or "X[a,b,c,d]");
//                '#' starts a comment; no crossings means the unknot.
//   Braid text:  "braid s=3 [1,-2,1,-2]"
//   JSON:        {"pd": [[a,b,c,d], ...]} or {"braid": {"strands": s, "word": [...]}}
//   Template:    {"base": <pd|braid>, "sites": [...], "fiber_mode": "...", "strands": s?}
//   Singular:    template fields plus {"singular_sites": [...], "beta": {"<id>": 0|1}}

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gleamlab/diagram.hpp"
#include "gleamlab/error.hpp"
#include "gleamlab/exactalg.hpp"
#include "gleamlab/family.hpp"
#include "gleamlab/singular.hpp"

namespace gleamlab {

using json = nlohmann::json;

/// A parsed diagram, remembering the braid it came from (if any) so that
/// templates can append full twists.
struct DiagramSource {
  KnotDiagram diagram;
  std::optional<BraidWord> braid;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline long parse_long(const std::string& tok, const std::string& where) {
  try {
    std::size_t used = 0;
    long v = std::stol(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(where + ": expected an integer, got '" + tok + "'");
  }
}

inline std::vector<long> parse_int_list(std::string text, const std::string& where) {
  for (char& c : text) {
    if (c == ',' || c == '[' || c == ']') c = ' ';
  }
  std::istringstream is(text);
  std::vector<long> out;
  std::string tok;
  while (is >> tok) out.push_back(parse_long(tok, where));
  return out;
}

}  // namespace detail

inline BraidWord parse_braid_text(const std::string& line) {
  // braid s=<strands> [w1,w2,...]
  std::string rest = detail::trim(line);
  if (rest.rfind("braid", 0) != 0) throw ParseError("braid line must start with 'braid'");
  rest = detail::trim(rest.substr(5));
  if (rest.rfind("s=", 0) != 0) throw ParseError("braid line needs 's=<strands>'");
  std::size_t bracket = rest.find('[');
  if (bracket == std::string::npos || rest.find(']') == std::string::npos) {
    throw ParseError("braid line needs a bracketed word, e.g. [1,-2,1,-2]");
  }
  BraidWord w;
  w.strands = static_cast<int>(detail::parse_long(detail::trim(rest.substr(2, bracket - 2)), "braid strand count"));
  for (long g : detail::parse_int_list(rest.substr(bracket, rest.find(']') - bracket + 1), "braid word")) {
    w.letters.push_back(static_cast<int>(g));
  }
  w.check();
  return w;
}

inline PdCode parse_pd_text(const std::string& text) {
  PdCode pd;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(lineno);
    if (line[0] != 'X') throw ParseError(where + ": expected 'X a b c d'");
    auto labels = detail::parse_int_list(line.substr(1), where);
    if (labels.size() != 4) throw ParseError(where + ": a crossing needs exactly 4 edge labels");
    PdCrossing x{};
    for (int i = 0; i < 4; ++i) {
      if (labels[static_cast<std::size_t>(i)] <= 0) throw ParseError(where + ": edge labels must be positive");
      x[static_cast<std::size_t>(i)] = static_cast<int>(labels[static_cast<std::size_t>(i)]);
    }
    pd.push_back(x);
  }
  return pd;
}

inline BraidWord braid_from_json(const json& j, std::optional<int> strands_hint = std::nullopt) {
  BraidWord w;
  if (j.is_array()) {
    if (!strands_hint) throw ParseError("braid given as a bare word needs a \"strands\" field");
    w.strands = *strands_hint;
    w.letters = j.get<std::vector<int>>();
  } else if (j.is_object()) {
    w.strands = j.at("strands").get<int>();
    w.letters = j.at("word").get<std::vector<int>>();
  } else {
    throw ParseError("braid must be an object {\"strands\": s, \"word\": [...]}");
  }
  w.check();
  return w;
}

inline DiagramSource diagram_from_json(const json& j, std::optional<int> strands_hint = std::nullopt) {
  try {
    if (j.is_string()) {
      const std::string s = detail::trim(j.get<std::string>());
      if (s.rfind("braid", 0) == 0) {
        BraidWord w = parse_braid_text(s);
        return {braid_closure(w), w};
      }
      return {validate(parse_pd_text(s)), std::nullopt};
    }
    if (j.contains("pd")) {
      PdCode pd;
      for (const auto& x : j.at("pd")) {
        auto v = x.get<std::vector<int>>();
        if (v.size() != 4) throw ParseError("a PD crossing needs exactly 4 edge labels");
        pd.push_back({v[0], v[1], v[2], v[3]});
      }
      return {validate(pd), std::nullopt};
    }
    if (j.contains("braid")) {
      BraidWord w = braid_from_json(j.at("braid"), strands_hint);
      return {braid_closure(w), w};
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed diagram JSON: ") + e.what());
  }
  throw ParseError("diagram JSON needs a \"pd\" or \"braid\" field");
}

inline json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

/// PD text, braid text, or the JSON forms.
inline DiagramSource parse_diagram(const std::string& text) {
  const std::string t = detail::trim(text);
  if (!t.empty() && t[0] == '{') return diagram_from_json(parse_json(t));
  std::istringstream in(t);
  std::string first;
  while (std::getline(in, first)) {
    if (auto hash = first.find('#'); hash != std::string::npos) first.resize(hash);
    first = detail::trim(first);
    if (!first.empty()) break;
  }
  if (first.rfind("braid", 0) == 0) {
    BraidWord w = parse_braid_text(first);
    return {braid_closure(w), w};
  }
  return {validate(parse_pd_text(t)), std::nullopt};
}

inline std::vector<std::size_t> site_list(const json& j, const char* field) {
  std::vector<std::size_t> out;
  if (!j.contains(field)) return out;
  for (const auto& v : j.at(field)) {
    long id = v.get<long>();
    if (id < 1) throw ParseError(std::string(field) + ": crossing ids are 1-based");
    out.push_back(static_cast<std::size_t>(id));
  }
  return out;
}

inline ShadowTemplate template_from_json(const json& j) {
  try {
    const FiberMode mode = parse_fiber_mode(j.value("fiber_mode", std::string("none")));
    std::optional<int> strands;
    if (j.contains("strands")) strands = j.at("strands").get<int>();
    if (mode == FiberMode::torus_fiber && !j.contains("base")) return ShadowTemplate::torus_fiber();
    DiagramSource src = diagram_from_json(j.at("base"), strands);
    auto sites = site_list(j, "sites");
    if (src.braid) return ShadowTemplate::from_braid(*src.braid, sites, mode);
    return ShadowTemplate::from_diagram(src.diagram, sites, mode);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed template JSON: ") + e.what());
  }
}

inline ShadowTemplate parse_template(const std::string& text) { return template_from_json(parse_json(text)); }

inline SingularDiagram singular_from_json(const json& j) {
  try {
    std::optional<int> strands;
    if (j.contains("strands")) strands = j.at("strands").get<int>();
    DiagramSource src = diagram_from_json(j.at("base"), strands);
    std::map<std::size_t, int> beta;
    if (j.contains("beta")) {
      for (const auto& [key, v] : j.at("beta").items()) {
        long id = detail::parse_long(key, "beta key");
        if (id < 1) throw ParseError("beta keys are 1-based crossing ids");
        beta[static_cast<std::size_t>(id)] = v.get<int>();
      }
    }
    return SingularDiagram::make(src.diagram, site_list(j, "singular_sites"), beta);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed singular diagram JSON: ") + e.what());
  }
}

inline SingularDiagram parse_singular(const std::string& text) { return singular_from_json(parse_json(text)); }

/// Parses the canonical text form produced by LaurentPoly::to_string.
inline LaurentPoly parse_laurent(const std::string& text, Var var) {
  const char v = var_name(var)[0];
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  }
  if (s.empty()) throw ParseError("empty polynomial text");
  LaurentPoly p(var);
  std::size_t i = 0;
  auto read_int = [&](bool allow_sign) {
    std::size_t start = i;
    if (allow_sign && i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == start || (i == start + 1 && !std::isdigit(static_cast<unsigned char>(s[start])))) {
      throw ParseError("malformed polynomial text '" + text + "'");
    }
    return s.substr(start, i - start);
  };
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    }
    Integer coeff = 1;
    int exponent = 0;
    if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      coeff = Integer(read_int(false));
      if (i < s.size() && s[i] == '*') ++i;
    }
    if (i < s.size() && s[i] == v) {
      ++i;
      exponent = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        exponent = static_cast<int>(detail::parse_long(read_int(true), "exponent"));
      }
    }
    if (i < s.size() && s[i] != '+' && s[i] != '-') throw ParseError("malformed polynomial text '" + text + "'");
    p.add_term(exponent, sign * coeff);
  }
  return p;
}

/// Inverse of KnotDiagram::canonical_key.
inline KnotDiagram diagram_from_key(const std::string& key) {
  if (key.rfind("pd", 0) != 0) throw ParseError("not a diagram key: " + key);
  std::istringstream in(key.substr(2));
  std::string count;
  std::getline(in, count, ';');
  PdCode pd;
  std::string item;
  while (std::getline(in, item, ';')) {
    auto v = detail::parse_int_list(item, "diagram key");
    if (v.size() != 4) throw ParseError("malformed diagram key");
    pd.push_back({static_cast<int>(v[0]), static_cast<int>(v[1]), static_cast<int>(v[2]), static_cast<int>(v[3])});
  }
  if (pd.size() != static_cast<std::size_t>(detail::parse_long(count, "diagram key"))) {
    throw ParseError("diagram key crossing count mismatch");
  }
  return validate(pd);
}

}  // namespace gleamlab
