#pragma once
// ANF text format: one polynomial per line, monomials joined by '+', variables
// within a monomial joined by '*', constant monomial "1", zero line "0".
// A header fixes the registry and its ordering:
//   # vars: <n>
//   # var <index> <name>        (one per variable, indices 0..n-1)
// Optional provenance tags (emitted by the cipher model):
//   # tag <ordinal> round=<r> kind=<sbox|final>
// where <ordinal> is the 1-based polynomial position within the file.
// All other '#' lines are free comments; whitespace around '+'/'*' is ignored.

#include <istream>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "multistep/boolring.hpp"

namespace multistep {

struct AnfTag {
  std::size_t ordinal = 0;  // 1-based polynomial position
  int round = 0;
  std::string kind;  // "sbox" | "final"
};

struct AnfDocument {
  std::shared_ptr<const VarRegistry> registry;
  std::vector<BoolPoly> polys;
  std::vector<AnfTag> tags;  // optional; sorted by ordinal when written
};

inline void write_anf(std::ostream& os, const AnfDocument& doc) {
  const VarRegistry& reg = *doc.registry;
  os << "# vars: " << reg.size() << "\n";
  for (std::size_t i = 0; i < reg.size(); ++i)
    os << "# var " << i << " " << reg.name(static_cast<VarId>(i)) << "\n";
  std::vector<const AnfTag*> by_ordinal(doc.polys.size() + 1, nullptr);
  for (const AnfTag& t : doc.tags)
    if (t.ordinal >= 1 && t.ordinal <= doc.polys.size()) by_ordinal[t.ordinal] = &t;
  for (std::size_t i = 0; i < doc.polys.size(); ++i) {
    if (const AnfTag* t = by_ordinal[i + 1])
      os << "# tag " << t->ordinal << " round=" << t->round << " kind=" << t->kind << "\n";
    os << to_string(doc.polys[i], reg) << "\n";
  }
}

namespace anf_detail {

inline std::string strip(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] inline void fail(std::size_t line_no, const std::string& msg) {
  throw std::runtime_error("anf parse error at line " + std::to_string(line_no) + ": " + msg);
}

inline BoolPoly parse_poly(const std::string& text, const VarRegistry& reg, std::size_t line_no) {
  std::vector<Monomial> terms;
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  };
  bool expect_term = true;
  bool consumed = false;  // at least one syntactic term seen
  std::vector<VarId> vars;
  while (true) {
    skip_ws();
    if (pos >= text.size()) {
      if (expect_term && consumed) fail(line_no, "dangling '+' at end of line");
      break;
    }
    if (!expect_term) {
      if (text[pos] != '+') fail(line_no, "expected '+'");
      ++pos;
      expect_term = true;
      continue;
    }
    // one monomial: '1' | '0' | name ('*' name)*
    vars.clear();
    bool is_const_one = false, is_const_zero = false;
    while (true) {
      skip_ws();
      if (pos < text.size() && (text[pos] == '1' || text[pos] == '0') &&
          (pos + 1 >= text.size() || !VarRegistry::valid_name(std::string(1, text[pos + 1])))) {
        // bare constant digit (identifiers cannot start with a digit)
        if (text[pos] == '1')
          is_const_one = true;
        else
          is_const_zero = true;
        ++pos;
      } else {
        std::size_t start = pos;
        while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
          ++pos;
        if (pos == start) fail(line_no, "expected a monomial");
        std::string name = text.substr(start, pos - start);
        if (!VarRegistry::valid_name(name)) fail(line_no, "invalid variable name '" + name + "'");
        auto v = reg.find(name);
        if (!v) fail(line_no, "unknown variable '" + name + "' (not in header)");
        vars.push_back(*v);
      }
      skip_ws();
      if (pos < text.size() && text[pos] == '*') {
        if (is_const_one || is_const_zero) fail(line_no, "constants cannot be multiplied");
        ++pos;
        continue;
      }
      break;
    }
    if (is_const_zero) {
      // contributes nothing
    } else if (is_const_one) {
      terms.emplace_back();
    } else {
      terms.emplace_back(std::move(vars));
      vars = {};
    }
    expect_term = false;
    consumed = true;
  }
  if (expect_term && terms.empty()) fail(line_no, "empty polynomial line");
  return BoolPoly::from_terms(std::move(terms));
}

}  // namespace anf_detail

inline AnfDocument read_anf(std::istream& is) {
  using anf_detail::fail;
  using anf_detail::strip;
  AnfDocument doc;
  std::vector<std::string> names;
  bool have_header = false;
  std::size_t declared = 0, seen_vars = 0;
  std::string raw;
  std::size_t line_no = 0;
  std::vector<std::string> poly_lines;
  std::vector<std::size_t> poly_line_nos;
  while (std::getline(is, raw)) {
    ++line_no;
    std::string line = strip(raw);
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream c(line.substr(1));
      std::string word;
      c >> word;
      if (word == "vars:") {
        if (have_header) fail(line_no, "duplicate '# vars:' header");
        if (!(c >> declared)) fail(line_no, "malformed '# vars:' header");
        have_header = true;
        names.assign(declared, "");
      } else if (word == "var") {
        std::size_t idx;
        std::string name;
        if (!(c >> idx >> name)) fail(line_no, "malformed '# var' line");
        if (!have_header) fail(line_no, "'# var' before '# vars:' header");
        if (idx >= declared) fail(line_no, "variable index out of range");
        if (!names[idx].empty()) fail(line_no, "duplicate declaration of variable " + std::to_string(idx));
        names[idx] = name;
        ++seen_vars;
      } else if (word == "tag") {
        AnfTag t;
        std::string field;
        if (!(c >> t.ordinal)) fail(line_no, "malformed '# tag' line");
        while (c >> field) {
          auto eq = field.find('=');
          if (eq == std::string::npos) fail(line_no, "malformed tag field '" + field + "'");
          std::string key = field.substr(0, eq), val = field.substr(eq + 1);
          if (key == "round")
            t.round = std::stoi(val);
          else if (key == "kind")
            t.kind = val;
          // unknown keys ignored
        }
        doc.tags.push_back(std::move(t));
      }
      // other comments ignored
      continue;
    }
    poly_lines.push_back(line);
    poly_line_nos.push_back(line_no);
  }
  if (!have_header) throw std::runtime_error("anf parse error: missing '# vars:' header");
  if (seen_vars != declared)
    throw std::runtime_error("anf parse error: header declares " + std::to_string(declared) +
                             " variables but " + std::to_string(seen_vars) + " were listed");
  doc.registry = std::make_shared<const VarRegistry>(std::move(names));
  doc.polys.reserve(poly_lines.size());
  for (std::size_t i = 0; i < poly_lines.size(); ++i)
    doc.polys.push_back(anf_detail::parse_poly(poly_lines[i], *doc.registry, poly_line_nos[i]));
  return doc;
}

}  // namespace multistep
