#ifndef STREAMCODE_CODE_SPEC_JSON_HPP
#define STREAMCODE_CODE_SPEC_JSON_HPP

// JSON form of FieldSpec and CodeSpec. Key order is fixed (ordered_json) so a
// given spec always serializes to the same bytes.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "streamcode/code_spec.hpp"
#include "streamcode/field.hpp"
#include "streamcode/matrix.hpp"

namespace streamcode {

using ojson = nlohmann::ordered_json;

inline std::string to_hex(std::uint64_t v, int digits) {
  static constexpr char kDigits[] = "0123456789ABCDEF";
  std::string out;
  for (; v != 0 || digits > 0; v >>= 4, --digits) out.insert(out.begin(), kDigits[v & 0xF]);
  return "0x" + out;
}

inline std::uint64_t parse_hex(const std::string& s) {
  std::size_t pos = 0;
  const unsigned long long v = std::stoull(s, &pos, 16);
  if (pos != s.size()) throw std::invalid_argument("malformed hex value: " + s);
  return v;
}

inline ojson field_to_json(const FieldSpec& f) {
  ojson j;
  j["degree"] = f.degree();
  j["poly"] = to_hex(f.packed_polynomial(), (static_cast<int>(f.bits()) + 4) / 4);
  if (f.is_tower()) j["tower"] = field_to_json(*f.base());
  return j;
}

/// Plain fields: {"degree": m, "poly"}. Towers: {"degree": 2, "poly": packed x^2 + x + c, "tower": base}.
inline FieldPtr field_from_json(const ojson& j) {
  const int degree = j.at("degree").get<int>();
  const std::uint64_t poly = parse_hex(j.at("poly").get<std::string>());
  if (!j.contains("tower")) return FieldSpec::binary(degree, static_cast<std::uint32_t>(poly));
  if (degree != 2) throw std::invalid_argument("tower fields must have degree 2 over their base");
  const FieldPtr base = field_from_json(j.at("tower"));
  const int m = base->bits();
  const std::uint64_t mask = (std::uint64_t{1} << m) - 1;
  if ((poly >> m) != ((std::uint64_t{1} << m) | 1u)) throw std::invalid_argument("tower polynomial must be x^2 + x + c");
  return FieldSpec::quadratic(base, static_cast<Symbol>(poly & mask));
}

inline ojson matrix_to_json(const Matrix& m) {
  const int digits = (m.field()->bits() + 3) / 4;
  ojson rows = ojson::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    ojson row = ojson::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_hex(m(i, j), digits));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const ojson& j, const FieldPtr& field) {
  std::vector<std::vector<Symbol>> rows;
  for (const auto& r : j) {
    std::vector<Symbol> row;
    for (const auto& e : r) row.push_back(static_cast<Symbol>(parse_hex(e.get<std::string>())));
    rows.push_back(std::move(row));
  }
  return Matrix::from_rows(field, rows);
}

inline ojson spec_to_json(const CodeSpec& s) {
  ojson j;
  j["params"] = {{"a", s.params.a}, {"b", s.params.b}, {"tau", s.params.tau}};
  j["field"] = field_to_json(*s.field);
  j["tag"] = to_string(s.tag);
  j["seed"] = s.seed ? ojson(*s.seed) : ojson(nullptr);
  j["n"] = s.n();
  j["k"] = s.k();
  if (s.c_ratios) j["c_ratios"] = {s.c_ratios->first, s.c_ratios->second};
  if (s.d_gamma) j["d_gamma"] = *s.d_gamma;
  j["H"] = s.is_repetition() ? ojson::array() : matrix_to_json(s.H);
  return j;
}

inline CodeSpec spec_from_json(const ojson& j) {
  CodeSpec s;
  const auto& p = j.at("params");
  s.params = ParamSet(p.at("a").get<int>(), p.at("b").get<int>(), p.at("tau").get<int>());
  s.field = field_from_json(j.at("field"));
  s.tag = tag_from_string(j.at("tag").get<std::string>());
  if (j.contains("seed") && !j.at("seed").is_null()) s.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("c_ratios")) s.c_ratios = std::make_pair(j.at("c_ratios").at(0).get<int>(), j.at("c_ratios").at(1).get<int>());
  if (j.contains("d_gamma")) s.d_gamma = j.at("d_gamma").get<int>();
  if (!s.is_repetition()) {
    s.H = matrix_from_json(j.at("H"), s.field);
    if (s.H.rows() != static_cast<std::size_t>(s.params.b))
      throw std::invalid_argument("H must have b rows");
    if (s.tag != ConstructionTag::MdsBaseline && s.H.cols() != static_cast<std::size_t>(s.params.n()))
      throw std::invalid_argument("H must have tau + delta + 1 columns");
  }
  if (j.contains("n") && j.at("n").get<int>() != s.n()) throw std::invalid_argument("declared n disagrees with H");
  if (j.contains("k") && j.at("k").get<int>() != s.k()) throw std::invalid_argument("declared k disagrees with H");
  return s;
}

/// Indented JSON with one line per row of H.
inline std::string spec_to_string(const CodeSpec& s) {
  ojson meta = spec_to_json(s);
  const ojson h = meta.at("H");
  meta.erase("H");
  std::string text = meta.dump(2);
  text.resize(text.size() - 2);  // drop "\n}"
  text += ",\n  \"H\": [";
  for (std::size_t i = 0; i < h.size(); ++i) text += (i ? ",\n    " : "\n    ") + h[i].dump();
  text += h.empty() ? "]\n}\n" : "\n  ]\n}\n";
  return text;
}

inline void save_spec(const CodeSpec& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << spec_to_string(s);
}

inline CodeSpec load_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  return spec_from_json(ojson::parse(in));
}

}  // namespace streamcode

#endif  // STREAMCODE_CODE_SPEC_JSON_HPP
