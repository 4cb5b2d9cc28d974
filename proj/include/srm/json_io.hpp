// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "srm/certificate.hpp"
#include "srm/glue.hpp"
#include "srm/verify.hpp"

// Rationals are always strings "p/q". Malformed text raises parse_error;
// well-formed input violating a FiniteMetric invariant raises
// std::invalid_argument. A CodedReal without terms is written as
// its rational string; otherwise as {"offset", "terms"}.

namespace srm::io {

using Json = nlohmann::ordered_json;

class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline const Json& at(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw parse_error(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline std::string text(const Json& j, const char* what) {
  if (!j.is_string()) throw parse_error(std::string(what) + " must be a string");
  return j.get<std::string>();
}

inline unsigned long count(const Json& j, const char* what) {
  if (!j.is_number_unsigned()) throw parse_error(std::string(what) + " must be a nonnegative integer");
  return j.get<unsigned long>();
}

inline const Json& array(const Json& j, const char* what) {
  if (!j.is_array()) throw parse_error(std::string(what) + " must be an array");
  return j;
}

}  // namespace detail

inline Json to_json(const Rational& r) { return to_string(r); }

inline Rational rational_from_json(const Json& j) {
  const std::string s = detail::text(j, "rational");
  try {
    return parse_rational(s);
  } catch (const std::invalid_argument& e) {
    throw parse_error(e.what());
  }
}

inline Integer integer_from_json(const Json& j) {
  const Rational r = rational_from_json(j);
  if (!is_integer(r)) throw parse_error("expected an integer");
  return r.get_num();
}

inline Json to_json(const IntervalSet& s) {
  Json out = Json::array();
  for (const Block& b : s.blocks()) out.push_back(Json::array({to_string(b.lo), to_string(b.hi)}));
  return out;
}

inline IntervalSet interval_set_from_json(const Json& j) {
  std::vector<Block> blocks;
  for (const Json& b : detail::array(j, "interval set")) {
    if (!b.is_array() || b.size() != 2) throw parse_error("interval block must be [lo, hi]");
    Block blk{rational_from_json(b[0]), rational_from_json(b[1])};
    if (!(blk.lo < blk.hi)) throw parse_error("interval block must satisfy lo < hi");
    blocks.push_back(std::move(blk));
  }
  return IntervalSet(std::move(blocks));
}

inline Json to_json(const CodedReal& x) {
  if (x.is_rational()) return to_string(x.offset());
  Json terms = Json::array();
  for (const Term& t : x.terms())
    terms.push_back(Json{{"coeff", to_string(t.coeff)}, {"k", t.schedule.k}, {"set", to_json(t.index_set)}});
  return Json{{"offset", to_string(x.offset())}, {"terms", terms}};
}

inline CodedReal coded_from_json(const Json& j) {
  if (j.is_string()) return CodedReal(rational_from_json(j));
  if (!j.is_object()) throw parse_error("coded real must be a string or an object");
  std::vector<Term> terms;
  for (const Json& t : detail::array(detail::at(j, "terms"), "terms"))
    terms.push_back({rational_from_json(detail::at(t, "coeff")),
                     ExponentSchedule{detail::count(detail::at(t, "k"), "k")},
                     interval_set_from_json(detail::at(t, "set"))});
  return CodedReal(rational_from_json(detail::at(j, "offset")), std::move(terms));
}

/// `approx` adds decimal renderings of enclosure midpoints under "approx";
/// they are never read back.
inline Json to_json(const FiniteMetric& d, bool approx = false) {
  Json matrix = Json::array();
  for (const auto& row : d.matrix()) {
    Json r = Json::array();
    for (const CodedReal& v : row) r.push_back(to_json(v));
    matrix.push_back(std::move(r));
  }
  Json out{{"points", d.points()}, {"matrix", matrix}};
  if (approx) {
    Json rows = Json::array();
    for (const auto& row : d.matrix()) {
      Json r = Json::array();
      for (const CodedReal& v : row) {
        const Enclosure e = eval(v, 8);
        r.push_back(to_decimal((e.lo + e.hi) / 2));
      }
      rows.push_back(std::move(r));
    }
    out["approx"] = Json{{"note", "non-authoritative decimal renderings"}, {"matrix", rows}};
  }
  return out;
}

inline FiniteMetric metric_from_json(const Json& j) {
  std::vector<std::string> points;
  for (const Json& p : detail::array(detail::at(j, "points"), "points"))
    points.push_back(detail::text(p, "point label"));
  std::vector<std::vector<CodedReal>> m;
  for (const Json& row : detail::array(detail::at(j, "matrix"), "matrix")) {
    std::vector<CodedReal> r;
    for (const Json& v : detail::array(row, "matrix row")) r.push_back(coded_from_json(v));
    m.push_back(std::move(r));
  }
  return FiniteMetric(std::move(points), std::move(m));
}

/// First line: point labels. Then one line of "p/q" entries per row.
inline std::string to_csv(const FiniteMetric& d) {
  if (!d.is_rational()) throw std::domain_error("CSV holds rational matrices only");
  std::ostringstream out;
  for (std::size_t i = 0; i < d.size(); ++i) out << (i ? "," : "") << d.label(i);
  out << '\n';
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = 0; j < d.size(); ++j) out << (j ? "," : "") << to_string(d(i, j).offset());
    out << '\n';
  }
  return out.str();
}

inline FiniteMetric metric_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    rows.push_back(std::move(cells));
  }
  if (rows.empty()) throw parse_error("empty CSV");
  const std::vector<std::string> points = rows.front();
  std::vector<std::vector<Rational>> m;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::vector<Rational> r;
    for (const std::string& c : rows[i]) {
      try {
        r.push_back(parse_rational(c));
      } catch (const std::exception& e) {
        throw parse_error("CSV entry '" + c + "': " + e.what());
      }
    }
    m.push_back(std::move(r));
  }
  return FiniteMetric::from_rationals(points, m);
}

/// Reads JSON, or CSV when the text does not start with '{'.
inline FiniteMetric metric_from_text(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw parse_error(e.what());
    }
    return metric_from_json(j);
  }
  return metric_from_csv(text);
}

inline Json to_json(const RegistrySnapshot& r) {
  Json draws = Json::array();
  for (const SemiMetricDraw& d : r.draws)
    draws.push_back(Json{{"gauge", d.gauge},
                         {"level", d.level},
                         {"a", d.a.get_str()},
                         {"b", d.b.get_str()},
                         {"value", to_string(d.value)}});
  Json hubs = Json::array();
  for (const HubAllocation& h : r.hubs)
    hubs.push_back(Json{{"index", h.index},
                        {"target", to_string(h.target)},
                        {"p", to_string(h.p_value)},
                        {"q", to_string(h.q)},
                        {"letter", h.letter.get_str()},
                        {"s", to_json(h.s)}});
  return Json{{"k", r.k}, {"seed", r.seed}, {"gauge_count", r.gauge_count},
              {"draws", draws}, {"hubs", hubs}};
}

inline RegistrySnapshot registry_from_json(const Json& j) {
  using detail::at;
  using detail::count;
  RegistrySnapshot r;
  r.k = count(at(j, "k"), "k");
  r.seed = count(at(j, "seed"), "seed");
  r.gauge_count = count(at(j, "gauge_count"), "gauge_count");
  for (const Json& d : detail::array(at(j, "draws"), "draws"))
    r.draws.push_back(SemiMetricDraw{count(at(d, "gauge"), "gauge"), count(at(d, "level"), "level"),
                                     integer_from_json(at(d, "a")), integer_from_json(at(d, "b")),
                                     rational_from_json(at(d, "value"))});
  for (const Json& h : detail::array(at(j, "hubs"), "hubs"))
    r.hubs.push_back(HubAllocation{count(at(h, "index"), "index"), rational_from_json(at(h, "target")),
                                   rational_from_json(at(h, "p")), rational_from_json(at(h, "q")),
                                   integer_from_json(at(h, "letter")), coded_from_json(at(h, "s"))});
  return r;
}

inline Json to_json(const IndependenceEntry& e) {
  Json pairs = Json::array();
  for (const auto& [a, b] : e.pairs) pairs.push_back(Json::array({a, b}));
  Json atoms = Json::array();
  for (const IntervalSet& s : e.atoms) atoms.push_back(to_json(s));
  Json b = Json::array();
  for (const Rational& v : e.witness.b) b.push_back(to_string(v));
  Json forms = Json::array();
  for (const LinearForm& f : e.forms) {
    Json coords = Json::array();
    for (const Rational& c : f.coords) coords.push_back(to_string(c));
    forms.push_back(Json{{"constant", to_string(f.constant)}, {"coords", coords}});
  }
  Json tags = Json::array();
  for (const auto& row : e.tags) {
    Json t = Json::array();
    for (const TermTag& tag : row) t.push_back(tag.gauge);
    tags.push_back(std::move(t));
  }
  return Json{{"kind", e.kind == IndependenceEntry::Kind::single ? "single" : "pair"},
              {"pairs", pairs},
              {"k", e.schedule.k},
              {"atoms", atoms},
              {"witness", Json{{"block", e.witness.block.get_str()}, {"a", to_string(e.witness.a)}, {"b", b}}},
              {"forms", forms},
              {"tags", tags}};
}

inline IndependenceEntry entry_from_json(const Json& j) {
  using detail::at;
  IndependenceEntry e;
  const std::string kind = detail::text(at(j, "kind"), "kind");
  if (kind == "single")
    e.kind = IndependenceEntry::Kind::single;
  else if (kind == "pair")
    e.kind = IndependenceEntry::Kind::pair;
  else
    throw parse_error("unknown entry kind '" + kind + "'");
  for (const Json& p : detail::array(at(j, "pairs"), "pairs")) {
    if (!p.is_array() || p.size() != 2) throw parse_error("pair must be [x, y]");
    e.pairs.emplace_back(detail::text(p[0], "label"), detail::text(p[1], "label"));
  }
  e.schedule = ExponentSchedule{detail::count(at(j, "k"), "k")};
  for (const Json& a : detail::array(at(j, "atoms"), "atoms")) e.atoms.push_back(interval_set_from_json(a));
  const Json& w = at(j, "witness");
  e.witness.block = integer_from_json(at(w, "block"));
  e.witness.a = rational_from_json(at(w, "a"));
  for (const Json& b : detail::array(at(w, "b"), "witness b")) e.witness.b.push_back(rational_from_json(b));
  for (const Json& f : detail::array(at(j, "forms"), "forms")) {
    LinearForm lf{rational_from_json(at(f, "constant")), {}};
    for (const Json& c : detail::array(at(f, "coords"), "coords")) lf.coords.push_back(rational_from_json(c));
    e.forms.push_back(std::move(lf));
  }
  for (const Json& row : detail::array(at(j, "tags"), "tags")) {
    std::vector<TermTag> tags;
    for (const Json& t : detail::array(row, "tag row")) tags.push_back(TermTag{detail::count(t, "tag")});
    e.tags.push_back(std::move(tags));
  }
  return e;
}

inline Json to_json(const Partition& p) {
  Json blocks = Json::array();
  for (const auto& b : p.blocks) {
    Json labels = Json::array();
    for (std::size_t i : b) labels.push_back(p.points[i]);
    blocks.push_back(std::move(labels));
  }
  Json hubs = Json::array();
  for (std::size_t h : p.hubs) hubs.push_back(p.points[h]);
  return Json{{"blocks", blocks}, {"hubs", hubs}};
}

inline Partition partition_from_json(const Json& j, const std::vector<std::string>& points) {
  Partition p;
  p.points = points;
  auto index = [&](const Json& label) {
    const std::string s = detail::text(label, "label");
    for (std::size_t i = 0; i < points.size(); ++i)
      if (points[i] == s) return i;
    throw parse_error("unknown point '" + s + "'");
  };
  for (const Json& b : detail::array(detail::at(j, "blocks"), "blocks")) {
    std::vector<std::size_t> block;
    for (const Json& l : detail::array(b, "block")) block.push_back(index(l));
    p.blocks.push_back(std::move(block));
  }
  for (const Json& h : detail::array(detail::at(j, "hubs"), "hubs")) p.hubs.push_back(index(h));
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw parse_error(e.what());
  }
  return p;
}

inline Json to_json(const Certificate& c, bool approx = false) {
  Json entries = Json::array();
  for (const IndependenceEntry& e : c.independence) entries.push_back(to_json(e));
  Json out{{"input", to_json(c.input, approx)},
           {"metric", to_json(c.metric, approx)},
           {"partition", to_json(c.partition)},
           {"registry", to_json(c.registry)},
           {"independence", entries},
           {"sup_bound", Json{{"epsilon", to_string(c.epsilon)},
                              {"achieved_lo", to_string(c.achieved.lo)},
                              {"achieved_hi", to_string(c.achieved.hi)}}},
           {"strongly_rigid", c.strongly_rigid}};
  return out;
}

inline Certificate certificate_from_json(const Json& j) {
  using detail::at;
  Certificate c;
  c.input = metric_from_json(at(j, "input"));
  c.metric = metric_from_json(at(j, "metric"));
  c.partition = partition_from_json(at(j, "partition"), c.metric.points());
  c.registry = registry_from_json(at(j, "registry"));
  for (const Json& e : detail::array(at(j, "independence"), "independence"))
    c.independence.push_back(entry_from_json(e));
  const Json& sb = at(j, "sup_bound");
  c.epsilon = rational_from_json(at(sb, "epsilon"));
  c.achieved = {rational_from_json(at(sb, "achieved_lo")), rational_from_json(at(sb, "achieved_hi"))};
  const Json& sr = at(j, "strongly_rigid");
  if (!sr.is_boolean()) throw parse_error("strongly_rigid must be a boolean");
  c.strongly_rigid = sr.get<bool>();
  return c;
}

inline Json to_json(const Report& r) {
  Json out{{"check", r.check}, {"verdict", to_string(r.verdict)}, {"witnesses", r.witnesses},
           {"detail", r.detail}, {"precision", r.precision}};
  if (r.achieved)
    out["achieved"] = Json{{"lo", to_string(r.achieved->lo)}, {"hi", to_string(r.achieved->hi)}};
  return out;
}

}  // namespace srm::io
