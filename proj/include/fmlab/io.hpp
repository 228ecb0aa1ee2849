#pragma once

// JSON formats for matrices, frames, polarizations, groupoids, cocycles,
// covers and cohomology results. Parse failures raise ErrorKind::Format.

#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fmlab/cohomology.hpp"
#include "fmlab/glue.hpp"
#include "fmlab/grassmann.hpp"
#include "fmlab/groupoid.hpp"
#include "fmlab/operator.hpp"

namespace fmlab::io {

using Json = nlohmann::json;

[[noreturn]] inline void format_error(const std::string& what) { throw Error(ErrorKind::Format, what); }

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) format_error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    format_error(path + ": " + e.what());
  }
}

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) format_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

namespace detail {

inline const Json& field(const Json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) format_error(std::string(what) + ": missing field \"" + key + "\"");
  return j.at(key);
}

inline long long integer(const Json& j, const std::string& what) {
  if (!j.is_number_integer()) format_error(what + ": expected an integer");
  return j.get<long long>();
}

inline double real(const Json& j, const std::string& what) {
  if (!j.is_number()) format_error(what + ": expected a number");
  return j.get<double>();
}

/// Labels may be strings or numbers; they are compared by their JSON text.
inline std::string label(const Json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Matrices: {"rows": r, "cols": c, "data": [[re, im], ...]} in row-major order.

inline Json to_json(const CMatrix& m) {
  Json data = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back({m(i, j).real(), m(i, j).imag()});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

inline CMatrix matrix_from_json(const Json& j) {
  const auto rows = detail::integer(detail::field(j, "rows", "matrix"), "matrix rows");
  const auto cols = detail::integer(detail::field(j, "cols", "matrix"), "matrix cols");
  const Json& data = detail::field(j, "data", "matrix");
  if (rows < 0 || cols < 0) format_error("matrix: negative dimension");
  if (!data.is_array() || data.size() != static_cast<std::size_t>(rows * cols))
    format_error("matrix: data must hold rows*cols = " + std::to_string(rows * cols) + " entries, got " +
                 std::to_string(data.is_array() ? data.size() : 0));
  CMatrix m(rows, cols);
  for (long long k = 0; k < rows * cols; ++k) {
    const Json& e = data[static_cast<std::size_t>(k)];
    if (e.is_number()) {
      m(k / cols, k % cols) = Complex(e.get<double>(), 0.0);
      continue;
    }
    if (!e.is_array() || e.size() != 2) format_error("matrix: entry " + std::to_string(k) + " must be [re, im]");
    m(k / cols, k % cols) = Complex(detail::real(e[0], "matrix entry"), detail::real(e[1], "matrix entry"));
  }
  return m;
}

inline Json to_json(const Polarization& p) { return {{"dim", p.dim()}, {"plus_dim", p.plus_dim()}}; }

inline Polarization polarization_from_json(const Json& j) {
  const auto dim = detail::integer(detail::field(j, "dim", "polarization"), "polarization dim");
  const auto plus = detail::integer(detail::field(j, "plus_dim", "polarization"), "polarization plus_dim");
  return Polarization(dim, plus);
}

/// A frame is a matrix JSON with an extra "plus_dim" (= k, also its column count).
inline Json to_json(const Frame& w) {
  Json j = to_json(w.matrix());
  j["plus_dim"] = w.ambient().plus_dim();
  return j;
}

inline Frame frame_from_json(const Json& j) {
  CMatrix m = matrix_from_json(j);
  const auto plus = detail::integer(detail::field(j, "plus_dim", "frame"), "frame plus_dim");
  const Polarization pol(m.rows(), plus);
  return Frame(pol, std::move(m));
}

// ---------------------------------------------------------------------------
// Groupoids: {"objects": [...], "arrows": [{"id", "src", "tgt"}], "compose": [[x, y, xy], ...]}.
// Identities and inverses are derived from the composition table.

inline Json to_json(const FiniteGroupoid& g) {
  Json objects = Json::array(), arrows = Json::array(), compose = Json::array();
  for (int o = 0; o < g.objects(); ++o) objects.push_back(g.object_label(o));
  for (int x = 0; x < g.arrows(); ++x)
    arrows.push_back({{"id", g.arrow_label(x)}, {"src", g.object_label(g.source(x))}, {"tgt", g.object_label(g.target(x))}});
  for (int x = 0; x < g.arrows(); ++x)
    for (int y = 0; y < g.arrows(); ++y)
      if (g.compose(x, y) >= 0) compose.push_back({g.arrow_label(x), g.arrow_label(y), g.arrow_label(g.compose(x, y))});
  return {{"objects", objects}, {"arrows", arrows}, {"compose", compose}};
}

inline FiniteGroupoid groupoid_from_json(const Json& j) {
  const Json& objects = detail::field(j, "objects", "groupoid");
  const Json& arrows = detail::field(j, "arrows", "groupoid");
  const Json& compose = detail::field(j, "compose", "groupoid");
  if (!objects.is_array() || !arrows.is_array() || !compose.is_array())
    format_error("groupoid: objects, arrows and compose must be arrays");
  std::map<std::string, int> object_index, arrow_index;
  std::vector<std::string> object_labels, arrow_labels;
  for (const auto& o : objects) {
    const auto l = detail::label(o);
    if (!object_index.emplace(l, static_cast<int>(object_labels.size())).second)
      format_error("groupoid: duplicate object " + l);
    object_labels.push_back(l);
  }
  std::vector<int> src, tgt;
  auto lookup = [](const std::map<std::string, int>& m, const Json& key, const char* what) {
    const auto it = m.find(detail::label(key));
    if (it == m.end()) format_error(std::string("groupoid: unknown ") + what + " " + detail::label(key));
    return it->second;
  };
  for (const auto& a : arrows) {
    const auto l = detail::label(detail::field(a, "id", "groupoid arrow"));
    if (!arrow_index.emplace(l, static_cast<int>(arrow_labels.size())).second)
      format_error("groupoid: duplicate arrow " + l);
    arrow_labels.push_back(l);
    src.push_back(lookup(object_index, detail::field(a, "src", "groupoid arrow"), "object"));
    tgt.push_back(lookup(object_index, detail::field(a, "tgt", "groupoid arrow"), "object"));
  }
  const int n1 = static_cast<int>(arrow_labels.size());
  const int n0 = static_cast<int>(object_labels.size());
  if (n0 == 0 || n1 == 0) format_error("groupoid: needs at least one object and one arrow");
  std::vector<int> comp(static_cast<std::size_t>(n1) * n1, -1);
  for (const auto& t : compose) {
    if (!t.is_array() || t.size() != 3) format_error("groupoid: compose entries must be [x, y, xy]");
    const int x = lookup(arrow_index, t[0], "arrow");
    const int y = lookup(arrow_index, t[1], "arrow");
    comp[static_cast<std::size_t>(x) * n1 + y] = lookup(arrow_index, t[2], "arrow");
  }
  std::vector<int> ident(static_cast<std::size_t>(n0), -1), inv(static_cast<std::size_t>(n1), -1);
  for (int x = 0; x < n1; ++x) {
    const auto sx = static_cast<std::size_t>(src[static_cast<std::size_t>(x)]);
    if (src[static_cast<std::size_t>(x)] == tgt[static_cast<std::size_t>(x)] && comp[static_cast<std::size_t>(x) * n1 + x] == x &&
        ident[sx] < 0)
      ident[sx] = x;
  }
  for (int o = 0; o < n0; ++o)
    if (ident[static_cast<std::size_t>(o)] < 0)
      throw Error(ErrorKind::Domain, "groupoid: object " + object_labels[static_cast<std::size_t>(o)] + " has no identity");
  for (int x = 0; x < n1; ++x)
    for (int y = 0; y < n1 && inv[static_cast<std::size_t>(x)] < 0; ++y)
      if (comp[static_cast<std::size_t>(x) * n1 + y] == ident[static_cast<std::size_t>(tgt[static_cast<std::size_t>(x)])] &&
          comp[static_cast<std::size_t>(y) * n1 + x] == ident[static_cast<std::size_t>(src[static_cast<std::size_t>(x)])])
        inv[static_cast<std::size_t>(x)] = y;
  for (int x = 0; x < n1; ++x)
    if (inv[static_cast<std::size_t>(x)] < 0)
      throw Error(ErrorKind::Domain, "groupoid: arrow " + arrow_labels[static_cast<std::size_t>(x)] + " has no inverse");
  FiniteGroupoid g(n0, std::move(src), std::move(tgt), std::move(ident), std::move(inv), std::move(comp));
  g.object_labels = std::move(object_labels);
  g.arrow_labels = std::move(arrow_labels);
  return g;
}

// ---------------------------------------------------------------------------
// Cocycles: {"modulus": N, "values": [[x, y, k], ...]} with arrow labels;
// modulus 0 means continuous phases given as [x, y, [re, im]].

inline Json to_json(const FiniteGroupoid& g, const PhaseCocycle& c) {
  Json values = Json::array();
  for (int x = 0; x < g.arrows(); ++x)
    for (int y = 0; y < g.arrows(); ++y) {
      if (!c.has(x, y)) continue;
      if (c.is_continuous()) {
        const auto z = c.phase(x, y);
        values.push_back({g.arrow_label(x), g.arrow_label(y), {z.real(), z.imag()}});
      } else {
        values.push_back({g.arrow_label(x), g.arrow_label(y), c.exponent(x, y)});
      }
    }
  return {{"modulus", c.modulus()}, {"values", values}};
}

inline PhaseCocycle cocycle_from_json(const Json& j, const FiniteGroupoid& g) {
  const auto modulus = detail::integer(detail::field(j, "modulus", "cocycle"), "cocycle modulus");
  const Json& values = detail::field(j, "values", "cocycle");
  if (modulus < 0 || !values.is_array()) format_error("cocycle: bad modulus or values");
  std::map<std::string, int> arrow_index;
  for (int x = 0; x < g.arrows(); ++x) arrow_index.emplace(g.arrow_label(x), x);
  auto arrow = [&](const Json& key) {
    const auto it = arrow_index.find(detail::label(key));
    if (it == arrow_index.end()) format_error("cocycle: unknown arrow " + detail::label(key));
    return it->second;
  };
  PhaseCocycle c = modulus == 0 ? PhaseCocycle::continuous(g.arrows()) : PhaseCocycle::discrete(g.arrows(), static_cast<int>(modulus));
  for (const auto& v : values) {
    if (!v.is_array() || v.size() != 3) format_error("cocycle: entries must be [x, y, value]");
    const int x = arrow(v[0]), y = arrow(v[1]);
    if (modulus == 0) {
      if (!v[2].is_array() || v[2].size() != 2) format_error("cocycle: continuous values must be [re, im]");
      c.set_phase(x, y, {detail::real(v[2][0], "cocycle value"), detail::real(v[2][1], "cocycle value")});
    } else {
      c.set(x, y, detail::integer(v[2], "cocycle value"));
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Covers:
// {"modulus": N,
//  "group": {"order": n, "table": [[...], ...]},
//  "points": P, "action": [[a.g for g] for a],
//  "charts": [[g, ...], ...],
//  "transitions": [{"from": a, "to": b, "values": [[g, point, k], ...]}],
//  "omega": [{"charts": [a, b, c], "values": [[point, f, g, k], ...]}]}

inline Json to_json(const LocalExtensionData& d, int modulus) {
  const auto& grp = d.group();
  const int n = grp.order();
  Json table = Json::array();
  for (int a = 0; a < n; ++a) {
    Json row = Json::array();
    for (int b = 0; b < n; ++b) row.push_back(grp.mul(a, b));
    table.push_back(row);
  }
  Json action = Json::array();
  for (int a = 0; a < d.action().points(); ++a) {
    Json row = Json::array();
    for (int g = 0; g < n; ++g) row.push_back(d.action().act(a, g));
    action.push_back(row);
  }
  Json transitions = Json::array(), omega = Json::array();
  const int c = d.chart_count();
  for (int al = 0; al < c; ++al)
    for (int be = 0; be < c; ++be) {
      Json values = Json::array();
      for (int g = 0; g < n; ++g)
        for (int a = 0; a < d.action().points(); ++a)
          if (d.transition(al, be, a, g) >= 0) values.push_back({g, a, d.transition(al, be, a, g)});
      if (!values.empty()) transitions.push_back({{"from", al}, {"to", be}, {"values", values}});
    }
  for (int al = 0; al < c; ++al)
    for (int be = 0; be < c; ++be)
      for (int ga = 0; ga < c; ++ga) {
        Json values = Json::array();
        for (int a = 0; a < d.action().points(); ++a)
          for (int f = 0; f < n; ++f)
            for (int g = 0; g < n; ++g)
              if (d.omega(al, be, ga, a, f, g) >= 0) values.push_back({a, f, g, d.omega(al, be, ga, a, f, g)});
        if (!values.empty()) omega.push_back({{"charts", {al, be, ga}}, {"values", values}});
      }
  return {{"modulus", modulus},
          {"group", {{"order", n}, {"table", table}}},
          {"points", d.action().points()},
          {"action", action},
          {"charts", d.charts()},
          {"transitions", transitions},
          {"omega", omega}};
}

struct CoverFile {
  LocalExtensionData data;
  int modulus = 0;  // 0 when the file does not state one
};

inline CoverFile cover_from_json(const Json& j) {
  auto ints = [](const Json& arr, const std::string& what) {
    if (!arr.is_array()) format_error(what + ": expected an array");
    std::vector<int> out;
    for (const auto& v : arr) out.push_back(static_cast<int>(detail::integer(v, what)));
    return out;
  };
  const Json& group = detail::field(j, "group", "cover");
  const int n = static_cast<int>(detail::integer(detail::field(group, "order", "cover group"), "cover group order"));
  const Json& rows = detail::field(group, "table", "cover group");
  if (n < 1 || !rows.is_array() || rows.size() != static_cast<std::size_t>(n)) format_error("cover: group table must have order rows");
  std::vector<int> table;
  for (const auto& r : rows) {
    const auto row = ints(r, "cover group table");
    if (row.size() != static_cast<std::size_t>(n)) format_error("cover: group table row has wrong length");
    table.insert(table.end(), row.begin(), row.end());
  }
  FiniteGroup grp(n, std::move(table));
  const int points = static_cast<int>(detail::integer(detail::field(j, "points", "cover"), "cover points"));
  const Json& act = detail::field(j, "action", "cover");
  if (points < 1 || !act.is_array() || act.size() != static_cast<std::size_t>(points))
    format_error("cover: action must have one row per point");
  std::vector<int> atable;
  for (const auto& r : act) {
    const auto row = ints(r, "cover action");
    if (row.size() != static_cast<std::size_t>(n)) format_error("cover: action row has wrong length");
    atable.insert(atable.end(), row.begin(), row.end());
  }
  RightAction action(grp, points, std::move(atable));
  std::vector<std::vector<int>> charts;
  for (const auto& c : detail::field(j, "charts", "cover")) charts.push_back(ints(c, "cover chart"));
  LocalExtensionData data(action, charts);
  const int c = data.chart_count();
  auto chart = [&](const Json& v) {
    const auto k = detail::integer(v, "cover chart index");
    if (k < 0 || k >= c) format_error("cover: chart index out of range");
    return static_cast<int>(k);
  };
  auto in_range = [](long long v, int hi, const char* what) {
    if (v < 0 || v >= hi) format_error(std::string("cover: ") + what + " out of range");
    return static_cast<int>(v);
  };
  if (j.contains("transitions"))
    for (const auto& t : j.at("transitions")) {
      const int al = chart(detail::field(t, "from", "cover transition"));
      const int be = chart(detail::field(t, "to", "cover transition"));
      for (const auto& v : detail::field(t, "values", "cover transition")) {
        const auto e = ints(v, "cover transition value");
        if (e.size() != 3) format_error("cover: transition values must be [g, point, k]");
        data.set_transition(al, be, in_range(e[1], points, "point"), in_range(e[0], n, "group element"), e[2]);
      }
    }
  if (j.contains("omega"))
    for (const auto& o : j.at("omega")) {
      const auto ch = ints(detail::field(o, "charts", "cover omega"), "cover omega charts");
      if (ch.size() != 3) format_error("cover: omega charts must be [a, b, c]");
      for (int k : ch)
        if (k < 0 || k >= c) format_error("cover: chart index out of range");
      for (const auto& v : detail::field(o, "values", "cover omega")) {
        const auto e = ints(v, "cover omega value");
        if (e.size() != 4) format_error("cover: omega values must be [point, f, g, k]");
        data.set_omega(ch[0], ch[1], ch[2], in_range(e[0], points, "point"), in_range(e[1], n, "group element"),
                       in_range(e[2], n, "group element"), e[3]);
      }
    }
  int modulus = 0;
  if (j.contains("modulus")) modulus = static_cast<int>(detail::integer(j.at("modulus"), "cover modulus"));
  return {std::move(data), modulus};
}

// ---------------------------------------------------------------------------

inline Json to_json(const CohomologyGroup& h, const std::vector<int>& coordinates) {
  return {{"degree", h.degree}, {"modulus", h.modulus}, {"invariant_factors", h.invariant_factors}, {"class", coordinates}};
}

inline Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

}  // namespace fmlab::io
