#include "ymh/strings.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <sstream>

#include "ymh/errors.hpp"

namespace ymh {

bool LatticePath::valid() const {
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    if (edges[i].to != edges[i + 1].from) return false;
  return true;
}

bool LatticePath::closed() const {
  return !edges.empty() && edges.front().from == edges.back().to;
}

namespace {

bool is_backtrack(const OrientedEdge& a, const OrientedEdge& b) {
  return b == a.inverse();
}

std::vector<OrientedEdge> erase_interior(const std::vector<OrientedEdge>& in) {
  std::vector<OrientedEdge> st;
  st.reserve(in.size());
  for (const auto& e : in) {
    if (!st.empty() && is_backtrack(st.back(), e))
      st.pop_back();
    else
      st.push_back(e);
  }
  return st;
}

std::vector<OrientedEdge> erase_terminal(std::vector<OrientedEdge> v) {
  // cyclic erasure: the result of interior erasure can still backtrack across
  // the seam; trimming the seam may expose new interior backtracks at it
  while (v.size() >= 2 && is_backtrack(v.back(), v.front())) {
    v.erase(v.begin());
    v.pop_back();
    v = erase_interior(v);
  }
  return v;
}

std::vector<OrientedEdge> minimal_rotation(std::vector<OrientedEdge> v) {
  if (v.size() < 2) return v;
  std::size_t best = 0;
  const std::size_t n = v.size();
  auto less_rot = [&](std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < n; ++k) {
      const auto& a = v[(i + k) % n];
      const auto& b = v[(j + k) % n];
      if (a < b) return true;
      if (b < a) return false;
    }
    return false;
  };
  for (std::size_t i = 1; i < n; ++i)
    if (less_rot(i, best)) best = i;
  std::rotate(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(best), v.end());
  return v;
}

}  // namespace

LatticePath erase_backtracks(const LatticePath& p, EraseMode mode) {
  if (!p.valid()) throw ParameterError("edge sequence is not a path");
  if (mode == EraseMode::All && !p.empty() && !p.closed())
    throw UsageError("full backtrack erasure requires a closed path");
  auto v = erase_interior(p.edges);
  if (mode == EraseMode::All) v = erase_terminal(std::move(v));
  return LatticePath{std::move(v)};
}

Loop::Loop(std::vector<OrientedEdge> edges) : edges_(minimal_rotation(std::move(edges))) {}

Line::Line(std::vector<OrientedEdge> edges) : edges_(std::move(edges)) {
  if (edges_.empty()) throw UsageError("nonempty Line constructor given no edges; use null_at");
  site_ = edges_.front().from;
}

Line Line::null_at(std::int32_t x) {
  Line l;
  l.site_ = x;
  return l;
}

bool is_loop(const LatticeString& s) { return std::holds_alternative<Loop>(s); }
bool is_line(const LatticeString& s) { return std::holds_alternative<Line>(s); }

const std::vector<OrientedEdge>& string_edges(const LatticeString& s) {
  if (is_loop(s)) return std::get<Loop>(s).edges();
  return std::get<Line>(s).edges();
}

std::size_t string_size(const LatticeString& s) { return string_edges(s).size(); }

Line line_core(std::vector<OrientedEdge> edges, std::int32_t site) {
  auto v = erase_interior(edges);
  if (v.empty()) return Line::null_at(site);
  return Line(std::move(v));
}

Loop loop_core(std::vector<OrientedEdge> edges) {
  return Loop(erase_terminal(erase_interior(std::move(edges))));
}

LatticeString nonbacktracking_core(const LatticePath& p, CoreKind kind) {
  if (!p.valid()) throw ParameterError("edge sequence is not a path");
  if (kind == CoreKind::Loop) {
    if (!p.empty() && !p.closed()) throw UsageError("loop core requires a closed path");
    return loop_core(p.edges);
  }
  if (p.empty()) throw UsageError("line core of a null path has no anchor site");
  return line_core(p.edges, p.edges.front().from);
}

LatticeString reverse(const LatticeString& s) {
  std::vector<OrientedEdge> rev;
  const auto& e = string_edges(s);
  rev.reserve(e.size());
  for (auto it = e.rbegin(); it != e.rend(); ++it) rev.push_back(it->inverse());
  if (is_loop(s)) return Loop(std::move(rev));
  if (rev.empty()) return std::get<Line>(s);  // null-line is its own reverse
  return Line(std::move(rev));
}

std::vector<EdgeLocation> locations_of(const LatticeString& s, const OrientedEdge& e) {
  std::vector<EdgeLocation> out;
  const auto& edges = string_edges(s);
  const OrientedEdge inv = e.inverse();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i] == e) out.push_back({i, false});
    else if (edges[i] == inv) out.push_back({i, true});
  }
  return out;
}

int edge_signed_count(const LatticeString& s, const OrientedEdge& e) {
  int t = 0;
  for (const auto& loc : locations_of(s, e)) t += loc.inverted ? -1 : +1;
  return t;
}

StringCollection::StringCollection(std::vector<LatticeString> strings)
    : strings_(std::move(strings)) {
  std::erase_if(strings_, [](const LatticeString& s) {
    return is_loop(s) && std::get<Loop>(s).null();
  });
}

StringCollection normalize_collection(std::vector<LatticeString> strings) {
  return StringCollection(std::move(strings));
}

// --- text grammar -----------------------------------------------------------

namespace {

const char* kAxisNames = "xyzw";

int axis_from_token(const std::string& t, const LatticeGeometry& g, std::size_t pos) {
  if (t.size() == 1) {
    const char* p = std::strchr(kAxisNames, t[0]);
    if (p && p - kAxisNames < g.dim()) return static_cast<int>(p - kAxisNames);
  }
  if (t.size() >= 2 && t[0] == 'a') {
    int a = -1;
    try {
      a = std::stoi(t.substr(1));
    } catch (...) {
      throw ParseError("bad axis name '" + t + "'", pos);
    }
    if (a >= 0 && a < g.dim()) return a;
  }
  throw ParseError("bad axis name '" + t + "'", pos);
}

std::string axis_name(int a) {
  if (a < 4) return std::string(1, kAxisNames[a]);
  return "a" + std::to_string(a);
}

std::int32_t parse_vertex_at(const std::string& s, std::size_t& i, const LatticeGeometry& g) {
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  if (i >= s.size() || s[i] != '(') throw ParseError("expected '('", i);
  ++i;
  std::vector<int> c;
  std::string num;
  for (; i < s.size(); ++i) {
    char ch = s[i];
    if (ch == ',' || ch == ')') {
      if (num.empty()) throw ParseError("expected coordinate", i);
      c.push_back(std::stoi(num));
      num.clear();
      if (ch == ')') {
        ++i;
        if (static_cast<int>(c.size()) != g.dim())
          throw ParseError("expected " + std::to_string(g.dim()) + " coordinates", i);
        return g.vertex(c);
      }
    } else if (ch == '-' || ch == '+' || std::isdigit(static_cast<unsigned char>(ch))) {
      num.push_back(ch);
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      throw ParseError(std::string("unexpected character '") + ch + "' in vertex", i);
    }
  }
  throw ParseError("unterminated vertex", i);
}

}  // namespace

std::int32_t parse_vertex(const std::string& text, const LatticeGeometry& g) {
  std::size_t i = 0;
  auto v = parse_vertex_at(text, i, g);
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i != text.size()) throw ParseError("trailing text after vertex", i);
  return v;
}

std::string render_vertex(std::int32_t v, const LatticeGeometry& g) {
  auto c = g.coords(v);
  std::string out = "(";
  for (int i = 0; i < g.dim(); ++i) {
    if (i) out += ",";
    out += std::to_string(c[i]);
  }
  return out + ")";
}

OrientedEdge parse_edge(const std::string& text, const LatticeGeometry& g) {
  std::size_t i = 0;
  std::int32_t v = parse_vertex_at(text, i, g);
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i >= text.size() || (text[i] != '+' && text[i] != '-'))
    throw ParseError("expected +axis or -axis", i);
  int dir = text[i] == '+' ? +1 : -1;
  std::size_t start = ++i;
  while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  int axis = axis_from_token(text.substr(start, i - start), g, start);
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i != text.size()) throw ParseError("trailing text after edge", i);
  return g.edge(v, axis, dir);
}

std::string render_edge(const OrientedEdge& e, const LatticeGeometry& g) {
  return render_vertex(e.from, g) + (e.dir > 0 ? "+" : "-") + axis_name(e.axis);
}

LatticeString parse_string(const std::string& text, const LatticeGeometry& g) {
  std::istringstream iss(text);
  std::string head;
  iss >> head;
  if (head != "loop" && head != "line" && head != "nullline")
    throw ParseError("expected 'loop', 'line' or 'nullline'", 0);

  std::string rest;
  std::getline(iss, rest);
  std::size_t i = 0;
  std::int32_t v = parse_vertex_at(rest, i, g);

  if (head == "nullline") {
    while (i < rest.size() && std::isspace(static_cast<unsigned char>(rest[i]))) ++i;
    if (i != rest.size()) throw ParseError("trailing text after nullline", i);
    return Line::null_at(v);
  }

  std::vector<OrientedEdge> edges;
  std::int32_t cur = v;
  while (true) {
    while (i < rest.size() && std::isspace(static_cast<unsigned char>(rest[i]))) ++i;
    if (i >= rest.size()) break;
    if (rest[i] != '+' && rest[i] != '-') throw ParseError("expected +axis or -axis", i);
    int dir = rest[i] == '+' ? +1 : -1;
    std::size_t start = ++i;
    while (i < rest.size() && !std::isspace(static_cast<unsigned char>(rest[i]))) ++i;
    int axis = axis_from_token(rest.substr(start, i - start), g, start);
    auto e = g.edge(cur, axis, dir);
    edges.push_back(e);
    cur = e.to;
  }
  if (edges.empty()) throw ParseError("string has no edges; use 'nullline' for null-lines", i);
  LatticePath p{std::move(edges)};
  if (head == "loop") {
    if (!p.closed()) throw ParseError("loop does not close", i);
    return nonbacktracking_core(p, CoreKind::Loop);
  }
  return nonbacktracking_core(p, CoreKind::Line);
}

std::string render_string(const LatticeString& s, const LatticeGeometry& g) {
  const auto& edges = string_edges(s);
  std::string out;
  if (is_line(s) && edges.empty())
    return "nullline " + render_vertex(std::get<Line>(s).begin_point(), g);
  out = is_loop(s) ? "loop " : "line ";
  out += render_vertex(edges.front().from, g);
  for (const auto& e : edges) {
    out += e.dir > 0 ? " +" : " -";
    out += axis_name(e.axis);
  }
  return out;
}

std::vector<StringCollection> parse_collections_file(const std::string& text,
                                                     const LatticeGeometry& g) {
  std::vector<StringCollection> out;
  std::vector<LatticeString> group;
  std::istringstream iss(text);
  std::string line;
  auto flush = [&] {
    if (!group.empty()) {
      out.push_back(StringCollection(std::move(group)));
      group.clear();
    }
  };
  while (std::getline(iss, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    bool blank = line.find_first_not_of(" \t\r") == std::string::npos;
    if (blank) {
      flush();
      continue;
    }
    group.push_back(parse_string(line, g));
  }
  flush();
  return out;
}

}  // namespace ymh
