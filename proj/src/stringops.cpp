#include "ymh/stringops.hpp"

#include <algorithm>

#include "ymh/errors.hpp"

namespace ymh {

namespace {

using Edges = std::vector<OrientedEdge>;

Edges segment(const Edges& e, std::size_t lo, std::size_t hi) {
  return Edges(e.begin() + static_cast<std::ptrdiff_t>(lo),
               e.begin() + static_cast<std::ptrdiff_t>(hi));
}

Edges inv(const Edges& e) {
  Edges out;
  out.reserve(e.size());
  for (auto it = e.rbegin(); it != e.rend(); ++it) out.push_back(it->inverse());
  return out;
}

template <typename... Parts>
Edges cat(const Parts&... parts) {
  Edges out;
  out.reserve((parts.size() + ...));
  (out.insert(out.end(), parts.begin(), parts.end()), ...);
  return out;
}

Edges single(const OrientedEdge& e) { return Edges{e}; }

struct Decomp1 {
  Edges a, b;
  OrientedEdge f;
};

Decomp1 decompose(const LatticeString& l, std::size_t loc) {
  const auto& e = string_edges(l);
  if (loc >= e.size()) throw ParameterError("location out of range");
  return {segment(e, 0, loc), segment(e, loc + 1, e.size()), e[loc]};
}

struct Decomp2 {
  Edges a, b, c;
  OrientedEdge f1, f2;  // in position order
};

Decomp2 decompose2(const LatticeString& l, std::size_t x, std::size_t y) {
  if (x == y) throw ParameterError("locations must be distinct");
  auto [i, j] = std::minmax(x, y);
  const auto& e = string_edges(l);
  if (j >= e.size()) throw ParameterError("location out of range");
  return {segment(e, 0, i), segment(e, i + 1, j), segment(e, j + 1, e.size()), e[i], e[j]};
}

LatticeString core_like(const LatticeString& proto, Edges raw, std::int32_t fallback_site) {
  if (is_loop(proto)) return loop_core(std::move(raw));
  return line_core(std::move(raw), fallback_site);
}

std::int32_t begin_of(const LatticeString& l) {
  if (is_line(l)) return std::get<Line>(l).begin_point();
  const auto& e = string_edges(l);
  return e.empty() ? -1 : e.front().from;
}

}  // namespace

const char* op_kind_name(OpKind k) {
  switch (k) {
    case OpKind::Deformation: return "deformation";
    case OpKind::Breaking: return "breaking";
    case OpKind::Splitting: return "splitting";
    case OpKind::Twisting: return "twisting";
    case OpKind::Merger: return "merger";
    case OpKind::Switching: return "switching";
    case OpKind::Gluing: return "gluing";
    case OpKind::RGluing: return "R-gluing";
    case OpKind::Extension: return "extension";
    case OpKind::ExpansionPlaquette: return "expansion-plaquette";
    case OpKind::ExpansionEdgeAtEdge: return "expansion-edge-at-e";
    case OpKind::ExpansionEdgeAtSite: return "expansion-edge-at-x";
    case OpKind::ExpansionNull: return "expansion-null";
  }
  return "?";
}

const char* op_sign_name(OpSign s) {
  switch (s) {
    case OpSign::Positive: return "positive";
    case OpSign::Negative: return "negative";
    case OpSign::Unsigned: return "unsigned";
  }
  return "?";
}

SplitResult split(const LatticeString& l, std::size_t loc_x, std::size_t loc_y) {
  auto d = decompose2(l, loc_x, loc_y);
  if (d.f1 == d.f2) {
    // l = a f b f c  ->  ([a f c], [b f])
    auto first = core_like(l, cat(d.a, single(d.f1), d.c), begin_of(l));
    auto second = loop_core(cat(d.b, single(d.f2)));
    return {std::move(first), std::move(second), OpSign::Positive};
  }
  if (d.f2 == d.f1.inverse()) {
    // l = a f b f^{-1} c  ->  ([a c], [b])
    auto first = core_like(l, cat(d.a, d.c), begin_of(l));
    auto second = loop_core(d.b);
    return {std::move(first), std::move(second), OpSign::Negative};
  }
  throw DomainError("splitting locations do not hold e,e or e,e^{-1}");
}

LatticeString merge(const LatticeString& l, const LatticeString& lp, std::size_t loc_x,
                    std::size_t loc_y, OpSign sign) {
  if (is_line(l) && is_line(lp))
    throw DomainError("two lines cannot be merged; use switch_lines");
  if (sign == OpSign::Unsigned) throw ParameterError("merger sign must be positive or negative");
  const bool positive = sign == OpSign::Positive;

  if (is_loop(l) && is_loop(lp)) {
    auto [a, b, f] = decompose(l, loc_x);
    auto [c, d, g] = decompose(lp, loc_y);
    if (g == f) {
      if (positive) return loop_core(cat(a, single(f), d, c, single(f), b));
      auto ci = inv(c), di = inv(d);
      return loop_core(cat(a, ci, di, b));
    }
    if (g == f.inverse()) {
      if (positive) {
        auto ci = inv(c), di = inv(d);
        return loop_core(cat(a, single(f), ci, di, single(f), b));
      }
      return loop_core(cat(a, d, c, b));
    }
    throw DomainError("merger locations do not hold matching edges");
  }

  // exactly one line; paper roles: loop = a e b, line = c e d (or c e^{-1} d)
  const bool line_first = is_line(l);
  const LatticeString& loop_s = line_first ? lp : l;
  const LatticeString& line_s = line_first ? l : lp;
  auto [a, b, f] = decompose(loop_s, line_first ? loc_y : loc_x);
  auto [c, d, g] = decompose(line_s, line_first ? loc_x : loc_y);

  if (g == f) {
    if (positive)  // [c e b a e d], same for both argument orders
      return line_core(cat(c, single(f), b, a, single(f), d), begin_of(line_s));
    if (line_first) {  // [c a^{-1} b^{-1} d]
      auto ai = inv(a), bi = inv(b);
      return line_core(cat(c, ai, bi, d), begin_of(line_s));
    }
    // [d^{-1} b a c^{-1}]
    auto di = inv(d), ci = inv(c);
    return line_core(cat(di, b, a, ci), f.to);
  }
  if (g == f.inverse()) {
    if (!positive)  // [c b a d], same for both argument orders
      return line_core(cat(c, b, a, d), begin_of(line_s));
    if (line_first) {  // [c e^{-1} a^{-1} b^{-1} e^{-1} d] with e^{-1} = g
      auto ai = inv(a), bi = inv(b);
      return line_core(cat(c, single(g), ai, bi, single(g), d), begin_of(line_s));
    }
    // [d^{-1} e b a e c^{-1}]
    auto di = inv(d), ci = inv(c);
    return line_core(cat(di, single(f), b, a, single(f), ci), f.from);
  }
  throw DomainError("merger locations do not hold matching edges");
}

std::pair<Line, Line> switch_lines(const Line& l1, const Line& l2, std::size_t loc_x,
                                   std::size_t loc_y, OpSign sign) {
  if (sign == OpSign::Unsigned) throw ParameterError("switching sign must be positive or negative");
  auto [a, b, f] = decompose(l1, loc_x);
  auto [c, d, g] = decompose(l2, loc_y);
  const bool positive = sign == OpSign::Positive;
  if (g == f) {
    if (positive)  // ([a e d], [c e b])
      return {line_core(cat(a, single(f), d), l1.begin_point()),
              line_core(cat(c, single(f), b), l2.begin_point())};
    // ([a c^{-1}], [d^{-1} b])
    auto ci = inv(c), di = inv(d);
    return {line_core(cat(a, ci), f.from), line_core(cat(di, b), f.to)};
  }
  if (g == f.inverse()) {
    if (positive) {  // ([a e c^{-1}], [d^{-1} e b])
      auto ci = inv(c), di = inv(d);
      return {line_core(cat(a, single(f), ci), l1.begin_point()),
              line_core(cat(di, single(f), b), f.from)};
    }
    // ([a d], [c b])
    return {line_core(cat(a, d), f.from), line_core(cat(c, b), f.to)};
  }
  throw DomainError("switching locations do not hold matching edges");
}

LatticeString deform(const LatticeString& l, std::size_t loc, const Plaquette& p, OpSign sign) {
  const OrientedEdge f = string_edges(l).at(loc);
  const OrientedEdge want = sign == OpSign::Positive ? f : f.inverse();
  Loop ploop(Edges(p.edges.begin(), p.edges.end()));
  auto locs = locations_of(ploop, want);
  std::size_t at = std::string::npos;
  for (const auto& le : locs)
    if (!le.inverted) { at = le.index; break; }
  if (at == std::string::npos)
    throw DomainError(sign == OpSign::Positive ? "positive deformation needs p > e"
                                               : "negative deformation needs p > e^{-1}");
  return merge(l, LatticeString(ploop), loc, at, sign);
}

std::vector<LatticeString> break_at(const LatticeString& l, std::size_t loc, OpSign sign) {
  if (is_line(l) && std::get<Line>(l).null()) throw DomainError("cannot break a null-line");
  if (sign == OpSign::Unsigned) throw ParameterError("breaking sign must be positive or negative");
  auto [a, b, f] = decompose(l, loc);
  if (is_loop(l)) {
    if (sign == OpSign::Negative) return {line_core(cat(b, a), f.to)};
    return {line_core(cat(single(f), b, a, single(f)), f.from)};
  }
  const auto& ln = std::get<Line>(l);
  if (sign == OpSign::Negative)
    return {line_core(a, ln.begin_point()), line_core(b, ln.end_point())};
  return {line_core(cat(a, single(f)), ln.begin_point()),
          line_core(cat(single(f), b), f.from)};
}

TwistResult twist(const LatticeString& l, std::size_t loc_x, std::size_t loc_y) {
  auto d = decompose2(l, loc_x, loc_y);
  if (d.f1 == d.f2) {
    // l = a f b f c  ->  [a b^{-1} c], negative twisting
    auto bi = inv(d.b);
    return {core_like(l, cat(d.a, bi, d.c), begin_of(l)), OpSign::Negative};
  }
  if (d.f2 == d.f1.inverse()) {
    // l = a f b f^{-1} c  ->  [a f b^{-1} f^{-1} c], positive twisting
    auto bi = inv(d.b);
    return {core_like(l, cat(d.a, single(d.f1), bi, single(d.f2), d.c), begin_of(l)),
            OpSign::Positive};
  }
  throw DomainError("twisting locations do not hold e,e or e,e^{-1}");
}

Loop glue(const Line& l) {
  if (l.begin_point() != l.end_point())
    throw DomainError("gluing a single line requires u = v");
  return loop_core(l.edges());
}

Line glue(const Line& l1, const Line& l2, GluePairing pairing) {
  switch (pairing) {
    case GluePairing::EndToBegin:
      if (l1.end_point() != l2.begin_point()) throw DomainError("gluing requires v(l1) = u(l2)");
      return line_core(cat(l1.edges(), l2.edges()), l1.begin_point());
    case GluePairing::BeginToBegin: {
      if (l1.begin_point() != l2.begin_point())
        throw DomainError("R-gluing requires u(l1) = u(l2)");
      auto i1 = inv(l1.edges());
      return line_core(cat(i1, l2.edges()), l1.end_point());
    }
    case GluePairing::EndToEnd: {
      if (l1.end_point() != l2.end_point()) throw DomainError("R-gluing requires v(l1) = v(l2)");
      auto i2 = inv(l2.edges());
      return line_core(cat(l1.edges(), i2), l1.begin_point());
    }
  }
  throw ParameterError("bad pairing");
}

Line extend(const Line& l, const OrientedEdge& e, LineEnd end) {
  if (end == LineEnd::End) {
    if (l.end_point() != e.from) throw DomainError("extension at end requires v(l) = u(e)");
    return line_core(cat(l.edges(), single(e)), l.begin_point());
  }
  if (l.begin_point() != e.to) throw DomainError("extension at begin requires u(l) = v(e)");
  return line_core(cat(single(e), l.edges()), e.from);
}

// --- enumeration -------------------------------------------------------------

std::vector<OpFamily> all_edge_families() {
  return {OpFamily::Deformation,        OpFamily::Breaking, OpFamily::Splitting,
          OpFamily::Twisting,           OpFamily::Merger,   OpFamily::Switching,
          OpFamily::ExpansionPlaquette, OpFamily::ExpansionEdgeAtEdge};
}

std::vector<OpFamily> all_site_families() {
  return {OpFamily::Extension, OpFamily::ExpansionEdgeAtSite, OpFamily::ExpansionNull,
          OpFamily::Gluing, OpFamily::RGluing};
}

namespace {

bool has(const std::vector<OpFamily>& fams, OpFamily f) {
  return std::find(fams.begin(), fams.end(), f) != fams.end();
}

std::vector<LatticeString> replace_at(const std::vector<LatticeString>& s, int i,
                                      LatticeString repl) {
  auto out = s;
  out[static_cast<std::size_t>(i)] = std::move(repl);
  return out;
}

std::vector<LatticeString> replace_insert(const std::vector<LatticeString>& s, int i,
                                          LatticeString first, LatticeString second) {
  auto out = s;
  out[static_cast<std::size_t>(i)] = std::move(first);
  out.insert(out.begin() + i + 1, std::move(second));
  return out;
}

std::vector<LatticeString> insert_at(const std::vector<LatticeString>& s, int pos,
                                     std::vector<LatticeString> items) {
  auto out = s;
  out.insert(out.begin() + pos, std::make_move_iterator(items.begin()),
             std::make_move_iterator(items.end()));
  return out;
}

std::vector<LatticeString> merge_pair(const std::vector<LatticeString>& s, int i, int j,
                                      LatticeString merged) {
  auto out = s;
  out[static_cast<std::size_t>(std::min(i, j))] = std::move(merged);
  out.erase(out.begin() + std::max(i, j));
  return out;
}

struct EdgeLoc {
  int comp;
  int pos;
};

std::vector<EdgeLoc> all_locations(const StringCollection& s, const OrientedEdge& e) {
  std::vector<EdgeLoc> out;
  for (int i = 0; i < static_cast<int>(s.size()); ++i)
    for (const auto& le : locations_of(s.strings()[static_cast<std::size_t>(i)], e))
      out.push_back({i, static_cast<int>(le.index)});
  return out;
}

}  // namespace

std::vector<OperationEntry> enumerate_edge_ops(const StringCollection& s, const OrientedEdge& e,
                                               const LatticeGeometry& g,
                                               const std::vector<OpFamily>& families) {
  if (!g.valid_edge(e)) throw ParameterError("anchor edge does not belong to the lattice");
  for (auto f : families)
    if (!has(all_edge_families(), f))
      throw UsageError("site-type operation family requested for an edge anchor");

  const auto& comps = s.strings();
  auto locs = all_locations(s, e);
  std::vector<OperationEntry> out;

  for (const auto& [ci, pos] : locs) {
    const auto& comp = comps[static_cast<std::size_t>(ci)];
    const OrientedEdge f = string_edges(comp)[static_cast<std::size_t>(pos)];

    if (has(families, OpFamily::Deformation)) {
      for (const auto& p : g.plaquettes_through(f)) {
        OperationEntry en{OpKind::Deformation, OpSign::Positive, UClass::None,
                          replace_at(comps, ci, deform(comp, static_cast<std::size_t>(pos), p,
                                                       OpSign::Positive))};
        en.comp_a = ci;
        en.loc_a = pos;
        en.plaq = p;
        out.push_back(std::move(en));
      }
      for (const auto& p : g.plaquettes_through(f.inverse())) {
        OperationEntry en{OpKind::Deformation, OpSign::Negative, UClass::None,
                          replace_at(comps, ci, deform(comp, static_cast<std::size_t>(pos), p,
                                                       OpSign::Negative))};
        en.comp_a = ci;
        en.loc_a = pos;
        en.plaq = p;
        out.push_back(std::move(en));
      }
    }

    if (has(families, OpFamily::Breaking)) {
      for (OpSign sg : {OpSign::Positive, OpSign::Negative}) {
        auto pieces = break_at(comp, static_cast<std::size_t>(pos), sg);
        OperationEntry en{OpKind::Breaking, sg, UClass::None, {}};
        if (pieces.size() == 1)
          en.result = replace_at(comps, ci, std::move(pieces[0]));
        else
          en.result = replace_insert(comps, ci, std::move(pieces[0]), std::move(pieces[1]));
        en.comp_a = ci;
        en.loc_a = pos;
        out.push_back(std::move(en));
      }
    }

    if (has(families, OpFamily::ExpansionPlaquette)) {
      for (const auto& p : g.plaquettes_through(f.inverse())) {
        OperationEntry en{OpKind::ExpansionPlaquette, OpSign::Positive, UClass::None,
                          insert_at(comps, ci + 1, {LatticeString(Loop(
                              Edges(p.edges.begin(), p.edges.end())))})};
        en.comp_a = ci;
        en.loc_a = pos;
        en.plaq = p;
        out.push_back(std::move(en));
      }
      for (const auto& p : g.plaquettes_through(f)) {
        OperationEntry en{OpKind::ExpansionPlaquette, OpSign::Negative, UClass::None,
                          insert_at(comps, ci + 1, {LatticeString(Loop(
                              Edges(p.edges.begin(), p.edges.end())))})};
        en.comp_a = ci;
        en.loc_a = pos;
        en.plaq = p;
        out.push_back(std::move(en));
      }
    }

    if (has(families, OpFamily::ExpansionEdgeAtEdge)) {
      OperationEntry pe{OpKind::ExpansionEdgeAtEdge, OpSign::Positive, UClass::None,
                        insert_at(comps, ci + 1, {LatticeString(Line({f.inverse()}))})};
      pe.comp_a = ci;
      pe.loc_a = pos;
      pe.edge = f.inverse();
      out.push_back(std::move(pe));
      OperationEntry ne{OpKind::ExpansionEdgeAtEdge, OpSign::Negative, UClass::None,
                        insert_at(comps, ci + 1, {LatticeString(Line({f}))})};
      ne.comp_a = ci;
      ne.loc_a = pos;
      ne.edge = f;
      out.push_back(std::move(ne));
    }
  }

  // splittings and twistings: ordered location pairs within one component
  if (has(families, OpFamily::Splitting) || has(families, OpFamily::Twisting)) {
    for (std::size_t ia = 0; ia < locs.size(); ++ia) {
      for (std::size_t ib = 0; ib < locs.size(); ++ib) {
        if (ia == ib || locs[ia].comp != locs[ib].comp) continue;
        const int ci = locs[ia].comp;
        const auto& comp = comps[static_cast<std::size_t>(ci)];
        const auto x = static_cast<std::size_t>(locs[ia].pos);
        const auto y = static_cast<std::size_t>(locs[ib].pos);
        if (has(families, OpFamily::Splitting)) {
          auto sp = split(comp, x, y);
          OperationEntry en{OpKind::Splitting, sp.sign, UClass::None,
                            replace_insert(comps, ci, std::move(sp.first),
                                           LatticeString(std::move(sp.second)))};
          en.comp_a = ci;
          en.loc_a = locs[ia].pos;
          en.loc_b = locs[ib].pos;
          out.push_back(std::move(en));
        }
        if (has(families, OpFamily::Twisting)) {
          auto tw = twist(comp, x, y);
          OperationEntry en{OpKind::Twisting, tw.sign, UClass::None,
                            replace_at(comps, ci, std::move(tw.result))};
          en.comp_a = ci;
          en.loc_a = locs[ia].pos;
          en.loc_b = locs[ib].pos;
          out.push_back(std::move(en));
        }
      }
    }
  }

  // mergers and switchings: ordered component pairs
  if (has(families, OpFamily::Merger) || has(families, OpFamily::Switching)) {
    for (std::size_t ia = 0; ia < locs.size(); ++ia) {
      for (std::size_t ib = 0; ib < locs.size(); ++ib) {
        if (locs[ia].comp == locs[ib].comp) continue;
        const int ci = locs[ia].comp, cj = locs[ib].comp;
        const auto& li = comps[static_cast<std::size_t>(ci)];
        const auto& lj = comps[static_cast<std::size_t>(cj)];
        const auto x = static_cast<std::size_t>(locs[ia].pos);
        const auto y = static_cast<std::size_t>(locs[ib].pos);
        const OrientedEdge f1 = string_edges(li)[x];
        const OrientedEdge f2 = string_edges(lj)[y];
        const bool same = f1 == f2;
        const bool both_lines = is_line(li) && is_line(lj);

        if (both_lines && has(families, OpFamily::Switching)) {
          for (OpSign sg : {OpSign::Positive, OpSign::Negative}) {
            auto [r1, r2] = switch_lines(std::get<Line>(li), std::get<Line>(lj), x, y, sg);
            auto res = replace_at(comps, ci, LatticeString(std::move(r1)));
            res[static_cast<std::size_t>(cj)] = LatticeString(std::move(r2));
            OperationEntry en{OpKind::Switching, sg, UClass::None, std::move(res)};
            en.uclass = (sg == OpSign::Positive) == same ? UClass::U : UClass::NotU;
            en.comp_a = ci;
            en.comp_b = cj;
            en.loc_a = locs[ia].pos;
            en.loc_b = locs[ib].pos;
            out.push_back(std::move(en));
          }
        } else if (!both_lines && has(families, OpFamily::Merger)) {
          for (OpSign sg : {OpSign::Positive, OpSign::Negative}) {
            auto merged = merge(li, lj, x, y, sg);
            OperationEntry en{OpKind::Merger, sg, UClass::None,
                              merge_pair(comps, ci, cj, std::move(merged))};
            en.uclass = (sg == OpSign::Positive) == same ? UClass::U : UClass::NotU;
            en.comp_a = ci;
            en.comp_b = cj;
            en.loc_a = locs[ia].pos;
            en.loc_b = locs[ib].pos;
            out.push_back(std::move(en));
          }
        }
      }
    }
  }

  return out;
}

namespace {

struct SiteOcc {
  int comp;
  LineEnd end;
};

std::vector<SiteOcc> site_occurrences(const StringCollection& s, std::int32_t x) {
  std::vector<SiteOcc> out;
  for (int i = 0; i < static_cast<int>(s.size()); ++i) {
    const auto& c = s.strings()[static_cast<std::size_t>(i)];
    if (!is_line(c)) continue;
    const auto& ln = std::get<Line>(c);
    if (ln.begin_point() == x) out.push_back({i, LineEnd::Begin});
    if (ln.end_point() == x) out.push_back({i, LineEnd::End});
  }
  return out;
}

}  // namespace

std::vector<OperationEntry> enumerate_site_ops(const StringCollection& s, std::int32_t x,
                                               const LatticeGeometry& g,
                                               const std::vector<OpFamily>& families,
                                               int max_null) {
  if (!g.valid_vertex(x)) throw ParameterError("anchor vertex does not belong to the lattice");
  for (auto f : families)
    if (!has(all_site_families(), f))
      throw UsageError("edge-type operation family requested for a site anchor");

  const auto& comps = s.strings();
  auto occs = site_occurrences(s, x);
  std::vector<OperationEntry> out;

  auto outgoing = g.edges_at_site(x);  // u(f) = x

  for (const auto& occ : occs) {
    const auto& ln = std::get<Line>(comps[static_cast<std::size_t>(occ.comp)]);

    if (has(families, OpFamily::Extension)) {
      for (const auto& f : outgoing) {
        OperationEntry en{OpKind::Extension, OpSign::Unsigned, UClass::None, {}};
        if (occ.end == LineEnd::Begin) {
          en.result = replace_at(comps, occ.comp, LatticeString(extend(ln, f.inverse(),
                                                                       LineEnd::Begin)));
          en.edge = f.inverse();
        } else {
          en.result = replace_at(comps, occ.comp, LatticeString(extend(ln, f, LineEnd::End)));
          en.edge = f;
        }
        en.comp_a = occ.comp;
        en.end_a = occ.end;
        out.push_back(std::move(en));
      }
    }

    if (has(families, OpFamily::ExpansionEdgeAtSite)) {
      // both orientations of every incident edge
      for (const auto& base : outgoing) {
        for (const auto& f : {base, base.inverse()}) {
          OperationEntry en{OpKind::ExpansionEdgeAtSite, OpSign::Unsigned, UClass::None, {}};
          if (occ.end == LineEnd::Begin)
            en.result = insert_at(comps, occ.comp, {LatticeString(Line({f}))});
          else
            en.result = insert_at(comps, occ.comp + 1, {LatticeString(Line({f}))});
          en.comp_a = occ.comp;
          en.end_a = occ.end;
          en.edge = f;
          out.push_back(std::move(en));
        }
      }
    }

    if (has(families, OpFamily::ExpansionNull)) {
      for (int k = 1; k <= max_null; ++k) {
        std::vector<LatticeString> nulls(static_cast<std::size_t>(k),
                                         LatticeString(Line::null_at(x)));
        OperationEntry en{OpKind::ExpansionNull, OpSign::Unsigned, UClass::None, {}};
        en.result = insert_at(comps, occ.end == LineEnd::Begin ? occ.comp : occ.comp + 1,
                              std::move(nulls));
        en.comp_a = occ.comp;
        en.end_a = occ.end;
        en.null_count = k;
        out.push_back(std::move(en));
      }
    }
  }

  // gluings: unordered occurrence pairs
  if (has(families, OpFamily::Gluing) || has(families, OpFamily::RGluing)) {
    for (std::size_t a = 0; a < occs.size(); ++a) {
      for (std::size_t b = a + 1; b < occs.size(); ++b) {
        const auto& oa = occs[a];
        const auto& ob = occs[b];
        if (oa.comp == ob.comp) {
          // a line with u = v = x; its (begin, end) pair glues into a loop
          if (oa.end == ob.end || !has(families, OpFamily::Gluing)) continue;
          const auto& ln = std::get<Line>(comps[static_cast<std::size_t>(oa.comp)]);
          OperationEntry en{OpKind::Gluing, OpSign::Unsigned, UClass::None,
                            replace_at(comps, oa.comp, LatticeString(glue(ln)))};
          en.comp_a = oa.comp;
          en.comp_b = oa.comp;
          en.end_a = oa.end;
          en.end_b = ob.end;
          out.push_back(std::move(en));
          continue;
        }
        const auto& la = std::get<Line>(comps[static_cast<std::size_t>(oa.comp)]);
        const auto& lb = std::get<Line>(comps[static_cast<std::size_t>(ob.comp)]);
        if (oa.end != ob.end) {
          if (!has(families, OpFamily::Gluing)) continue;
          // plain gluing: concatenate ending line then beginning line
          Line glued = oa.end == LineEnd::End ? glue(la, lb, GluePairing::EndToBegin)
                                              : glue(lb, la, GluePairing::EndToBegin);
          OperationEntry en{OpKind::Gluing, OpSign::Unsigned, UClass::None,
                            merge_pair(comps, oa.comp, ob.comp, LatticeString(std::move(glued)))};
          en.comp_a = oa.comp;
          en.comp_b = ob.comp;
          en.end_a = oa.end;
          en.end_b = ob.end;
          out.push_back(std::move(en));
        } else {
          if (!has(families, OpFamily::RGluing)) continue;
          Line glued = oa.end == LineEnd::Begin ? glue(la, lb, GluePairing::BeginToBegin)
                                                : glue(la, lb, GluePairing::EndToEnd);
          OperationEntry en{OpKind::RGluing, OpSign::Unsigned, UClass::None,
                            merge_pair(comps, oa.comp, ob.comp, LatticeString(std::move(glued)))};
          en.comp_a = oa.comp;
          en.comp_b = ob.comp;
          en.end_a = oa.end;
          en.end_b = ob.end;
          out.push_back(std::move(en));
        }
      }
    }
  }

  return out;
}

EdgeCounts edge_counts(const StringCollection& s, const OrientedEdge& e) {
  EdgeCounts out;
  for (const auto& c : s.strings()) {
    int r = static_cast<int>(locations_of(c, e).size());
    int t = edge_signed_count(c, e);
    out.r_per_component.push_back(r);
    out.t_per_component.push_back(t);
    out.r += r;
    out.t += t;
  }
  return out;
}

int site_count(const StringCollection& s, std::int32_t x) {
  return static_cast<int>(site_occurrences(s, x).size());
}

std::string render_entry(const OperationEntry& entry, const LatticeGeometry& g) {
  std::string out = op_kind_name(entry.kind);
  out += " ";
  out += op_sign_name(entry.sign);
  if (entry.uclass != UClass::None)
    out += entry.uclass == UClass::U ? " U" : " notU";
  out += " comp=" + std::to_string(entry.comp_a);
  if (entry.comp_b >= 0) out += "," + std::to_string(entry.comp_b);
  if (entry.loc_a >= 0) {
    out += " loc=" + std::to_string(entry.loc_a);
    if (entry.loc_b >= 0) out += "," + std::to_string(entry.loc_b);
  }
  if (entry.end_a) out += std::string(" end=") + (*entry.end_a == LineEnd::Begin ? "u" : "v");
  if (entry.end_b) out += *entry.end_b == LineEnd::Begin ? ",u" : ",v";
  if (entry.edge) out += " edge=" + render_edge(*entry.edge, g);
  if (entry.plaq) {
    out += " plaq=";
    for (int i = 0; i < 4; ++i) out += (i ? " " : "") + render_edge(entry.plaq->edges[i], g);
  }
  if (entry.null_count > 0) out += " k=" + std::to_string(entry.null_count);
  out += " -> ";
  if (entry.result.empty()) out += "(empty)";
  for (std::size_t i = 0; i < entry.result.size(); ++i) {
    if (i) out += " | ";
    out += render_string(entry.result[i], g);
  }
  return out;
}

}  // namespace ymh
