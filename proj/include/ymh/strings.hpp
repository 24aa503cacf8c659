#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "ymh/geometry.hpp"

namespace ymh {

/** A sequence of composable oriented edges; may be empty (null-path). */
struct LatticePath {
  std::vector<OrientedEdge> edges;

  bool valid() const;
  bool closed() const;
  bool empty() const { return edges.empty(); }
};

enum class EraseMode { InteriorOnly, All };

/**
 * Erases backtracks of the requested kind until none remain. The result is
 * independent of erasure order. Mode All additionally removes terminal
 * (cyclic) backtracks and requires a closed path.
 */
LatticePath erase_backtracks(const LatticePath& p, EraseMode mode);

/**
 * Closed nonbacktracking cycle stored as its lexicographically minimal
 * rotation. Zero edges = the null-loop.
 */
class Loop {
 public:
  Loop() = default;
  /** Canonicalizes; the input must already be closed and nonbacktracking. */
  explicit Loop(std::vector<OrientedEdge> edges);

  const std::vector<OrientedEdge>& edges() const { return edges_; }
  bool null() const { return edges_.empty(); }
  std::size_t size() const { return edges_.size(); }

  friend bool operator==(const Loop& a, const Loop& b) { return a.edges_ == b.edges_; }

 private:
  std::vector<OrientedEdge> edges_;
};

/**
 * Open line: nonempty edge sequence without interior backtracks (terminal
 * backtracks are allowed), or the null-line at a site.
 */
class Line {
 public:
  Line() = default;
  /** Nonempty line; the input must have no interior backtracks. */
  explicit Line(std::vector<OrientedEdge> edges);
  /** Null-line at site x. */
  static Line null_at(std::int32_t x);

  const std::vector<OrientedEdge>& edges() const { return edges_; }
  bool null() const { return edges_.empty(); }
  std::size_t size() const { return edges_.size(); }

  std::int32_t begin_point() const { return edges_.empty() ? site_ : edges_.front().from; }
  std::int32_t end_point() const { return edges_.empty() ? site_ : edges_.back().to; }

  friend bool operator==(const Line& a, const Line& b) {
    if (a.edges_.empty() && b.edges_.empty()) return a.site_ == b.site_;
    return a.edges_ == b.edges_;
  }

 private:
  std::vector<OrientedEdge> edges_;
  std::int32_t site_ = -1;
};

using LatticeString = std::variant<Loop, Line>;

bool is_loop(const LatticeString& s);
bool is_line(const LatticeString& s);
const std::vector<OrientedEdge>& string_edges(const LatticeString& s);
std::size_t string_size(const LatticeString& s);

enum class CoreKind { Line, Loop };

/**
 * The nonbacktracking core [p]. CoreKind::Loop requires a closed input and
 * erases all backtracks; CoreKind::Line erases interior backtracks only and
 * turns an empty result into the null-line at the path's begin point (which a
 * null path cannot supply, so empty input is rejected for lines).
 */
LatticeString nonbacktracking_core(const LatticePath& p, CoreKind kind);

/** Core of a raw edge sequence, null-line anchored at `site` if it cancels away. */
Line line_core(std::vector<OrientedEdge> edges, std::int32_t site);
Loop loop_core(std::vector<OrientedEdge> edges);

LatticeString reverse(const LatticeString& s);

struct EdgeLocation {
  std::size_t index;
  bool inverted;  // true if e^{-1} sits at this index
};

/** All positions where e or e^{-1} occurs (loop positions refer to the canonical rotation). */
std::vector<EdgeLocation> locations_of(const LatticeString& s, const OrientedEdge& e);

/** Occurrences of e minus occurrences of e^{-1}. */
int edge_signed_count(const LatticeString& s, const OrientedEdge& e);

/**
 * Ordered sequence of strings in null-loop-free normal form. Equality of
 * collections is sequence equality of the normal forms.
 */
class StringCollection {
 public:
  StringCollection() = default;
  explicit StringCollection(std::vector<LatticeString> strings);

  const std::vector<LatticeString>& strings() const { return strings_; }
  bool empty() const { return strings_.empty(); }
  std::size_t size() const { return strings_.size(); }

  friend bool operator==(const StringCollection& a, const StringCollection& b) {
    return a.strings_ == b.strings_;
  }

 private:
  std::vector<LatticeString> strings_;
};

StringCollection normalize_collection(std::vector<LatticeString> strings);

// --- text grammar -----------------------------------------------------------
// loop (c1,...,cd) +x -y ...     line (c1,...,cd) +x ...     nullline (c1,...,cd)
// axes named x,y,z,w or a0..a{d-1}

LatticeString parse_string(const std::string& text, const LatticeGeometry& g);
std::string render_string(const LatticeString& s, const LatticeGeometry& g);

OrientedEdge parse_edge(const std::string& text, const LatticeGeometry& g);
std::string render_edge(const OrientedEdge& e, const LatticeGeometry& g);

std::int32_t parse_vertex(const std::string& text, const LatticeGeometry& g);
std::string render_vertex(std::int32_t v, const LatticeGeometry& g);

/** Blank-line separated groups of one-string-per-line blocks. */
std::vector<StringCollection> parse_collections_file(const std::string& text,
                                                     const LatticeGeometry& g);

}  // namespace ymh
