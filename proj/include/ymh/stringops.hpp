#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ymh/geometry.hpp"
#include "ymh/strings.hpp"

namespace ymh {

enum class OpKind {
  Deformation,
  Breaking,
  Splitting,
  Twisting,
  Merger,
  Switching,
  Gluing,
  RGluing,
  Extension,
  ExpansionPlaquette,   // at an edge, appends a plaquette loop
  ExpansionEdgeAtEdge,  // at an edge, appends a single-edge line
  ExpansionEdgeAtSite,  // at a line endpoint, appends a single-edge line
  ExpansionNull,        // at a line endpoint, appends k null-lines
};

enum class OpSign { Positive, Negative, Unsigned };

/** Same-edge vs opposite-edge pattern classification for mergers/switchings. */
enum class UClass { None, U, NotU };

enum class LineEnd { Begin, End };

const char* op_kind_name(OpKind k);
const char* op_sign_name(OpSign s);

/**
 * One element of an operation multiset: the resulting string sequence (raw,
 * null-loops retained) plus enough location metadata to re-derive it.
 */
struct OperationEntry {
  OpKind kind;
  OpSign sign = OpSign::Unsigned;
  UClass uclass = UClass::None;
  std::vector<LatticeString> result;

  int comp_a = -1;               // first (or only) component operated on
  int comp_b = -1;               // second component, for mergers/switchings/gluings
  int loc_a = -1;                // edge location in comp_a
  int loc_b = -1;                // edge location in comp_b (or second location in comp_a)
  std::optional<LineEnd> end_a;  // endpoint used in comp_a, for site operations
  std::optional<LineEnd> end_b;
  std::optional<Plaquette> plaq;     // plaquette used (deformation / expansion)
  std::optional<OrientedEdge> edge;  // edge used (extension / expansions by an edge)
  int null_count = 0;                // k, for ExpansionNull
};

// --- single-string operations (section-level definitions) -------------------

struct SplitResult {
  LatticeString first;  // keeps the variant of the input
  Loop second;
  OpSign sign;
};

/** Splitting at two locations holding e,e (positive) or e,e^{-1} (negative). */
SplitResult split(const LatticeString& l, std::size_t loc_x, std::size_t loc_y);

/**
 * Merger of two strings at matching locations; at most one input may be a
 * line, and the line/loop roles follow the argument order. Two lines are a
 * switching, not a merger.
 */
LatticeString merge(const LatticeString& l, const LatticeString& lp, std::size_t loc_x,
                    std::size_t loc_y, OpSign sign);

/** Switching of two lines; returns the replacements for (first, second). */
std::pair<Line, Line> switch_lines(const Line& l1, const Line& l2, std::size_t loc_x,
                                   std::size_t loc_y, OpSign sign);

/** Merging a plaquette into a string: p > e for positive, p > e^{-1} for negative. */
LatticeString deform(const LatticeString& l, std::size_t loc, const Plaquette& p, OpSign sign);

/** Breaking at a location; one line from a loop, two lines from a line. */
std::vector<LatticeString> break_at(const LatticeString& l, std::size_t loc, OpSign sign);

struct TwistResult {
  LatticeString result;
  OpSign sign;  // same edge at both locations -> negative; opposite -> positive
};

TwistResult twist(const LatticeString& l, std::size_t loc_x, std::size_t loc_y);

/** Glue a closed line (u = v) into a loop. */
Loop glue(const Line& l);

enum class GluePairing { EndToBegin, BeginToBegin, EndToEnd };

/** Glue two lines; BeginToBegin / EndToEnd are the R-gluings. */
Line glue(const Line& l1, const Line& l2, GluePairing pairing);

/** Extension of a line by one edge at the chosen endpoint. */
Line extend(const Line& l, const OrientedEdge& e, LineEnd end);

// --- operation multisets -----------------------------------------------------

enum class OpFamily {
  Deformation,
  Breaking,
  Splitting,
  Twisting,
  Merger,
  Switching,
  ExpansionPlaquette,
  ExpansionEdgeAtEdge,
  Extension,
  ExpansionEdgeAtSite,
  ExpansionNull,
  Gluing,
  RGluing,
};

std::vector<OpFamily> all_edge_families();
std::vector<OpFamily> all_site_families();

/**
 * The full multiset of operations on `s` anchored at edge e (or e^{-1};
 * the sets coincide). Splitting/twisting run over ordered location pairs and
 * mergers/switchings over ordered component pairs, so coincident results keep
 * their multiplicity.
 *
 * `max_null` bounds k for ExpansionNull entries (site form); plaquette and
 * edge candidates come from `g`.
 */
std::vector<OperationEntry> enumerate_edge_ops(const StringCollection& s, const OrientedEdge& e,
                                               const LatticeGeometry& g,
                                               const std::vector<OpFamily>& families);

std::vector<OperationEntry> enumerate_site_ops(const StringCollection& s, std::int32_t x,
                                               const LatticeGeometry& g,
                                               const std::vector<OpFamily>& families,
                                               int max_null);

struct EdgeCounts {
  std::vector<int> r_per_component;
  std::vector<int> t_per_component;
  int r = 0;  // total occurrences of e or e^{-1}
  int t = 0;  // occurrences of e minus occurrences of e^{-1}
};

EdgeCounts edge_counts(const StringCollection& s, const OrientedEdge& e);

/** Endpoint incidences of x over line components; a u=v=x line contributes 2. */
int site_count(const StringCollection& s, std::int32_t x);

std::string render_entry(const OperationEntry& entry, const LatticeGeometry& g);

}  // namespace ymh
