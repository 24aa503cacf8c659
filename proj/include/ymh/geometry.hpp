#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <vector>

namespace ymh {

/**
 * Oriented lattice edge. Stores both endpoints so that inversion needs no
 * geometry lookup. `axis` is the lattice direction, `dir` is +1/-1 along it,
 * `from`/`to` are vertex indices.
 */
struct OrientedEdge {
  std::int32_t from = -1;
  std::int32_t to = -1;
  std::int8_t axis = 0;
  std::int8_t dir = +1;

  OrientedEdge inverse() const { return {to, from, axis, static_cast<std::int8_t>(-dir)}; }

  friend bool operator==(const OrientedEdge& a, const OrientedEdge& b) {
    return a.from == b.from && a.axis == b.axis && a.dir == b.dir;
  }
  // lexicographic on the encoding (base vertex, axis, dir); used for canonical rotations
  friend auto operator<=>(const OrientedEdge& a, const OrientedEdge& b) {
    if (auto c = a.from <=> b.from; c != 0) return c;
    if (auto c = a.axis <=> b.axis; c != 0) return c;
    return a.dir <=> b.dir;
  }
};

/** A 1x1 square loop of four oriented edges. */
struct Plaquette {
  std::array<OrientedEdge, 4> edges;
  bool counterclockwise = false;  // member of P+ (axes in increasing order)

  Plaquette inverse() const;
  friend bool operator==(const Plaquette& a, const Plaquette& b);
};

/**
 * The periodic lattice Z^d cap L T^d with unit spacing. Vertices are indexed
 * 0..L^d-1 with coordinate i varying fastest for axis i.
 */
class LatticeGeometry {
 public:
  LatticeGeometry(int d, int L);

  int dim() const { return d_; }
  int side() const { return L_; }
  std::int64_t num_vertices() const { return volume_; }
  std::int64_t num_positive_edges() const { return d_ * volume_; }
  std::int64_t num_positive_plaquettes() const { return d_ * (d_ - 1) / 2 * volume_; }

  std::vector<int> coords(std::int32_t v) const;
  std::int32_t vertex(const std::vector<int>& c) const;
  bool valid_vertex(std::int32_t v) const { return v >= 0 && v < volume_; }

  std::int32_t neighbor(std::int32_t v, int axis, int dir) const;

  /** Edge from v along +-axis. */
  OrientedEdge edge(std::int32_t v, int axis, int dir) const;
  bool valid_edge(const OrientedEdge& e) const;

  /** True iff u(e) precedes v(e) lexicographically (coordinates in {0..L-1}). */
  bool positively_oriented(const OrientedEdge& e) const;

  /** Link index in [0, d*L^d): canonical storage slot of the undirected edge. */
  std::int64_t link_index(const OrientedEdge& e) const;
  /** The geometric +axis edge occupying a link slot. */
  OrientedEdge link_edge(std::int64_t idx) const;

  /** All 2d oriented edges with u(e) = x. */
  std::vector<OrientedEdge> edges_at_site(std::int32_t x) const;

  /** The 2(d-1) plaquettes p with p > e, each rooted so that p.edges[0] == e. */
  std::vector<Plaquette> plaquettes_through(const OrientedEdge& e) const;

  /** All positively oriented plaquettes, rooted at their base corner. */
  std::vector<Plaquette> positive_plaquettes() const;

  /** Counterclockwise plaquette at base vertex v spanning axes a < b. */
  Plaquette plaquette(std::int32_t v, int a, int b) const;

 private:
  int d_;
  int L_;
  std::int64_t volume_;
  std::vector<std::int64_t> stride_;
};

}  // namespace ymh
