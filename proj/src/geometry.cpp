#include "ymh/geometry.hpp"

#include <algorithm>

#include "ymh/errors.hpp"

namespace ymh {

Plaquette Plaquette::inverse() const {
  Plaquette p;
  p.edges = {edges[3].inverse(), edges[2].inverse(), edges[1].inverse(), edges[0].inverse()};
  p.counterclockwise = !counterclockwise;
  return p;
}

bool operator==(const Plaquette& a, const Plaquette& b) {
  // plaquettes are cyclic words; compare modulo rotation
  for (int r = 0; r < 4; ++r) {
    bool same = true;
    for (int i = 0; i < 4; ++i)
      if (!(a.edges[i] == b.edges[(i + r) % 4])) { same = false; break; }
    if (same) return true;
  }
  return false;
}

LatticeGeometry::LatticeGeometry(int d, int L) : d_(d), L_(L) {
  if (d < 1) throw ParameterError("lattice dimension must be >= 1");
  if (L < 2) throw ParameterError("lattice side length must be >= 2");
  volume_ = 1;
  stride_.resize(d_);
  for (int i = 0; i < d_; ++i) {
    stride_[i] = volume_;
    volume_ *= L_;
  }
}

std::vector<int> LatticeGeometry::coords(std::int32_t v) const {
  if (!valid_vertex(v)) throw ParameterError("vertex index out of range");
  std::vector<int> c(d_);
  for (int i = 0; i < d_; ++i) {
    c[i] = static_cast<int>((v / stride_[i]) % L_);
  }
  return c;
}

std::int32_t LatticeGeometry::vertex(const std::vector<int>& c) const {
  if (static_cast<int>(c.size()) != d_) throw ParameterError("coordinate dimension mismatch");
  std::int64_t v = 0;
  for (int i = 0; i < d_; ++i) {
    int x = c[i] % L_;
    if (x < 0) x += L_;
    v += x * stride_[i];
  }
  return static_cast<std::int32_t>(v);
}

std::int32_t LatticeGeometry::neighbor(std::int32_t v, int axis, int dir) const {
  if (!valid_vertex(v)) throw ParameterError("vertex index out of range");
  if (axis < 0 || axis >= d_) throw ParameterError("axis out of range");
  int x = static_cast<int>((v / stride_[axis]) % L_);
  int nx = x + (dir > 0 ? 1 : -1);
  if (nx >= L_) nx -= L_;
  if (nx < 0) nx += L_;
  return static_cast<std::int32_t>(v + static_cast<std::int64_t>(nx - x) * stride_[axis]);
}

OrientedEdge LatticeGeometry::edge(std::int32_t v, int axis, int dir) const {
  return {v, neighbor(v, axis, dir), static_cast<std::int8_t>(axis),
          static_cast<std::int8_t>(dir > 0 ? +1 : -1)};
}

bool LatticeGeometry::valid_edge(const OrientedEdge& e) const {
  if (!valid_vertex(e.from) || e.axis < 0 || e.axis >= d_) return false;
  if (e.dir != 1 && e.dir != -1) return false;
  return e.to == neighbor(e.from, e.axis, e.dir);
}

bool LatticeGeometry::positively_oriented(const OrientedEdge& e) const {
  // compare coordinate representatives; the only differing coordinate is e.axis
  int xu = static_cast<int>((e.from / stride_[e.axis]) % L_);
  int xv = static_cast<int>((e.to / stride_[e.axis]) % L_);
  return xu < xv;
}

std::int64_t LatticeGeometry::link_index(const OrientedEdge& e) const {
  if (!valid_edge(e)) throw ParameterError("edge does not belong to the lattice");
  std::int32_t base = e.dir > 0 ? e.from : e.to;
  return static_cast<std::int64_t>(e.axis) * volume_ + base;
}

OrientedEdge LatticeGeometry::link_edge(std::int64_t idx) const {
  int axis = static_cast<int>(idx / volume_);
  auto v = static_cast<std::int32_t>(idx % volume_);
  return edge(v, axis, +1);
}

std::vector<OrientedEdge> LatticeGeometry::edges_at_site(std::int32_t x) const {
  if (!valid_vertex(x)) throw ParameterError("vertex index out of range");
  std::vector<OrientedEdge> out;
  out.reserve(2 * d_);
  for (int a = 0; a < d_; ++a) {
    out.push_back(edge(x, a, +1));
    out.push_back(edge(x, a, -1));
  }
  return out;
}

Plaquette LatticeGeometry::plaquette(std::int32_t v, int a, int b) const {
  if (a == b || a < 0 || b < 0 || a >= d_ || b >= d_)
    throw ParameterError("plaquette axes must be distinct and in range");
  Plaquette p;
  std::int32_t v1 = neighbor(v, a, +1);
  std::int32_t v2 = neighbor(v1, b, +1);
  std::int32_t v3 = neighbor(v, b, +1);
  p.edges = {edge(v, a, +1), edge(v1, b, +1), edge(v2, a, -1), edge(v3, b, -1)};
  p.counterclockwise = a < b;
  return p;
}

std::vector<Plaquette> LatticeGeometry::plaquettes_through(const OrientedEdge& e) const {
  if (!valid_edge(e)) throw ParameterError("edge does not belong to the lattice");
  std::vector<Plaquette> out;
  out.reserve(2 * (d_ - 1));
  for (int b = 0; b < d_; ++b) {
    if (b == e.axis) continue;
    // the two squares spanned by e and +-b, each rooted at e
    for (int s : {+1, -1}) {
      Plaquette p;
      std::int32_t v1 = e.to;
      std::int32_t v2 = neighbor(v1, b, s);
      std::int32_t v3 = neighbor(e.from, b, s);
      p.edges = {e, edge(v1, b, s), edge(v2, e.axis, -e.dir), edge(v3, b, -s)};
      // p is in P+ iff traversal matches the (min-axis, max-axis) ccw convention;
      // equivalent test: sign of the permutation (e.axis, dir), (b, s)
      bool ccw = (e.axis < b) ? (e.dir > 0) == (s > 0) : (e.dir > 0) != (s > 0);
      p.counterclockwise = ccw;
      out.push_back(p);
    }
  }
  return out;
}

std::vector<Plaquette> LatticeGeometry::positive_plaquettes() const {
  std::vector<Plaquette> out;
  out.reserve(static_cast<std::size_t>(num_positive_plaquettes()));
  for (int a = 0; a < d_; ++a)
    for (int b = a + 1; b < d_; ++b)
      for (std::int32_t v = 0; v < volume_; ++v) out.push_back(plaquette(v, a, b));
  return out;
}

}  // namespace ymh
