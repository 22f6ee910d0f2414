#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "glt/admissible.hpp"
#include "glt/rational.hpp"

namespace glt {

// Dual graph of a marked prestable curve over an algebraically closed field:
// vertices are irreducible components with a genus, edges are nodes (loops
// allowed), marked points sit at smooth locations on a host vertex and carry
// a set of marking indices.  Marking indices 1..n each appear at exactly one
// point; points with empty marking sets are not representable (pruned form).
struct Vertex {
  std::string id;
  unsigned genus = 0;
};

struct Edge {
  std::string id;
  std::string ends[2];
};

struct MarkedPoint {
  std::string id;
  std::string vertex;
  std::vector<unsigned> markings;  // sorted, 1-based
};

class MarkedDualGraph {
 public:
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  std::vector<MarkedPoint> points;
  unsigned n_markings = 0;
  std::optional<RatVec> weights;  // a_i in (0,1], indexed by marking-1

  const Vertex* find_vertex(const std::string& id) const {
    for (const auto& v : vertices)
      if (v.id == id) return &v;
    return nullptr;
  }
  const Edge* find_edge(const std::string& id) const {
    for (const auto& e : edges)
      if (e.id == id) return &e;
    return nullptr;
  }
  const MarkedPoint* find_point(const std::string& id) const {
    for (const auto& p : points)
      if (p.id == id) return &p;
    return nullptr;
  }

  Rat weight_of(unsigned marking) const {
    if (!weights) throw error("graph carries no weights");
    return (*weights)[marking - 1];
  }

  Rat point_weight(const MarkedPoint& p) const {
    Rat s(0);
    for (auto i : p.markings) s += weight_of(i);
    return s;
  }

  // node branches at a vertex, loops counted twice
  unsigned valence(const std::string& vertex_id) const {
    unsigned c = 0;
    for (const auto& e : edges) {
      if (e.ends[0] == vertex_id) ++c;
      if (e.ends[1] == vertex_id) ++c;
    }
    return c;
  }

  void validate() const {
    std::set<std::string> vids, eids, pids;
    for (const auto& v : vertices)
      if (!vids.insert(v.id).second) throw error("duplicate vertex id: " + v.id);
    if (vertices.empty()) throw error("graph has no vertices");
    for (const auto& e : edges) {
      if (!eids.insert(e.id).second) throw error("duplicate edge id: " + e.id);
      if (!vids.count(e.ends[0]) || !vids.count(e.ends[1]))
        throw error("edge endpoint missing: " + e.id);
    }
    std::vector<bool> seen(n_markings, false);
    for (const auto& p : points) {
      if (!pids.insert(p.id).second) throw error("duplicate point id: " + p.id);
      if (eids.count(p.id)) throw error("point id collides with a node: " + p.id);
      if (!vids.count(p.vertex)) throw error("point host vertex missing: " + p.id);
      if (p.markings.empty()) throw error("point with empty marking set: " + p.id);
      if (!std::is_sorted(p.markings.begin(), p.markings.end()))
        throw error("marking set not sorted: " + p.id);
      for (auto i : p.markings) {
        if (i < 1 || i > n_markings) throw error("marking index out of range");
        if (seen[i - 1]) throw error("marking index appears twice");
        seen[i - 1] = true;
      }
    }
    for (unsigned i = 0; i < n_markings; ++i)
      if (!seen[i]) throw error("marking index missing from the graph");
    if (weights) {
      if (weights->size() != n_markings) throw error("weight count mismatch");
      for (const auto& a : *weights)
        if (a <= 0 || a > 1) throw error("weights must lie in (0,1]");
      for (const auto& p : points)
        if (point_weight(p) > 1) throw error("weight sum above 1 at point " + p.id);
    }
    // connectivity
    std::set<std::string> reach{vertices.front().id};
    for (bool grew = true; grew;) {
      grew = false;
      for (const auto& e : edges) {
        const bool a = reach.count(e.ends[0]), b = reach.count(e.ends[1]);
        if (a != b) {
          reach.insert(a ? e.ends[1] : e.ends[0]);
          grew = true;
        }
      }
    }
    if (reach.size() != vertices.size()) throw error("graph is not connected");
  }

  // arithmetic genus: sum of vertex genera plus the first Betti number
  unsigned genus() const {
    unsigned g = 0;
    for (const auto& v : vertices) g += v.genus;
    return g + static_cast<unsigned>(edges.size()) -
           static_cast<unsigned>(vertices.size()) + 1;
  }
};

// Generalized log twisted structure on a dual graph: a positive node index
// per edge (the multiplier of the simple inclusion at that node) and an
// admissible stalk per marked point.
struct GltStructure {
  std::map<std::string, Int> node_index;
  std::map<std::string, AdmissibleMonoid> stalks;

  const AdmissibleMonoid& stalk(const std::string& point) const {
    auto it = stalks.find(point);
    if (it == stalks.end()) throw error("no stalk at point " + point);
    return it->second;
  }
  const Int& index_of(const std::string& edge) const {
    auto it = node_index.find(edge);
    if (it == node_index.end()) throw error("no node index at edge " + edge);
    return it->second;
  }
};

inline GltStructure untwisted_structure(const MarkedDualGraph& g) {
  GltStructure s;
  for (const auto& e : g.edges) s.node_index.emplace(e.id, 1);
  for (const auto& p : g.points)
    s.stalks.emplace(p.id, AdmissibleMonoid::free(p.markings.size()));
  return s;
}

inline void validate_glt(const MarkedDualGraph& g, const GltStructure& s) {
  g.validate();
  if (s.node_index.size() != g.edges.size())
    throw error("node index count does not match edge count");
  for (const auto& e : g.edges) {
    if (s.index_of(e.id) < 1) throw error("node index below 1 at " + e.id);
  }
  if (s.stalks.size() != g.points.size())
    throw error("stalk count does not match point count");
  for (const auto& p : g.points) {
    if (s.stalk(p.id).rank() != p.markings.size())
      throw error("stalk rank mismatch at point " + p.id);
  }
}

inline FiniteAbelianGroup point_stabilizer(const MarkedDualGraph& g, const GltStructure& s,
                                           const std::string& point) {
  if (!g.find_point(point)) throw error("unknown point: " + point);
  return s.stalk(point).stabilizer_group();
}

inline FiniteAbelianGroup edge_stabilizer(const MarkedDualGraph& g, const GltStructure& s,
                                          const std::string& edge) {
  if (!g.find_edge(edge)) throw error("unknown edge: " + edge);
  const Int& d = s.index_of(edge);
  if (d == 1) return FiniteAbelianGroup::trivial();
  return FiniteAbelianGroup({d});
}

// Which components the prestable map collapses to a point.
struct MapDecoration {
  std::set<std::string> contracted;
  bool is_contracted(const std::string& v) const { return contracted.count(v) > 0; }
};

struct StabilityReport {
  bool stable = true;
  std::vector<std::string> violators;
};

// Weighted stability: a contracted genus-0 component violates when its node
// branch count plus its marking weight is at most 2 (eq. of Hassett-type
// numerics; loops contribute two branches).
inline StabilityReport is_stable(const MarkedDualGraph& g, const MapDecoration& d) {
  if (!g.weights) throw error("stability needs weights");
  StabilityReport r;
  for (const auto& v : g.vertices) {
    if (!d.is_contracted(v.id)) continue;
    if (v.genus > 0) continue;
    Rat total(g.valence(v.id));
    for (const auto& p : g.points)
      if (p.vertex == v.id) total += g.point_weight(p);
    if (total <= 2) {
      r.stable = false;
      r.violators.push_back(v.id);
    }
  }
  return r;
}

struct GraphIso {
  std::map<std::string, std::string> vertex_map;
  std::map<std::string, std::string> edge_map;
  std::map<std::string, std::string> point_map;
};

namespace detail {

inline bool extend_iso(const MarkedDualGraph& a, const MarkedDualGraph& b,
                       const GltStructure* ga, const GltStructure* gb,
                       std::vector<std::size_t>& assign, std::size_t k,
                       GraphIso& out) {
  const std::size_t n = a.vertices.size();
  if (k == n) {
    // vertex bijection fixed; match edges and points
    std::map<std::string, std::string> vmap;
    for (std::size_t i = 0; i < n; ++i) vmap[a.vertices[i].id] = b.vertices[assign[i]].id;
    std::vector<bool> used(b.edges.size(), false);
    std::map<std::string, std::string> emap;
    for (const auto& ea : a.edges) {
      bool matched = false;
      for (std::size_t j = 0; j < b.edges.size() && !matched; ++j) {
        if (used[j]) continue;
        const auto& eb = b.edges[j];
        const bool fwd = vmap[ea.ends[0]] == eb.ends[0] && vmap[ea.ends[1]] == eb.ends[1];
        const bool rev = vmap[ea.ends[0]] == eb.ends[1] && vmap[ea.ends[1]] == eb.ends[0];
        if (!fwd && !rev) continue;
        if (ga && gb && ga->index_of(ea.id) != gb->index_of(eb.id)) continue;
        used[j] = true;
        emap[ea.id] = eb.id;
        matched = true;
      }
      if (!matched) return false;
    }
    std::map<std::string, std::string> pmap;
    for (const auto& pa : a.points) {
      const MarkedPoint* pb = nullptr;
      for (const auto& q : b.points)
        if (q.markings == pa.markings) pb = &q;
      if (!pb) return false;
      if (vmap[pa.vertex] != pb->vertex) return false;
      if (ga && gb && !(ga->stalk(pa.id) == gb->stalk(pb->id))) return false;
      pmap[pa.id] = pb->id;
    }
    out.vertex_map = std::move(vmap);
    out.edge_map = std::move(emap);
    out.point_map = std::move(pmap);
    return true;
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (std::find(assign.begin(), assign.begin() + static_cast<std::ptrdiff_t>(k), j) !=
        assign.begin() + static_cast<std::ptrdiff_t>(k))
      continue;
    if (a.vertices[k].genus != b.vertices[j].genus) continue;
    if (a.valence(a.vertices[k].id) != b.valence(b.vertices[j].id)) continue;
    assign[k] = j;
    if (extend_iso(a, b, ga, gb, assign, k + 1, out)) return true;
  }
  return false;
}

}  // namespace detail

// Label-preserving isomorphism: marking indices are significant, so points
// must match by marking set; genus, adjacency, node indices and stalks must
// agree under the induced identification.  Brute force, desk scale.
inline std::optional<GraphIso> is_isomorphic(const MarkedDualGraph& a,
                                             const MarkedDualGraph& b,
                                             const GltStructure* ga = nullptr,
                                             const GltStructure* gb = nullptr) {
  if (a.vertices.size() != b.vertices.size() || a.edges.size() != b.edges.size() ||
      a.points.size() != b.points.size() || a.n_markings != b.n_markings)
    return std::nullopt;
  if (a.weights.has_value() != b.weights.has_value()) return std::nullopt;
  if (a.weights && *a.weights != *b.weights) return std::nullopt;
  if (a.vertices.size() > 12) throw error("isomorphism search limited to 12 vertices");
  std::vector<std::size_t> assign(a.vertices.size(), 0);
  GraphIso iso;
  if (detail::extend_iso(a, b, ga, gb, assign, 0, iso)) return iso;
  return std::nullopt;
}

// Chart presentation data at a special point: at a marked point the monoid
// N^I together with its character group; at a node the index d with the
// balanced weights (1, d-1).
struct LocalChart {
  std::string kind;  // "point" | "node"
  std::string id;
  std::vector<unsigned> markings;                 // point charts
  std::vector<RatVec> monoid_generators;          // point charts
  std::vector<Int> character_group;               // point charts
  Int node_index = 0;                             // node charts
};

inline LocalChart local_chart(const MarkedDualGraph& g, const GltStructure& s,
                              const std::string& id) {
  if (const auto* p = g.find_point(id)) {
    LocalChart c;
    c.kind = "point";
    c.id = id;
    c.markings = p->markings;
    const auto& stalk = s.stalk(id);
    c.monoid_generators = stalk.group().group_generators();
    c.character_group = stalk.stabilizer_group().invariant_factors();
    return c;
  }
  if (g.find_edge(id)) {
    LocalChart c;
    c.kind = "node";
    c.id = id;
    c.node_index = s.index_of(id);
    return c;
  }
  throw error("unknown point or edge: " + id);
}

}  // namespace glt
