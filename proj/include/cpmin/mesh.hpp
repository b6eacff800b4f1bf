#pragma once

// Combinatorics of oriented triangulated disks: edge tables, interior/boundary
// classification, rotational vertex orders, dual-graph integration of closed
// 1-forms over a breadth-first spanning tree.

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <functional>
#include <map>
#include <unordered_map>
#include <vector>

#include "cpmin/base.hpp"

namespace cpmin {

inline std::int64_t ordered_key(int a, int b) {
  return (static_cast<std::int64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

struct TriangulatedDisk {
  int vertex_count = 0;
  std::vector<std::array<int, 3>> faces;                 // counterclockwise
  std::vector<std::pair<int, int>> edges;                // canonical (u<v), lexicographic
  std::vector<char> edge_is_boundary;
  std::vector<char> vertex_is_boundary;
  std::vector<int> interior_edges;                       // edge ids
  std::vector<int> interior_vertices;
  std::vector<int> interior_edge_position;               // edge id -> index in interior_edges, -1 else
  std::vector<std::vector<int>> vertex_neighbors;        // ccw rotational order; open chain at boundary
  std::vector<int> boundary_cycle;                       // ccw (disk on the left)

  int edge_index(int u, int v) const {
    auto it = edge_index_.find(ordered_key(std::min(u, v), std::max(u, v)));
    require(it != edge_index_.end(), ErrorCode::NotADisk, "no such edge");
    return it->second;
  }
  bool has_edge(int u, int v) const {
    return edge_index_.count(ordered_key(std::min(u, v), std::max(u, v))) != 0;
  }
  bool has_left(int u, int v) const { return left_.count(ordered_key(u, v)) != 0; }
  // Face traversing the directed edge u->v.
  int left_face(int u, int v) const {
    auto it = left_.find(ordered_key(u, v));
    require(it != left_.end(), ErrorCode::NotADisk, "no face on that side");
    return it->second;
  }
  int right_face(int u, int v) const { return left_face(v, u); }
  // Third vertex of the given face.
  int face_third(int f, int u, int v) const {
    for (int x : faces[f])
      if (x != u && x != v) return x;
    fail(ErrorCode::NotADisk, "face does not contain the edge");
  }
  int edge_count() const { return static_cast<int>(edges.size()); }
  int face_count() const { return static_cast<int>(faces.size()); }

  std::unordered_map<std::int64_t, int> edge_index_;
  std::unordered_map<std::int64_t, int> left_;
};

inline TriangulatedDisk build_disk(const std::vector<std::array<int, 3>>& faces) {
  require(!faces.empty(), ErrorCode::NotADisk, "empty face list");
  TriangulatedDisk G;
  G.faces = faces;
  int vmax = -1;
  for (const auto& f : faces) {
    require(f[0] != f[1] && f[1] != f[2] && f[0] != f[2], ErrorCode::NotADisk,
            "degenerate face");
    for (int v : f) {
      require(v >= 0, ErrorCode::NotADisk, "negative vertex index");
      vmax = std::max(vmax, v);
    }
  }
  G.vertex_count = vmax + 1;

  // oriented edge -> face; each direction at most once
  std::map<std::pair<int, int>, int> usage;
  for (int fi = 0; fi < G.face_count(); ++fi) {
    const auto& f = faces[fi];
    for (int k = 0; k < 3; ++k) {
      int a = f[k], b = f[(k + 1) % 3];
      auto key = ordered_key(a, b);
      if (G.left_.count(key)) {
        // same direction twice: either non-manifold or inconsistent orientation
        int n = static_cast<int>(usage.count({std::min(a, b), std::max(a, b)}));
        (void)n;
        if (G.left_.count(ordered_key(b, a)))
          fail(ErrorCode::NonManifoldEdge, "edge in more than two faces");
        fail(ErrorCode::OrientationConflict, "edge traversed twice in the same direction");
      }
      G.left_[key] = fi;
      usage[{std::min(a, b), std::max(a, b)}]++;
    }
  }
  for (const auto& [e, n] : usage) {
    if (n > 2) fail(ErrorCode::NonManifoldEdge, "edge in more than two faces");
    G.edges.push_back(e);
  }
  std::sort(G.edges.begin(), G.edges.end());
  for (int i = 0; i < G.edge_count(); ++i)
    G.edge_index_[ordered_key(G.edges[i].first, G.edges[i].second)] = i;

  G.edge_is_boundary.assign(G.edge_count(), 0);
  G.vertex_is_boundary.assign(G.vertex_count, 0);
  G.interior_edge_position.assign(G.edge_count(), -1);
  for (int i = 0; i < G.edge_count(); ++i) {
    auto [u, v] = G.edges[i];
    int n = (G.has_left(u, v) ? 1 : 0) + (G.has_left(v, u) ? 1 : 0);
    G.edge_is_boundary[i] = (n == 1);
    if (n == 1) G.vertex_is_boundary[u] = G.vertex_is_boundary[v] = 1;
  }
  for (int i = 0; i < G.edge_count(); ++i)
    if (!G.edge_is_boundary[i]) {
      G.interior_edge_position[i] = static_cast<int>(G.interior_edges.size());
      G.interior_edges.push_back(i);
    }
  for (int v = 0; v < G.vertex_count; ++v)
    if (!G.vertex_is_boundary[v]) G.interior_vertices.push_back(v);

  // rotational order around each vertex: successor map a->b from faces (u,a,b)
  G.vertex_neighbors.assign(G.vertex_count, {});
  std::vector<std::map<int, int>> succ(G.vertex_count);
  std::vector<int> degree(G.vertex_count, 0);
  for (const auto& f : faces)
    for (int k = 0; k < 3; ++k) succ[f[k]][f[(k + 1) % 3]] = f[(k + 2) % 3];
  for (const auto& [e, n] : usage) {
    degree[e.first]++;
    degree[e.second]++;
  }
  for (int u = 0; u < G.vertex_count; ++u) {
    auto& m = succ[u];
    if (m.empty()) fail(ErrorCode::NotADisk, "isolated vertex index");
    std::map<int, int> indeg;
    for (auto& [a, b] : m) indeg[b]++;
    int start = -1;
    if (G.vertex_is_boundary[u]) {
      for (auto& [a, b] : m)
        if (!indeg.count(a)) {
          require(start == -1, ErrorCode::NotADisk, "vertex star is not a single fan");
          start = a;
        }
      require(start != -1, ErrorCode::NotADisk, "boundary vertex star has no start");
    } else {
      start = m.begin()->first;
    }
    std::vector<int> order{start};
    while (true) {
      auto it = m.find(order.back());
      if (it == m.end()) break;
      if (it->second == start) break;
      order.push_back(it->second);
      require(static_cast<int>(order.size()) <= degree[u], ErrorCode::NotADisk,
              "vertex star does not close");
    }
    require(static_cast<int>(order.size()) == degree[u], ErrorCode::NotADisk,
            "vertex star is not a single fan");
    G.vertex_neighbors[u] = std::move(order);
  }

  // boundary must be one simple cycle, traversed with the disk on the left
  std::map<int, int> bnext;
  int nboundary = 0;
  for (int i = 0; i < G.edge_count(); ++i) {
    if (!G.edge_is_boundary[i]) continue;
    ++nboundary;
    auto [u, v] = G.edges[i];
    // boundary direction: the one with no face on its left is traversed v->u of
    // the interior direction; disk on the left means we follow the direction
    // that has a face on the left? No: for the cycle we walk directions with the
    // face on the LEFT missing reversed; use direction (a,b) with left face absent,
    // then the disk lies to the right of (a,b); the ccw boundary is (b,a).
    int a = G.has_left(u, v) ? v : u;  // (a,b) has no left face
    int b = (a == u) ? v : u;
    require(!bnext.count(b), ErrorCode::NotADisk, "boundary is not a simple cycle");
    bnext[b] = a;  // ccw direction (disk on the left): b -> a
  }
  require(!bnext.empty(), ErrorCode::NotADisk, "no boundary edge");
  int b0 = bnext.begin()->first;
  std::vector<int> cyc{b0};
  while (true) {
    int nx = bnext.at(cyc.back());
    if (nx == b0) break;
    cyc.push_back(nx);
    require(static_cast<int>(cyc.size()) <= nboundary, ErrorCode::NotADisk,
            "boundary does not close");
  }
  require(static_cast<int>(cyc.size()) == nboundary, ErrorCode::NotADisk,
          "boundary is not a single cycle");
  // rotate so the cycle starts at its smallest vertex
  auto mn = std::min_element(cyc.begin(), cyc.end());
  std::rotate(cyc.begin(), mn, cyc.end());
  G.boundary_cycle = std::move(cyc);

  require(G.vertex_count - G.edge_count() + G.face_count() == 1, ErrorCode::NotADisk,
          "Euler characteristic is not 1");

  // connectivity of the vertex graph
  {
    std::vector<char> seen(G.vertex_count, 0);
    std::deque<int> dq{0};
    seen[0] = 1;
    int cnt = 1;
    while (!dq.empty()) {
      int u = dq.front();
      dq.pop_front();
      for (int w : G.vertex_neighbors[u])
        if (!seen[w]) {
          seen[w] = 1;
          ++cnt;
          dq.push_back(w);
        }
    }
    require(cnt == G.vertex_count, ErrorCode::NotADisk, "graph not connected");
  }
  return G;
}

// Triangular-lattice disk with `generations` rings around a center vertex.
// Vertices are numbered center first, then ring by ring counterclockwise
// starting at the positive x-axis.
inline TriangulatedDisk hex_disk(int generations) {
  require(generations >= 1, ErrorCode::InvalidBoundaryData, "generations must be >= 1");
  struct Ax {
    int q, r;
    bool operator<(const Ax& o) const { return std::pair(q, r) < std::pair(o.q, o.r); }
  };
  auto ring = [](const Ax& a) { return std::max({std::abs(a.q), std::abs(a.r), std::abs(a.q + a.r)}); };
  auto pos = [](const Ax& a) {
    return std::pair<double, double>(a.q + 0.5 * a.r, std::sqrt(3.0) / 2.0 * a.r);
  };
  std::vector<Ax> pts;
  for (int q = -generations; q <= generations; ++q)
    for (int r = -generations; r <= generations; ++r)
      if (std::abs(q + r) <= generations) pts.push_back({q, r});
  std::sort(pts.begin(), pts.end(), [&](const Ax& a, const Ax& b) {
    int ra = ring(a), rb = ring(b);
    if (ra != rb) return ra < rb;
    auto [ax, ay] = pos(a);
    auto [bx, by] = pos(b);
    double ta = std::fmod(std::atan2(ay, ax) + 2 * M_PI, 2 * M_PI);
    double tb = std::fmod(std::atan2(by, bx) + 2 * M_PI, 2 * M_PI);
    if (ta != tb) return ta < tb;
    return a < b;
  });
  std::map<Ax, int> id;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) id[pts[i]] = i;
  std::vector<std::array<int, 3>> faces;
  for (const auto& p : pts) {
    Ax e{p.q + 1, p.r}, ne{p.q, p.r + 1}, se{p.q + 1, p.r - 1};
    if (id.count(e) && id.count(ne)) faces.push_back({id.at(p), id.at(e), id.at(ne)});
    if (id.count(e) && id.count(se)) faces.push_back({id.at(p), id.at(se), id.at(e)});
  }
  return build_disk(faces);
}

// One dual-graph edge of a disk-like complex: value_left - value_right = jump.
struct DualJump {
  int left = -1;
  int right = -1;
};

// Integrates an interior-edge-indexed 1-form over the dual graph, breadth-first
// from face 0, base value zero. `jumps[k]` pairs with `values[k]` and means
// value_left - value_right = values[k]. The result is independent of the tree
// up to the reported residual: `max_cycle_residual` is the worst defect of the
// integrated values against the form over all dual edges (0 for a closed form).
template <typename Value, typename Norm>
std::vector<Value> integrate_dual_one_form(int face_count, const std::vector<DualJump>& jumps,
                                           const std::vector<Value>& values, const Value& zero,
                                           Norm norm, double* max_cycle_residual = nullptr) {
  require(jumps.size() == values.size(), ErrorCode::DisconnectedDual, "jump/value size mismatch");
  std::vector<std::vector<int>> at(face_count);
  for (int k = 0; k < static_cast<int>(jumps.size()); ++k) {
    at[jumps[k].left].push_back(k);
    at[jumps[k].right].push_back(k);
  }
  std::vector<Value> val(face_count, zero);
  std::vector<char> seen(face_count, 0);
  std::deque<int> dq{0};
  seen[0] = 1;
  int visited = 1;
  while (!dq.empty()) {
    int f = dq.front();
    dq.pop_front();
    for (int k : at[f]) {
      int nb = (jumps[k].left == f) ? jumps[k].right : jumps[k].left;
      if (seen[nb]) continue;
      seen[nb] = 1;
      ++visited;
      val[nb] = (nb == jumps[k].left) ? Value(val[f] + values[k]) : Value(val[f] - values[k]);
      dq.push_back(nb);
    }
  }
  require(visited == face_count, ErrorCode::DisconnectedDual, "dual graph not connected");
  if (max_cycle_residual) {
    double worst = 0;
    for (int k = 0; k < static_cast<int>(jumps.size()); ++k)
      worst = std::max(worst, norm(Value(val[jumps[k].left] - val[jumps[k].right] - values[k])));
    *max_cycle_residual = worst;
  }
  return val;
}

}  // namespace cpmin
