#pragma once

// Medial graph MG of a triangulated disk (one vertex per edge of G), its
// triangulation TMG, and the boundary closure used by the pattern-side theory.
//
// Faces of MG are the triangles of tangency points (one per face of G) and one
// cyclic polygon per interior vertex of G; each polygon is fan-triangulated from
// its lowest-index medial vertex. On top of that, the complex is closed along
// the boundary: every boundary vertex of G of degree >= 3 contributes one more
// cyclic polygon (the chain of tangency points around its circle), triangulated
// the same way. Quadratic differentials of general type live on the interior
// edges of the closed complex; cross ratios, flips and the surface theory use
// the real part only.

#include <algorithm>
#include <map>
#include <vector>

#include "cpmin/mesh.hpp"

namespace cpmin {

enum class MedialEdgeKind {
  Triangle,         // edge of a tangency triangle, also polygon rim: the MG edges
  Diagonal,         // added by triangulating an interior-vertex polygon
  ClosureRim,       // rim edge of a closure polygon absent from MG
  ClosureDiagonal,  // added by triangulating a closure polygon
};

struct MedialEdge {
  int a = 0, b = 0;          // medial vertex ids, a < b
  MedialEdgeKind kind = MedialEdgeKind::Triangle;
  int face_count = 0;        // over the closed complex
  int real_face_count = 0;   // over F(TMG)
  int q_position = -1;       // index into q_edges, -1 if not interior in the closed complex
};

struct MedialComplex {
  TriangulatedDisk disk;

  // medial vertex = G edge id; interior iff the G edge is interior
  std::vector<char> mv_interior;

  // all triangles of the closed complex, counterclockwise.
  // [0, n_gfaces)           images of F(G) under the injection
  // [n_gfaces, n_real)      fan triangles of interior-vertex polygons
  // [n_real, faces.size())  fan triangles of closure polygons
  std::vector<std::array<int, 3>> faces;
  int n_gfaces = 0;
  int n_real = 0;

  std::vector<MedialEdge> tmg_edges;      // all edges of the closed complex, sorted
  std::vector<int> q_edges;               // edge positions interior in the closed complex
  std::vector<int> real_interior_edges;   // edge positions with two real faces

  // per-polygon triangle lists (face indices), for flips
  std::map<int, std::vector<int>> polygon_faces;          // interior G vertex -> faces
  std::map<int, std::vector<int>> closure_polygon_faces;  // boundary G vertex -> faces

  int medial_vertex_count() const { return disk.edge_count(); }
  int medial_vertex_of_G_edge(int u, int v) const { return disk.edge_index(u, v); }
  int tmg_face_of_G_face(int f) const { return f; }

  int edge_position(int a, int b) const {
    auto it = edge_pos_.find(ordered_key(std::min(a, b), std::max(a, b)));
    require(it != edge_pos_.end(), ErrorCode::NotADisk, "no such medial edge");
    return it->second;
  }
  bool has_tmg_left(int a, int b) const { return left_.count(ordered_key(a, b)) != 0; }
  int tmg_left_face(int a, int b) const {
    auto it = left_.find(ordered_key(a, b));
    require(it != left_.end(), ErrorCode::NotADisk, "no medial face on that side");
    return it->second;
  }
  int tmg_face_third(int f, int a, int b) const {
    for (int x : faces[f])
      if (x != a && x != b) return x;
    fail(ErrorCode::NotADisk, "medial face does not contain the edge");
  }
  bool face_is_real(int f) const { return f < n_real; }

  // Hash of the triangulation choices (diagonals of all polygons, closure
  // included), embedded in serialized general-type differentials.
  std::uint64_t fingerprint() const {
    std::vector<std::pair<int, int>> diag;
    for (const auto& e : tmg_edges)
      if (e.kind == MedialEdgeKind::Diagonal || e.kind == MedialEdgeKind::ClosureDiagonal)
        diag.push_back({e.a, e.b});
    std::sort(diag.begin(), diag.end());
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (auto& [a, b] : diag) {
      h = fnv1a(&a, sizeof a, h);
      h = fnv1a(&b, sizeof b, h);
    }
    return h;
  }

  std::unordered_map<std::int64_t, int> edge_pos_;
  std::unordered_map<std::int64_t, int> left_;      // oriented medial edge -> face
  std::map<int, std::vector<int>> polygon_rims_;    // interior G vertex -> medial rim, ccw
  std::map<int, std::vector<int>> closure_rims_;    // boundary G vertex -> medial rim, ccw
};

namespace detail {

inline std::vector<std::array<int, 3>> fan_triangulate(const std::vector<int>& poly) {
  int r = static_cast<int>(std::min_element(poly.begin(), poly.end()) - poly.begin());
  std::vector<int> p(poly.begin() + r, poly.end());
  p.insert(p.end(), poly.begin(), poly.begin() + r);
  std::vector<std::array<int, 3>> out;
  for (int i = 1; i + 1 < static_cast<int>(p.size()); ++i)
    out.push_back({p[0], p[i], p[i + 1]});
  return out;
}

inline void rebuild_tables(MedialComplex& M) {
  M.tmg_edges.clear();
  M.q_edges.clear();
  M.real_interior_edges.clear();
  M.edge_pos_.clear();
  M.left_.clear();

  // MG edges: triangle edges of G-face images plus polygon rims (identical sets
  // on the real part); classify by provenance.
  std::map<std::pair<int, int>, MedialEdge> em;
  auto touch = [&](int a, int b, int fi) {
    auto key = std::make_pair(std::min(a, b), std::max(a, b));
    auto& e = em[key];
    e.a = key.first;
    e.b = key.second;
    e.face_count++;
    if (fi < M.n_real) e.real_face_count++;
  };
  for (int fi = 0; fi < static_cast<int>(M.faces.size()); ++fi) {
    const auto& t = M.faces[fi];
    for (int k = 0; k < 3; ++k) {
      int a = t[k], b = t[(k + 1) % 3];
      require(!M.left_.count(ordered_key(a, b)), ErrorCode::OrientationConflict,
              "medial faces disagree on orientation");
      M.left_[ordered_key(a, b)] = fi;
      touch(a, b, fi);
    }
  }
  // kinds: edges of a G-face image are Triangle edges (= MG); everything else
  // came from some polygon triangulation.
  std::map<std::pair<int, int>, MedialEdgeKind> kind;
  for (int fi = 0; fi < M.n_gfaces; ++fi) {
    const auto& t = M.faces[fi];
    for (int k = 0; k < 3; ++k) {
      int a = t[k], b = t[(k + 1) % 3];
      kind[{std::min(a, b), std::max(a, b)}] = MedialEdgeKind::Triangle;
    }
  }
  auto mark_polygon_edges = [&](const std::vector<int>& poly, bool closure) {
    int n = static_cast<int>(poly.size());
    for (int i = 0; i < n; ++i) {
      int a = poly[i], b = poly[(i + 1) % n];
      auto key = std::make_pair(std::min(a, b), std::max(a, b));
      if (!kind.count(key))
        kind[key] = closure ? MedialEdgeKind::ClosureRim : MedialEdgeKind::Triangle;
    }
  };
  for (const auto& [u, poly] : M.polygon_rims_) mark_polygon_edges(poly, false);
  for (const auto& [u, poly] : M.closure_rims_) mark_polygon_edges(poly, true);
  for (auto& [key, e] : em) {
    auto it = kind.find(key);
    if (it != kind.end()) {
      e.kind = it->second;
    } else {
      // not an MG edge and not a rim: a diagonal; closure iff only closure faces use it
      bool real = e.real_face_count > 0;
      e.kind = real ? MedialEdgeKind::Diagonal : MedialEdgeKind::ClosureDiagonal;
    }
  }
  for (auto& [key, e] : em) {
    int pos = static_cast<int>(M.tmg_edges.size());
    M.edge_pos_[ordered_key(e.a, e.b)] = pos;
    if (e.face_count == 2) {
      e.q_position = static_cast<int>(M.q_edges.size());
      M.q_edges.push_back(pos);
    }
    if (e.real_face_count == 2) M.real_interior_edges.push_back(pos);
    M.tmg_edges.push_back(e);
  }
}

}  // namespace detail

// The tie-break rule for fan roots; the canonical triangulation uses the
// lowest-index medial vertex of each polygon.
enum class FanRoot { LowestIndex };

inline MedialComplex medial_complex(const TriangulatedDisk& G,
                                    FanRoot root = FanRoot::LowestIndex) {
  (void)root;
  MedialComplex M;
  M.disk = G;
  M.mv_interior.assign(G.edge_count(), 0);
  for (int e = 0; e < G.edge_count(); ++e) M.mv_interior[e] = !G.edge_is_boundary[e];

  auto mid = [&](int a, int b) { return G.edge_index(a, b); };
  for (const auto& f : G.faces)
    M.faces.push_back({mid(f[0], f[1]), mid(f[1], f[2]), mid(f[2], f[0])});
  M.n_gfaces = static_cast<int>(M.faces.size());

  for (int u : G.interior_vertices) {
    std::vector<int> poly;
    for (int w : G.vertex_neighbors[u]) poly.push_back(mid(u, w));
    M.polygon_rims_[u] = poly;
    for (const auto& t : detail::fan_triangulate(poly)) {
      M.polygon_faces[u].push_back(static_cast<int>(M.faces.size()));
      M.faces.push_back(t);
    }
  }
  M.n_real = static_cast<int>(M.faces.size());

  for (int u = 0; u < G.vertex_count; ++u) {
    if (!G.vertex_is_boundary[u] || G.vertex_neighbors[u].size() < 3) continue;
    std::vector<int> poly;
    for (int w : G.vertex_neighbors[u]) poly.push_back(mid(u, w));
    M.closure_rims_[u] = poly;
    for (const auto& t : detail::fan_triangulate(poly)) {
      M.closure_polygon_faces[u].push_back(static_cast<int>(M.faces.size()));
      M.faces.push_back(t);
    }
  }
  detail::rebuild_tables(M);
  return M;
}

// Replaces the diagonal {a,b} of an interior-vertex polygon by the opposite
// diagonal of the quad formed by its two incident fan triangles. MG unchanged.
inline MedialComplex flip_diagonal(const MedialComplex& M0, int a, int b) {
  MedialComplex M = M0;
  int pos;
  try {
    pos = M.edge_position(a, b);
  } catch (const Error&) {
    fail(ErrorCode::NotADiagonal, "no such medial edge");
  }
  require(M.tmg_edges[pos].kind == MedialEdgeKind::Diagonal, ErrorCode::NotADiagonal,
          "edge is not a diagonal of the medial triangulation");
  int f1 = M.tmg_left_face(std::min(a, b), std::max(a, b));
  int f2 = M.tmg_left_face(std::max(a, b), std::min(a, b));
  int lo = std::min(a, b), hi = std::max(a, b);
  int c = M.tmg_face_third(f1, lo, hi);  // f1 traverses lo->hi, c on its left
  int d = M.tmg_face_third(f2, lo, hi);
  // quad lo, d, hi, c (ccw); new ccw triangles (lo, d, c) and (d, hi, c)
  M.faces[f1] = {lo, d, c};
  M.faces[f2] = {d, hi, c};
  detail::rebuild_tables(M);
  return M;
}

}  // namespace cpmin
