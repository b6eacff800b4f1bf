#pragma once

// Moebius invariants of a packing: the packing cross ratio per interior edge of
// G, the pattern cross ratio per interior edge of TMG, the tangent 1-form, and
// vertex-rotation extraction between two realizations of the medial graph.

#include <cmath>
#include <vector>

#include "cpmin/medial.hpp"
#include "cpmin/packing.hpp"

namespace cpmin {

// cr(a,b,c,d) = (a-b)(c-d) / ((b-c)(d-a))
inline cplx cross_ratio(cplx a, cplx b, cplx c, cplx d) {
  cplx den = (b - c) * (d - a);
  require(std::abs(den) > 0, ErrorCode::DegenerateQuadruple, "coincident points in cross ratio");
  return (a - b) * (c - d) / den;
}

// The five tangency points around an oriented interior edge u->v:
// z_i on the edge, z_j/z_k via the left face (u,v,s), z_m/z_n via the right
// face (v,u,t).
struct EdgeStar {
  int s = -1, t = -1;           // opposite vertices
  int mi = -1, mj = -1, mk = -1, mm = -1, mn = -1;  // medial vertex ids
  cplx zi, zj, zk, zm, zn;
};

inline EdgeStar edge_star(const TriangulatedDisk& G, const std::vector<cplx>& z, int u, int v) {
  EdgeStar E;
  int fL = G.left_face(u, v), fR = G.left_face(v, u);
  E.s = G.face_third(fL, u, v);
  E.t = G.face_third(fR, u, v);
  E.mi = G.edge_index(u, v);
  E.mj = G.edge_index(v, E.s);
  E.mk = G.edge_index(E.s, u);
  E.mm = G.edge_index(u, E.t);
  E.mn = G.edge_index(E.t, v);
  E.zi = z[E.mi];
  E.zj = z[E.mj];
  E.zk = z[E.mk];
  E.zm = z[E.mm];
  E.zn = z[E.mn];
  return E;
}

struct OmegaForm {
  std::vector<cplx> value;  // per interior edge, for the orientation u<v
  double agreement = 0;     // worst relative gap between the two defining quotients

  cplx at(const TriangulatedDisk& G, int u, int v) const {
    int e = G.edge_index(u, v);
    int p = G.interior_edge_position[e];
    require(p >= 0, ErrorCode::NotADisk, "omega is defined on interior edges only");
    return (u < v) ? value[p] : -value[p];
  }
};

inline OmegaForm omega_form(const TriangulatedDisk& G, const std::vector<cplx>& z) {
  OmegaForm W;
  W.value.resize(G.interior_edges.size());
  for (size_t p = 0; p < G.interior_edges.size(); ++p) {
    auto [u, v] = G.edges[G.interior_edges[p]];
    EdgeStar E = edge_star(G, z, u, v);
    cplx w1 = (E.zk - E.zi) * (E.zm - E.zi) / (E.zm - E.zk);
    cplx w2 = (E.zj - E.zi) * (E.zn - E.zi) / (E.zn - E.zj);
    W.agreement = std::max(W.agreement, std::abs(w1 - w2) / std::max(std::abs(w1), 1e-300));
    W.value[p] = w1;
  }
  return W;
}

inline OmegaForm omega_form(const CirclePacking& P) { return omega_form(P.mesh, tangency_points(P)); }

struct PackingCrossRatios {
  std::vector<cplx> value;     // per interior edge of G (interior-edge order)
  double agreement = 0;        // gap between the two defining quadruples
  double max_real_part = 0;    // |Re| / |value|, should vanish for a packing

  cplx at(const TriangulatedDisk& G, int u, int v) const {
    int p = G.interior_edge_position[G.edge_index(u, v)];
    require(p >= 0, ErrorCode::NotADisk, "cross ratio lives on interior edges");
    return value[p];
  }
};

// cr(z_i, z_j, z_k, z_m), checked against cr(z_i, z_m, z_n, z_j); purely
// imaginary on circle packings.
inline PackingCrossRatios packing_cross_ratios(const TriangulatedDisk& G,
                                               const std::vector<cplx>& z) {
  PackingCrossRatios C;
  C.value.resize(G.interior_edges.size());
  for (size_t p = 0; p < G.interior_edges.size(); ++p) {
    auto [u, v] = G.edges[G.interior_edges[p]];
    EdgeStar E = edge_star(G, z, u, v);
    cplx c1 = cross_ratio(E.zi, E.zj, E.zk, E.zm);
    cplx c2 = cross_ratio(E.zi, E.zm, E.zn, E.zj);
    C.agreement = std::max(C.agreement, std::abs(c1 - c2) / std::max(std::abs(c1), 1e-300));
    C.max_real_part = std::max(C.max_real_part, std::abs(c1.real()) / std::max(std::abs(c1), 1e-300));
    C.value[p] = c1;
  }
  return C;
}

inline PackingCrossRatios packing_cross_ratios(const CirclePacking& P) {
  return packing_cross_ratios(P.mesh, tangency_points(P));
}

struct PatternCrossRatios {
  std::vector<cplx> value;          // aligned with M.real_interior_edges
  std::vector<int> edge_position;   // the M.tmg_edges position of each entry
};

// cr per interior TMG edge from its two incident real faces; arguments lie in
// {pi/2, pi} when z comes from a circle packing.
inline PatternCrossRatios pattern_cross_ratios(const std::vector<cplx>& z, const MedialComplex& M) {
  PatternCrossRatios C;
  C.edge_position = M.real_interior_edges;
  C.value.reserve(M.real_interior_edges.size());
  for (int pos : M.real_interior_edges) {
    const auto& e = M.tmg_edges[pos];
    int i = e.a, j = e.b;
    int fL = M.tmg_left_face(i, j), fR = M.tmg_left_face(j, i);
    int k = M.tmg_face_third(fL, i, j);
    int l = M.tmg_face_third(fR, i, j);
    C.value.push_back(cross_ratio(z[j], z[k], z[i], z[l]));
  }
  return C;
}

struct VertexRotation {
  std::vector<double> alpha;  // per medial vertex, representative in (-pi, pi]
  double residual = 0;        // max deviation of alpha_i + alpha_j from the edge data
};

namespace detail {
inline double wrap_angle(double t) {
  t = std::remainder(t, 2 * M_PI);
  return (t <= -M_PI) ? t + 2 * M_PI : t;
}
}  // namespace detail

// Solves alpha_i + alpha_j = Arg((zt_j - zt_i)/(z_j - z_i)) mod 2pi over the
// real TMG edges. Triangles pin the propagation constant up to a simultaneous
// pi-shift on bipartite classes; the shift is fixed by alpha >= 0 at the lowest
// medial vertex. Throws only if `tol` is given and the residual exceeds it.
inline VertexRotation extract_vertex_rotation(const std::vector<cplx>& z,
                                              const std::vector<cplx>& zt, const MedialComplex& M,
                                              double tol = -1) {
  int n = M.medial_vertex_count();
  require(static_cast<int>(z.size()) == n && static_cast<int>(zt.size()) == n,
          ErrorCode::InconsistentRotation, "realizations must cover V(MG)");
  // edges of the real complex (rims + diagonals), as vertex adjacency
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  std::vector<std::tuple<int, int, double>> relations;
  for (const auto& e : M.tmg_edges) {
    if (e.real_face_count == 0) continue;
    cplx d0 = z[e.b] - z[e.a], d1 = zt[e.b] - zt[e.a];
    require(std::abs(d0) > 0 && std::abs(d1) > 0, ErrorCode::DegenerateQuadruple,
            "degenerate medial edge");
    double theta = std::arg(d1 / d0);
    adj[e.a].push_back({e.b, theta});
    adj[e.b].push_back({e.a, theta});
    relations.push_back({e.a, e.b, theta});
  }
  // propagate alpha_j = theta - alpha_i from vertex 0 with tentative alpha_0 = 0
  std::vector<double> alpha(n, 0);
  std::vector<char> seen(n, 0), parity(n, 0);
  std::deque<int> dq{0};
  seen[0] = 1;
  double shift2 = 0;  // accumulates 2*t from the first odd-cycle closure
  bool have_shift = false;
  while (!dq.empty()) {
    int i = dq.front();
    dq.pop_front();
    for (auto [j, theta] : adj[i]) {
      if (!seen[j]) {
        alpha[j] = theta - alpha[i];
        parity[j] = !parity[i];
        seen[j] = 1;
        dq.push_back(j);
      } else if (!have_shift && parity[i] == parity[j]) {
        // odd cycle: (alpha_i + t*) + (alpha_j + t*) = theta with t* the shared
        // tentative offset sign; solves 2 t* = theta - alpha_i - alpha_j
        double sgn = parity[i] ? -1.0 : 1.0;
        shift2 = detail::wrap_angle(theta - alpha[i] - alpha[j]);
        shift2 *= sgn;  // stored as offset of even-parity vertices
        have_shift = true;
      }
    }
  }
  for (int i = 0; i < n; ++i) require(seen[i], ErrorCode::InconsistentRotation, "medial graph not connected");
  require(have_shift, ErrorCode::BipartiteAmbiguity, "no triangle fixed the propagation constant");
  double t0 = shift2 / 2;
  for (int i = 0; i < n; ++i)
    alpha[i] = detail::wrap_angle(parity[i] ? alpha[i] - t0 : alpha[i] + t0);
  // global pi-shift: fix alpha at the lowest vertex into [0, pi)
  if (alpha[0] < 0 || alpha[0] >= M_PI) {
    for (int i = 0; i < n; ++i)
      alpha[i] = detail::wrap_angle(parity[i] ? alpha[i] - M_PI : alpha[i] + M_PI);
  }
  VertexRotation R;
  R.alpha = std::move(alpha);
  for (auto& [i, j, theta] : relations) {
    double dev = std::abs(detail::wrap_angle(R.alpha[i] + R.alpha[j] - theta));
    R.residual = std::max(R.residual, dev);
  }
  if (tol >= 0)
    require(R.residual <= tol, ErrorCode::InconsistentRotation,
            "realization is not a vertex rotation of the packing");
  return R;
}

}  // namespace cpmin
