#pragma once

// Cotangent weights on the medial graph, the two discrete harmonic function
// classes (sigma on V(G), alpha on V(MG)), harmonic conjugates eta on F(G),
// and the passage from sigma to an actual packing deformation.

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "cpmin/medial.hpp"
#include "cpmin/packing.hpp"

namespace cpmin {

// circumradius of the tangency triangle inside a face with circle radii ru, rv, rs
inline double dual_circle_radius(double ru, double rv, double rs) {
  return std::sqrt(ru * rv * rs / (ru + rv + rs));
}

// Weight per edge of the real medial triangulation: 0 on diagonals, and
// R_v/R_ijk + R_ijk/R_v on MG edges, with R_v the shared-circle radius and
// R_ijk the dual-circle radius of the face triangle containing the edge.
inline std::vector<double> cot_weights(const CirclePacking& P, const MedialComplex& M) {
  const auto& G = P.mesh;
  std::vector<double> w(M.tmg_edges.size(), 0.0);
  for (size_t pos = 0; pos < M.tmg_edges.size(); ++pos) {
    const auto& e = M.tmg_edges[pos];
    if (e.real_face_count == 0) continue;              // closure-only edges carry no weight
    if (e.kind != MedialEdgeKind::Triangle) continue;  // diagonals: weight 0
    auto [u1, v1] = G.edges[e.a];
    auto [u2, v2] = G.edges[e.b];
    int shared = (u1 == u2 || u1 == v2) ? u1 : v1;     // the circle both points lie on
    int o1 = u1 + v1 - shared, o2 = u2 + v2 - shared;  // the G face is {shared, o1, o2}
    double Rf = dual_circle_radius(P.radius[shared], P.radius[o1], P.radius[o2]);
    double Rv = P.radius[shared];
    w[pos] = Rv / Rf + Rf / Rv;
  }
  return w;
}

// Residual of sum_v (R_ijk + R_imn)/(R_u + R_v) (sigma_v - sigma_u) over the
// interior vertices of G, relative to the total weighted variation.
inline double check_sigma_harmonic(const std::vector<double>& sigma, const CirclePacking& P) {
  const auto& G = P.mesh;
  require(static_cast<int>(sigma.size()) == G.vertex_count, ErrorCode::NotHarmonic,
          "sigma must be defined on V(G)");
  double worst = 0;
  for (int u : G.interior_vertices) {
    double tot = 0, scale = 0;
    for (int w : G.vertex_neighbors[u]) {
      double wt = 0;
      for (auto [a, b] : {std::pair{u, w}, std::pair{w, u}})
        if (G.has_left(a, b)) {
          int s = G.face_third(G.left_face(a, b), u, w);
          wt += dual_circle_radius(P.radius[u], P.radius[w], P.radius[s]);
        }
      wt /= (P.radius[u] + P.radius[w]);
      tot += wt * (sigma[w] - sigma[u]);
      scale += wt * std::abs(sigma[w] - sigma[u]);
    }
    worst = std::max(worst, std::abs(tot) / std::max(scale, 1e-300));
  }
  return worst;
}

// Cotangent-Laplacian residual of alpha at the interior medial vertices. Only
// the four triangle edges at each vertex carry weight, so the value does not
// depend on the diagonals of the triangulation.
inline double check_alpha_harmonic(const std::vector<double>& alpha, const CirclePacking& P,
                                   const MedialComplex& M) {
  const auto& G = P.mesh;
  require(static_cast<int>(alpha.size()) == M.medial_vertex_count(), ErrorCode::NotHarmonic,
          "alpha must be defined on V(MG)");
  double worst = 0;
  for (int i = 0; i < M.medial_vertex_count(); ++i) {
    if (!M.mv_interior[i]) continue;
    auto [u, v] = G.edges[i];
    double tot = 0, scale = 0;
    for (auto [a, b] : {std::pair{u, v}, std::pair{v, u}}) {
      int f = G.left_face(a, b);
      int s = G.face_third(f, a, b);
      double Rf = dual_circle_radius(P.radius[u], P.radius[v], P.radius[s]);
      // neighbors of medial(uv) inside face (a, b, s): medial(b,s) shares circle b,
      // medial(s,a) shares circle a
      int mbs = G.edge_index(b, s), msa = G.edge_index(s, a);
      double wb = P.radius[b] / Rf + Rf / P.radius[b];
      double wa = P.radius[a] / Rf + Rf / P.radius[a];
      tot += wb * (alpha[mbs] - alpha[i]) + wa * (alpha[msa] - alpha[i]);
      scale += wb * std::abs(alpha[mbs] - alpha[i]) + wa * std::abs(alpha[msa] - alpha[i]);
    }
    worst = std::max(worst, std::abs(tot) / std::max(scale, 1e-300));
  }
  return worst;
}

// eta per face of G: d eta across an interior edge equals the sigma variation
// with the two dual-circle radii; exists iff sigma is harmonic. Gauge: eta = 0
// at face 0.
inline std::vector<double> harmonic_conjugate(const std::vector<double>& sigma,
                                              const CirclePacking& P,
                                              double* cycle_residual = nullptr,
                                              double tol = 1e-8) {
  const auto& G = P.mesh;
  std::vector<DualJump> jumps;
  std::vector<double> values;
  double scale = 0;
  for (int e : G.interior_edges) {
    auto [u, v] = G.edges[e];
    int fL = G.left_face(u, v), fR = G.left_face(v, u);
    double RL = dual_circle_radius(P.radius[u], P.radius[v], P.radius[G.face_third(fL, u, v)]);
    double RR = dual_circle_radius(P.radius[u], P.radius[v], P.radius[G.face_third(fR, u, v)]);
    jumps.push_back({fL, fR});
    values.push_back((RL + RR) / (P.radius[u] + P.radius[v]) * (sigma[v] - sigma[u]));
    scale = std::max(scale, std::abs(values.back()));
  }
  double res = 0;
  auto eta = integrate_dual_one_form<double>(G.face_count(), jumps, values, 0.0,
                                             [](double d) { return std::abs(d); }, &res);
  res /= std::max(scale, 1e-300);
  if (cycle_residual) *cycle_residual = res;
  require(res <= tol, ErrorCode::NotHarmonic, "sigma is not harmonic, no conjugate exists");
  return eta;
}

// alpha_i = eta_uvs - R_ijk/(R_u + R_v)(sigma_v - sigma_u); well defined from
// either incident face.
inline std::vector<double> sigma_to_alpha(const std::vector<double>& sigma,
                                          const std::vector<double>& eta, const CirclePacking& P,
                                          double* face_mismatch = nullptr, double tol = 1e-8) {
  const auto& G = P.mesh;
  std::vector<double> alpha(G.edge_count(), 0.0);
  double worst = 0, scale = 0;
  for (double e : eta) scale = std::max(scale, std::abs(e));
  for (double s : sigma) scale = std::max(scale, std::abs(s));
  for (int e = 0; e < G.edge_count(); ++e) {
    auto [u, v] = G.edges[e];
    double vals[2];
    int nv = 0;
    for (auto [a, b] : {std::pair{u, v}, std::pair{v, u}}) {
      if (!G.has_left(a, b)) continue;
      int f = G.left_face(a, b);
      double Rf = dual_circle_radius(P.radius[u], P.radius[v], P.radius[G.face_third(f, a, b)]);
      vals[nv++] = eta[f] - Rf / (P.radius[a] + P.radius[b]) * (sigma[b] - sigma[a]);
    }
    alpha[e] = vals[0];
    if (nv == 2) {
      worst = std::max(worst, std::abs(vals[0] - vals[1]));
      alpha[e] = (vals[0] + vals[1]) / 2;
    }
  }
  worst /= std::max(scale, 1e-300);
  if (face_mismatch) *face_mismatch = worst;
  require(worst <= tol, ErrorCode::FaceMismatch,
          "the two incident faces disagree about alpha");
  return alpha;
}

struct PackingDeformation {
  std::vector<cplx> cdot;    // per vertex of G, zero at vertex 0
  std::vector<double> rdot;  // sigma * R
  std::vector<double> alpha;
  double closedness = 0;     // face-cycle residual of the cdot jumps
};

// Integrates cdot over a spanning tree of G from the per-edge relation
// cdot_v - cdot_u = ((sigma_u R_u + sigma_v R_v)/(R_u+R_v) + i alpha_i)(c_v - c_u).
inline PackingDeformation deformation_from_sigma(const std::vector<double>& sigma,
                                                 const CirclePacking& P, double tol = 1e-8) {
  const auto& G = P.mesh;
  PackingDeformation D;
  auto eta = harmonic_conjugate(sigma, P, nullptr, tol);
  D.alpha = sigma_to_alpha(sigma, eta, P);
  D.rdot.resize(G.vertex_count);
  for (int v = 0; v < G.vertex_count; ++v) D.rdot[v] = sigma[v] * P.radius[v];
  auto jump = [&](int u, int v) {
    int e = G.edge_index(u, v);
    double m = (sigma[u] * P.radius[u] + sigma[v] * P.radius[v]) / (P.radius[u] + P.radius[v]);
    return (cplx(m, 0) + cplx(0, D.alpha[e])) * (P.center[v] - P.center[u]);
  };
  D.cdot.assign(G.vertex_count, cplx(0, 0));
  std::vector<char> seen(G.vertex_count, 0);
  std::deque<int> dq{0};
  seen[0] = 1;
  while (!dq.empty()) {
    int u = dq.front();
    dq.pop_front();
    for (int w : G.vertex_neighbors[u])
      if (!seen[w]) {
        D.cdot[w] = D.cdot[u] + jump(u, w);
        seen[w] = 1;
        dq.push_back(w);
      }
  }
  double worst = 0, scale = 0;
  for (const auto& f : G.faces) {
    cplx tot = jump(f[0], f[1]) + jump(f[1], f[2]) + jump(f[2], f[0]);
    worst = std::max(worst, std::abs(tot));
  }
  for (int v = 0; v < G.vertex_count; ++v) scale = std::max(scale, std::abs(D.cdot[v]));
  D.closedness = worst / std::max(scale, 1e-300);
  require(D.closedness <= std::max(tol, 1e-10), ErrorCode::NotHarmonic,
          "cdot jumps do not close around faces");
  return D;
}

// Exact derivative of the tangency-point formula under (cdot, rdot).
inline std::vector<cplx> tangency_velocity(const CirclePacking& P, const std::vector<cplx>& cdot,
                                           const std::vector<double>& rdot) {
  const auto& G = P.mesh;
  std::vector<cplx> zdot(G.edge_count());
  for (int e = 0; e < G.edge_count(); ++e) {
    auto [u, v] = G.edges[e];
    double S = P.radius[u] + P.radius[v];
    cplx num = P.radius[v] * P.center[u] + P.radius[u] * P.center[v];
    cplx dnum = rdot[v] * P.center[u] + P.radius[v] * cdot[u] + rdot[u] * P.center[v] +
                P.radius[u] * cdot[v];
    zdot[e] = dnum / S - num * (rdot[u] + rdot[v]) / (S * S);
  }
  return zdot;
}

// Harmonic extension of boundary sigma values into the interior (unique; the
// interior block of the weighted Laplacian is an M-matrix).
inline std::vector<double> harmonic_extension(const std::map<int, double>& boundary_sigma,
                                              const CirclePacking& P) {
  const auto& G = P.mesh;
  int ni = static_cast<int>(G.interior_vertices.size());
  std::vector<double> sigma(G.vertex_count, 0.0);
  for (auto [v, s] : boundary_sigma) {
    require(v >= 0 && v < G.vertex_count && G.vertex_is_boundary[v],
            ErrorCode::InvalidBoundaryData, "sigma prescribed off the boundary");
    sigma[v] = s;
  }
  if (ni == 0) return sigma;
  std::vector<int> pos(G.vertex_count, -1);
  for (int k = 0; k < ni; ++k) pos[G.interior_vertices[k]] = k;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(ni, ni);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ni);
  for (int k = 0; k < ni; ++k) {
    int u = G.interior_vertices[k];
    for (int w : G.vertex_neighbors[u]) {
      double wt = 0;
      for (auto [a, b] : {std::pair{u, w}, std::pair{w, u}})
        if (G.has_left(a, b)) {
          int s = G.face_third(G.left_face(a, b), u, w);
          wt += dual_circle_radius(P.radius[u], P.radius[w], P.radius[s]);
        }
      wt /= (P.radius[u] + P.radius[w]);
      A(k, k) -= wt;
      if (pos[w] >= 0)
        A(k, pos[w]) += wt;
      else
        rhs(k) -= wt * sigma[w];
    }
  }
  Eigen::VectorXd x = A.colPivHouseholderQr().solve(rhs);
  for (int k = 0; k < ni; ++k) sigma[G.interior_vertices[k]] = x(k);
  return sigma;
}

}  // namespace cpmin
