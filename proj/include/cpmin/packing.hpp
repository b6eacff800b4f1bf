#pragma once

// Circle packing geometry: radii solver with uniform-neighbor superstep
// acceleration, breadth-first layout, tangency points, stereographic lift,
// circle poles and the pair of Koebe polyhedra.

#include <Eigen/Dense>
#include <cmath>
#include <deque>
#include <map>
#include <vector>

#include "cpmin/mesh.hpp"

namespace cpmin {

using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;

struct CirclePacking {
  TriangulatedDisk mesh;
  std::vector<cplx> center;
  std::vector<double> radius;
};

struct SolveOptions {
  double tol = 1e-12;
  int max_iter = 100000;
};

namespace detail {

// angle at u in the tangent triangle (u, v, w)
inline double corner_angle(double ru, double rv, double rw) {
  return 2.0 * std::asin(std::sqrt(rv * rw / ((ru + rv) * (ru + rw))));
}

inline double angle_sum(const TriangulatedDisk& G, const std::vector<double>& R, int u) {
  const auto& nb = G.vertex_neighbors[u];
  double s = 0;
  int n = static_cast<int>(nb.size());
  for (int i = 0; i < n; ++i) s += corner_angle(R[u], R[nb[i]], R[nb[(i + 1) % n]]);
  return s;
}

}  // namespace detail

// Thurston-style iteration on the interior radii with prescribed boundary
// radii, then breadth-first layout. The first boundary vertex sits at the
// origin with its first boundary edge along the positive real axis.
inline CirclePacking solve_packing(const TriangulatedDisk& G,
                                   const std::map<int, double>& boundary_radii,
                                   const SolveOptions& opt = {}) {
  std::vector<double> R(G.vertex_count, 1.0);
  int given = 0;
  for (auto [v, r] : boundary_radii) {
    require(v >= 0 && v < G.vertex_count, ErrorCode::InvalidBoundaryData, "vertex out of range");
    require(G.vertex_is_boundary[v], ErrorCode::InvalidBoundaryData,
            "radius prescribed at an interior vertex");
    require(r > 0 && std::isfinite(r), ErrorCode::InvalidBoundaryData, "radius must be positive");
    R[v] = r;
    ++given;
  }
  require(given == G.vertex_count - static_cast<int>(G.interior_vertices.size()),
          ErrorCode::InvalidBoundaryData, "every boundary vertex needs a radius");

  // uniform-neighbor update with superstep acceleration (Collins-Stephenson)
  double lambda_prev = -1;
  bool accel_ready = false;
  std::vector<double> R_prev = R;
  double defect = 0;
  int it = 0;
  for (; it < opt.max_iter; ++it) {
    defect = 0;
    double c2 = 0;
    for (int u : G.interior_vertices) {
      double th = detail::angle_sum(G, R, u);
      double k = static_cast<double>(G.vertex_neighbors[u].size());
      defect = std::max(defect, std::abs(th - 2 * M_PI));
      c2 += (th - 2 * M_PI) * (th - 2 * M_PI);
      double beta = std::sin(th / (2 * k));
      double delta = std::sin(M_PI / k);
      double rv = beta / (1 - beta) * R[u];
      R[u] = (1 - delta) / delta * rv;
    }
    if (defect < opt.tol) break;
    // superstep: extrapolate along the last correction when the contraction
    // factor has settled
    double c = std::sqrt(c2);
    if (lambda_prev > 0 && c > 0) {
      double lam = c / lambda_prev;
      if (accel_ready && lam < 1.0) {
        double factor = lam / (1 - lam);
        bool ok = true;
        std::vector<double> R_try(G.vertex_count);
        for (int v = 0; v < G.vertex_count; ++v) {
          R_try[v] = R[v] + factor * (R[v] - R_prev[v]);
          if (R_try[v] <= 0) ok = false;
        }
        if (ok) {
          R_prev = R;
          R = R_try;
          accel_ready = false;
          lambda_prev = -1;
          continue;
        }
      }
      accel_ready = true;
    }
    lambda_prev = c;
    R_prev = R;
  }
  if (defect >= opt.tol) {
    // final recheck (the loop condition samples before updates)
    double worst = 0;
    for (int u : G.interior_vertices)
      worst = std::max(worst, std::abs(detail::angle_sum(G, R, u) - 2 * M_PI));
    require(worst < opt.tol, ErrorCode::NoConvergence,
            "radii iteration did not reach tolerance in " + std::to_string(opt.max_iter) +
                " iterations");
  }

  // layout
  CirclePacking P;
  P.mesh = G;
  P.radius = R;
  P.center.assign(G.vertex_count, cplx(0, 0));
  std::vector<char> placed(G.vertex_count, 0);
  int b0 = G.boundary_cycle.front();
  int w0 = -1;  // boundary neighbor with the disk on the left of b0->w0
  for (int w : G.vertex_neighbors[b0]) {
    int e = G.edge_index(b0, w);
    if (G.edge_is_boundary[e] && G.has_left(b0, w)) {
      w0 = w;
      break;
    }
  }
  require(w0 >= 0, ErrorCode::NotADisk, "no boundary edge at the first boundary vertex");
  P.center[b0] = 0;
  P.center[w0] = R[b0] + R[w0];
  placed[b0] = placed[w0] = 1;
  std::deque<int> fq{G.left_face(b0, w0)};
  std::vector<char> fdone(G.face_count(), 0);
  while (!fq.empty()) {
    int fi = fq.front();
    fq.pop_front();
    if (fdone[fi]) continue;
    const auto& f = G.faces[fi];
    int unplaced = -1, nplaced = 0;
    for (int k = 0; k < 3; ++k) {
      if (placed[f[k]])
        ++nplaced;
      else
        unplaced = k;
    }
    if (nplaced < 2) {
      fq.push_back(fi);
      continue;
    }
    fdone[fi] = 1;
    if (nplaced == 2) {
      int s = f[unplaced], u = f[(unplaced + 1) % 3], v = f[(unplaced + 2) % 3];
      // face is (u, v, s) counterclockwise
      double th = detail::corner_angle(R[u], R[v], R[s]);
      cplx dir = (P.center[v] - P.center[u]) / std::abs(P.center[v] - P.center[u]);
      P.center[s] = P.center[u] + (R[u] + R[s]) * dir * std::exp(cplx(0, th));
      placed[s] = 1;
    }
    for (int k = 0; k < 3; ++k) {
      int a = f[k], b = f[(k + 1) % 3];
      if (G.has_left(b, a) && !fdone[G.left_face(b, a)]) fq.push_back(G.left_face(b, a));
    }
  }
  return P;
}

inline CirclePacking solve_packing(const TriangulatedDisk& G, double uniform_boundary_radius,
                                   const SolveOptions& opt = {}) {
  std::map<int, double> br;
  for (int v = 0; v < G.vertex_count; ++v)
    if (G.vertex_is_boundary[v]) br[v] = uniform_boundary_radius;
  return solve_packing(G, br, opt);
}

// z_i = c_u + R_u (c_v - c_u)/(R_u + R_v), one point per medial vertex.
inline std::vector<cplx> tangency_points(const CirclePacking& P) {
  const auto& G = P.mesh;
  std::vector<cplx> z(G.edge_count());
  for (int e = 0; e < G.edge_count(); ++e) {
    auto [u, v] = G.edges[e];
    z[e] = (P.radius[v] * P.center[u] + P.radius[u] * P.center[v]) / (P.radius[u] + P.radius[v]);
  }
  return z;
}

// max over edges of | |c_v - c_u| - (R_u + R_v) | / (R_u + R_v)
inline double tangency_residual(const CirclePacking& P) {
  double worst = 0;
  for (auto [u, v] : P.mesh.edges) {
    double s = P.radius[u] + P.radius[v];
    worst = std::max(worst, std::abs(std::abs(P.center[v] - P.center[u]) - s) / s);
  }
  return worst;
}

inline double face_signed_area(const CirclePacking& P, int fi) {
  const auto& f = P.mesh.faces[fi];
  cplx a = P.center[f[0]], b = P.center[f[1]], c = P.center[f[2]];
  return 0.5 * std::imag(std::conj(b - a) * (c - a));
}

inline bool packing_positively_oriented(const CirclePacking& P) {
  for (int fi = 0; fi < P.mesh.face_count(); ++fi)
    if (face_signed_area(P, fi) <= 0) return false;
  return true;
}

// ---------------------------------------------------------------------------
// sphere side

inline Vec3 stereographic(cplx z) {
  double n2 = std::norm(z);
  return Vec3(2 * z.real(), 2 * z.imag(), n2 - 1) / (1 + n2);
}

// differential of the stereographic projection at z applied to v
inline Vec3 d_sigma(cplx z, cplx v) {
  require(v != cplx(0, 0), ErrorCode::ZeroTangent, "zero tangent vector");
  double n2 = std::norm(z);
  CVec3 w(1.0 - z * z, cplx(0, 1) * (1.0 + z * z), 2.0 * z);
  double f = 2 * std::norm(v) / ((1 + n2) * (1 + n2));
  return f * (w / v).real();
}

struct PlaneCircle {
  Vec3 n;     // unit normal, oriented so h > 0
  double h;   // plane offset: the circle is {x in S^2 : <n,x> = h}
};

inline constexpr double kMinPlaneOffset = 1e-8;

// Plane through the stereographic lift of three points of the circle.
inline PlaneCircle lift_circle(cplx center, double radius, double h_min = kMinPlaneOffset) {
  require(radius > 0, ErrorCode::DegeneratePlane, "radius must be positive");
  Vec3 p0 = stereographic(center + radius);
  Vec3 p1 = stereographic(center + radius * std::polar(1.0, 2 * M_PI / 3));
  Vec3 p2 = stereographic(center + radius * std::polar(1.0, 4 * M_PI / 3));
  Vec3 n = (p1 - p0).cross(p2 - p0);
  double ln = n.norm();
  require(ln > 0, ErrorCode::DegeneratePlane, "lifted points are collinear");
  n /= ln;
  double h = n.dot(p0);
  if (h < 0) {
    n = -n;
    h = -h;
  }
  require(h >= h_min, ErrorCode::DegeneratePlane, "lifted plane passes through the center");
  return {n, h};
}

// Pole of the plane with respect to the unit sphere: <pole, x> = 1 on the circle.
inline Vec3 circle_pole(const PlaneCircle& pc, double h_min = kMinPlaneOffset) {
  require(std::abs(pc.h) >= h_min, ErrorCode::DegeneratePlane, "plane through the center has no pole");
  return pc.n / pc.h;
}

inline std::pair<cplx, double> circumcircle(cplx a, cplx b, cplx c) {
  cplx p = b - a, q = c - a;
  double det = p.real() * q.imag() - p.imag() * q.real();
  require(std::abs(det) > 0, ErrorCode::DegenerateTriangle, "collinear points have no circumcircle");
  double p2 = std::norm(p), q2 = std::norm(q);
  cplx cen = a + cplx(q.imag() * p2 - p.imag() * q2, p.real() * q2 - q.real() * p2) / (2 * det);
  return {cen, std::abs(a - cen)};
}

struct SphericalLift {
  std::vector<PlaneCircle> vertex_circle;   // per vertex of G
  std::vector<PlaneCircle> face_circle;     // dual circle per face of G
  std::vector<Vec3> tangency;               // sigma(z_i) per medial vertex
};

inline SphericalLift lift_packing(const CirclePacking& P, double h_min = kMinPlaneOffset) {
  const auto& G = P.mesh;
  SphericalLift L;
  L.vertex_circle.reserve(G.vertex_count);
  for (int v = 0; v < G.vertex_count; ++v)
    L.vertex_circle.push_back(lift_circle(P.center[v], P.radius[v], h_min));
  auto z = tangency_points(P);
  L.tangency.reserve(z.size());
  for (cplx zi : z) L.tangency.push_back(stereographic(zi));
  L.face_circle.reserve(G.face_count());
  for (const auto& f : G.faces) {
    cplx zi = z[G.edge_index(f[0], f[1])];
    cplx zj = z[G.edge_index(f[1], f[2])];
    cplx zk = z[G.edge_index(f[2], f[0])];
    auto [cen, rad] = circumcircle(zi, zj, zk);
    L.face_circle.push_back(lift_circle(cen, rad, h_min));
  }
  return L;
}

// Translate the tangency centroid to the origin and scale so that every circle
// lies inside the disk of the given radius. Keeps circles away from the unit
// circle so that all lifted planes stay clear of the center.
inline CirclePacking normalize_for_lift(const CirclePacking& P, double disk_radius = 0.5) {
  auto z = tangency_points(P);
  cplx cen(0, 0);
  for (cplx zi : z) cen += zi;
  cen /= static_cast<double>(z.size());
  double extent = 0;
  for (int v = 0; v < P.mesh.vertex_count; ++v)
    extent = std::max(extent, std::abs(P.center[v] - cen) + P.radius[v]);
  double s = disk_radius / extent;
  CirclePacking Q = P;
  for (int v = 0; v < Q.mesh.vertex_count; ++v) {
    Q.center[v] = s * (P.center[v] - cen);
    Q.radius[v] = s * P.radius[v];
  }
  return Q;
}

// Normalization plus lift, shrinking up to 8 times if a plane degenerates.
inline std::pair<CirclePacking, SphericalLift> prepare_for_sphere(const CirclePacking& P) {
  double disk_radius = 0.5;
  for (int attempt = 0;; ++attempt) {
    CirclePacking Q = normalize_for_lift(P, disk_radius);
    try {
      SphericalLift L = lift_packing(Q);
      return {std::move(Q), std::move(L)};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegeneratePlane || attempt >= 8) throw;
    }
    disk_radius *= 0.5;
  }
}

struct KoebePair {
  std::vector<Vec3> n_c;      // per face of G: pole of the lifted dual circle
  std::vector<Vec3> n_cstar;  // per vertex of G: pole of the lifted vertex circle
};

inline KoebePair koebe_polyhedra(const CirclePacking& P, const SphericalLift& L) {
  KoebePair K;
  K.n_c.reserve(L.face_circle.size());
  for (const auto& pc : L.face_circle) K.n_c.push_back(circle_pole(pc));
  K.n_cstar.reserve(L.vertex_circle.size());
  for (const auto& pc : L.vertex_circle) K.n_cstar.push_back(circle_pole(pc));
  (void)P;
  return K;
}

}  // namespace cpmin
