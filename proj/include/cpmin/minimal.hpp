#pragma once

// Weierstrass integration for both surface types, the two mean-curvature
// functionals, reciprocal-parallelism and conjugacy checks, the Koebe-to-general
// extension, and face planarity.
//
// Both integrands are the same linear image L(M) = (c+b, i(c-b), 2a) of the
// respective sl(2,C) jump matrices, which is what makes the restriction
// theorem hold with matching gauges.

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "cpmin/differentials.hpp"

namespace cpmin {

struct DualSurface {
  std::vector<CVec3> value;        // per face of G (Koebe) or of the closed complex (general)
  double closedness = 0;           // relative cycle residual of the integrated form
  int n_real = 0;                  // general type: values [0, n_real) sit on F(TMG)
};

namespace detail {
inline double cvec_norm(const CVec3& v) { return v.norm(); }
inline CVec3 weier_vector(const Sl2& m) {
  return CVec3(m.c + m.b, cplx(0, 1) * (m.c - m.b), 2.0 * m.a);
}
}  // namespace detail

// F: F(G) -> C^3 with dF(e_uv) = (lambda/omega)(1 - z_i^2, i(1 + z_i^2), 2 z_i).
inline DualSurface weierstrass_koebe(const KoebeQD& qd, const CirclePacking& P,
                                     double tol = 1e-10) {
  const auto& G = P.mesh;
  auto z = tangency_points(P);
  OmegaForm W = omega_form(G, z);
  std::vector<DualJump> jumps;
  std::vector<CVec3> values;
  double scale = 0;
  for (size_t p = 0; p < G.interior_edges.size(); ++p) {
    auto [u, v] = G.edges[G.interior_edges[p]];
    cplx f = qd.lambda[p] / W.at(G, u, v);
    cplx zi = z[G.interior_edges[p]];
    jumps.push_back({G.left_face(u, v), G.left_face(v, u)});
    values.push_back(f * CVec3(1.0 - zi * zi, cplx(0, 1) * (1.0 + zi * zi), 2.0 * zi));
    scale = std::max(scale, values.back().norm());
  }
  DualSurface S;
  double res = 0;
  S.value = integrate_dual_one_form<CVec3>(G.face_count(), jumps, values, CVec3::Zero(),
                                           detail::cvec_norm, &res);
  S.closedness = res / std::max(scale, 1e-300);
  S.n_real = G.face_count();
  require(S.closedness <= tol, ErrorCode::NotAQuadraticDifferential,
          "lambda is not a quadratic differential of Koebe type");
  return S;
}

// F-hat on the faces of the closed medial complex (the real faces first, so the
// restriction to F(TMG) and to the G-face images is a prefix).
inline DualSurface weierstrass_general(const GeneralQD& qd, const std::vector<cplx>& z,
                                       const MedialComplex& M, double tol = 1e-10) {
  std::vector<DualJump> jumps;
  std::vector<CVec3> values;
  double scale = 0;
  for (size_t k = 0; k < M.q_edges.size(); ++k) {
    const auto& e = M.tmg_edges[M.q_edges[k]];
    cplx zi = z[e.a], zj = z[e.b];
    Vec3 Ni = stereographic(zi), Nj = stereographic(zj);
    require((Ni + Nj).norm() > 1e-12, ErrorCode::AntipodalNormals,
            "antipodal lifted endpoints on an edge");
    cplx f = qd.q[k] / (zi - zj);
    jumps.push_back({M.tmg_left_face(e.a, e.b), M.tmg_left_face(e.b, e.a)});
    values.push_back(f * CVec3(1.0 - zi * zj, cplx(0, 1) * (1.0 + zi * zj), zi + zj));
    scale = std::max(scale, values.back().norm());
  }
  DualSurface S;
  double res = 0;
  S.value = integrate_dual_one_form<CVec3>(static_cast<int>(M.faces.size()), jumps, values,
                                           CVec3::Zero(), detail::cvec_norm, &res);
  S.closedness = res / std::max(scale, 1e-300);
  S.n_real = M.n_real;
  require(S.closedness <= tol, ErrorCode::NotAQuadraticDifferential,
          "q is not a quadratic differential of general type");
  return S;
}

// ---------------------------------------------------------------------------
// dual polygons

// Faces of the dual realization of G: the cycle of faces around each interior
// vertex, counterclockwise.
inline std::vector<std::vector<int>> dual_face_cycles(const TriangulatedDisk& G) {
  std::vector<std::vector<int>> out;
  for (int u : G.interior_vertices) {
    std::vector<int> cyc;
    const auto& nb = G.vertex_neighbors[u];
    for (int w : nb) cyc.push_back(G.left_face(u, w));
    out.push_back(std::move(cyc));
  }
  return out;
}

// Faces of the dual of the closed medial complex at the interior medial
// vertices, as cycles of complex faces, plus the crossed medial edge per step.
struct MedialDualFace {
  int medial_vertex = -1;
  std::vector<int> faces;          // ccw cycle of closed-complex face ids
  std::vector<int> crossed_edges;  // tmg edge position crossed between step k and k+1
};

inline std::vector<MedialDualFace> medial_dual_faces(const MedialComplex& M) {
  std::vector<MedialDualFace> out;
  for (int i = 0; i < M.medial_vertex_count(); ++i) {
    if (!M.mv_interior[i]) continue;
    MedialDualFace D;
    D.medial_vertex = i;
    // walk ccw: in face (i, a, b), the next face across edge {i, b}
    int f0 = -1;
    for (size_t f = 0; f < M.faces.size(); ++f)
      if (M.faces[f][0] == i || M.faces[f][1] == i || M.faces[f][2] == i) {
        f0 = static_cast<int>(f);
        break;
      }
    int f = f0;
    do {
      D.faces.push_back(f);
      const auto& t = M.faces[f];
      int k = (t[0] == i) ? 0 : (t[1] == i ? 1 : 2);
      int b = t[(k + 2) % 3];  // face is (i, a, b): the next ccw face shares {i, b}
      D.crossed_edges.push_back(M.edge_position(i, b));
      f = M.tmg_left_face(i, b);
    } while (f != f0);
    out.push_back(std::move(D));
  }
  return out;
}

// ---------------------------------------------------------------------------
// curvature functionals

// Mixed-area vector sum_j f_j x N_{j+1} + N_j x f_{j+1} over a cyclic face.
inline Vec3 koebe_mean_curvature(const std::vector<Vec3>& f, const std::vector<Vec3>& N,
                                 const std::vector<int>& face) {
  Vec3 tot = Vec3::Zero();
  int n = static_cast<int>(face.size());
  for (int t = 0; t < n; ++t) {
    int a = face[t], b = face[(t + 1) % n];
    tot += f[a].cross(N[b]) + N[a].cross(f[b]);
  }
  return tot;
}

// t-linear coefficient of the area vector of f + t N (equals the mixed area).
inline Vec3 area_vector(const std::vector<Vec3>& pts, const std::vector<int>& face) {
  Vec3 tot = Vec3::Zero();
  int n = static_cast<int>(face.size());
  for (int t = 0; t < n; ++t) tot += pts[face[t]].cross(pts[face[(t + 1) % n]]);
  return tot;
}

struct PolySurface {
  std::vector<Vec3> pts;
  std::vector<std::vector<int>> faces;
};

namespace detail {

inline Vec3 polygon_normal(const std::vector<Vec3>& pts, const std::vector<int>& face) {
  Vec3 n = Vec3::Zero();
  int m = static_cast<int>(face.size());
  for (int t = 0; t < m; ++t) n += pts[face[t]].cross(pts[face[(t + 1) % m]]);
  double ln = n.norm();
  require(ln > 0, ErrorCode::DegenerateFace, "face with vanishing area vector");
  return n / ln;
}

}  // namespace detail

// Integrated mean curvature H = sum l tan(alpha/2) over the face's edges; the
// dihedral angle is signed positive for edges convex as seen from the face
// normal (right-hand rule on the stored cyclic order), zero for coplanar
// neighbors. Edges with only one incident face contribute nothing.
inline double general_mean_curvature(const PolySurface& S, int face_index,
                                     double fold_guard = 1e-6) {
  const auto& face = S.faces[face_index];
  require(face.size() >= 3, ErrorCode::DegenerateFace, "face with fewer than three vertices");
  Vec3 n1 = detail::polygon_normal(S.pts, face);
  // edge -> other face lookup
  auto other_face = [&](int a, int b) -> int {
    for (int fi = 0; fi < static_cast<int>(S.faces.size()); ++fi) {
      if (fi == face_index) continue;
      const auto& g = S.faces[fi];
      int m = static_cast<int>(g.size());
      for (int t = 0; t < m; ++t) {
        int p = g[t], q = g[(t + 1) % m];
        if ((p == a && q == b) || (p == b && q == a)) return fi;
      }
    }
    return -1;
  };
  double H = 0;
  int m = static_cast<int>(face.size());
  for (int t = 0; t < m; ++t) {
    int a = face[t], b = face[(t + 1) % m];
    int nb = other_face(a, b);
    if (nb < 0) continue;
    Vec3 n2 = detail::polygon_normal(S.pts, S.faces[nb]);
    Vec3 e = S.pts[b] - S.pts[a];
    double l = e.norm();
    require(l > 0, ErrorCode::ZeroEdge, "zero-length edge");
    Vec3 ehat = e / l;
    double alpha = std::atan2(n1.cross(n2).dot(ehat), n1.dot(n2));
    require(std::abs(alpha - M_PI) > fold_guard && std::abs(alpha + M_PI) > fold_guard,
            ErrorCode::FoldedEdge, "dihedral angle at pi");
    H += l * std::tan(alpha / 2);
  }
  return H;
}

// max |normalized cross product| between paired edge vectors. Dual edges that
// vanish relative to the surface scale have no direction and are skipped; a
// degenerate reference edge is an error.
inline double parallelism_defect(const std::vector<std::pair<Vec3, Vec3>>& pairs,
                                 double rel_floor = 1e-12) {
  double scale_a = 0, scale_b = 0;
  for (const auto& [a, b] : pairs) {
    scale_a = std::max(scale_a, a.norm());
    scale_b = std::max(scale_b, b.norm());
  }
  double worst = 0;
  for (const auto& [a, b] : pairs) {
    double la = a.norm(), lb = b.norm();
    require(lb > rel_floor * scale_b, ErrorCode::ZeroEdge, "degenerate reference edge");
    if (la <= rel_floor * scale_a) continue;
    worst = std::max(worst, a.cross(b).norm() / (la * lb));
  }
  return worst;
}

// Koebe-type pairing: Im F edges against N_Cstar primal edges, and Re F edges
// against N_C edges, per interior edge of G.
struct ReciprocalParallelReport {
  double im_vs_ncstar = 0;
  double re_vs_nc = 0;
};

inline ReciprocalParallelReport check_reciprocal_parallel(const DualSurface& F,
                                                          const KoebePair& K,
                                                          const CirclePacking& P) {
  const auto& G = P.mesh;
  std::vector<std::pair<Vec3, Vec3>> im_pairs, re_pairs;
  for (int e : G.interior_edges) {
    auto [u, v] = G.edges[e];
    int fL = G.left_face(u, v), fR = G.left_face(v, u);
    CVec3 d = F.value[fL] - F.value[fR];
    im_pairs.push_back({d.imag(), K.n_cstar[v] - K.n_cstar[u]});
    re_pairs.push_back({d.real(), K.n_c[fL] - K.n_c[fR]});
  }
  return {parallelism_defect(im_pairs), parallelism_defect(re_pairs)};
}

// Conjugate-pair identities: Im dF = Re dF x sigma(z_i) per interior edge, and
// matching edge lengths. Defects are relative to the largest edge.
struct ConjugateReport {
  double rotation = 0;
  double length = 0;
};

inline ConjugateReport check_conjugate_pair(const DualSurface& F, const CirclePacking& P) {
  const auto& G = P.mesh;
  auto z = tangency_points(P);
  double scale = 0;
  std::vector<std::pair<Vec3, Vec3>> edges;
  ConjugateReport R;
  for (int e : G.interior_edges) {
    auto [u, v] = G.edges[e];
    CVec3 d = F.value[G.left_face(u, v)] - F.value[G.left_face(v, u)];
    Vec3 re = d.real(), im = d.imag();
    scale = std::max({scale, re.norm(), im.norm()});
    Vec3 sg = stereographic(z[e]);
    R.rotation = std::max(R.rotation, (im - re.cross(sg)).norm());
    R.length = std::max(R.length, std::abs(im.norm() - re.norm()));
  }
  R.rotation /= std::max(scale, 1e-300);
  R.length /= std::max(scale, 1e-300);
  return R;
}

// Distance of the face's vertices from its best-fit plane, over the face
// diameter; optionally also the angle to a reference normal.
struct PlanarityReport {
  double defect = 0;
  double normal_angle = 0;
};

inline PlanarityReport face_planarity(const std::vector<Vec3>& pts, const std::vector<int>& face,
                                      const Vec3* normal_hint = nullptr) {
  require(face.size() >= 3, ErrorCode::DegenerateFace, "face with fewer than three vertices");
  Vec3 cen = Vec3::Zero();
  for (int i : face) cen += pts[i];
  cen /= static_cast<double>(face.size());
  Eigen::Matrix3d Q = Eigen::Matrix3d::Zero();
  for (int i : face) {
    Vec3 d = pts[i] - cen;
    Q += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(Q);
  Vec3 n = eig.eigenvectors().col(0);
  double dev = 0, diam = 0;
  for (int i : face) {
    dev = std::max(dev, std::abs(n.dot(pts[i] - cen)));
    for (int j : face) diam = std::max(diam, (pts[i] - pts[j]).norm());
  }
  require(diam > 0, ErrorCode::DegenerateFace, "face has zero diameter");
  PlanarityReport R;
  R.defect = dev / diam;
  if (normal_hint) {
    Vec3 h = normal_hint->normalized();
    double c = std::abs(n.dot(h));
    R.normal_angle = std::acos(std::min(1.0, c));
  }
  return R;
}

// ---------------------------------------------------------------------------
// extension theorem

struct Extension {
  DualSurface F;          // Koebe type on F(G)
  DualSurface F_hat;      // general type on the closed medial complex
  GeneralQD q;
  double restriction_defect = 0;  // max |(F_hat o inject - F) - mean offset| / scale
};

inline Extension extend_koebe_to_general(const KoebeQD& lam, const CirclePacking& P,
                                         const MedialComplex& M) {
  Extension E;
  E.q = koebe_to_general(lam, P, M);
  E.F = weierstrass_koebe(lam, P);
  E.F_hat = weierstrass_general(E.q, tangency_points(P), M);
  int n = P.mesh.face_count();
  CVec3 mean = CVec3::Zero();
  for (int f = 0; f < n; ++f) mean += E.F_hat.value[M.tmg_face_of_G_face(f)] - E.F.value[f];
  mean /= static_cast<double>(n);
  double scale = 0;
  for (int f = 0; f < n; ++f) scale = std::max(scale, E.F.value[f].norm());
  for (const auto& v : E.F_hat.value) scale = std::max(scale, v.norm());
  double worst = 0;
  for (int f = 0; f < n; ++f)
    worst = std::max(worst,
                     (E.F_hat.value[M.tmg_face_of_G_face(f)] - E.F.value[f] - mean).norm());
  E.restriction_defect = worst / std::max(scale, 1e-300);
  return E;
}

}  // namespace cpmin
