#pragma once

// Holomorphic quadratic differentials of Koebe type (lambda on interior edges
// of G) and of general type (q on interior edges of the closed medial complex),
// their linear constraint systems and null-space bases, and the deformation
// machinery connecting them: lambda -> Phi -> zdot -> Phi-hat -> q and back.
//
// Conventions. The Koebe-side jump across an interior edge u->v with tangency
// point z_i is
//     Phi_left - Phi_right = (lambda/omega(e_uv)) [[z_i, -z_i^2], [1, -z_i]],
// and lambda equals the logarithmic derivative of the packing cross ratio. On
// the pattern side we normalize q to equal the logarithmic derivative of the
// pattern cross ratio, which fixes the jump across a medial edge {i,j} with
// faces A (left of i->j) and B (right) to
//     Phi_hat_A - Phi_hat_B = (q_ij/(z_i - z_j)) [[(z_i+z_j)/2, -z_i z_j], [1, -(z_i+z_j)/2]].

#include <Eigen/Dense>
#include <limits>
#include <vector>

#include "cpmin/invariants.hpp"
#include "cpmin/medial.hpp"
#include "cpmin/moebius.hpp"

namespace cpmin {

using Sl2 = InfMoebius;

struct KoebeQD {
  std::vector<double> lambda;  // aligned with G.interior_edges

  double at(const TriangulatedDisk& G, int u, int v) const {
    int p = G.interior_edge_position[G.edge_index(u, v)];
    require(p >= 0, ErrorCode::NotAQuadraticDifferential, "lambda lives on interior edges");
    return lambda[p];
  }
};

struct GeneralQD {
  std::vector<double> q;        // aligned with M.q_edges
  std::uint64_t fingerprint = 0;

  double at(const MedialComplex& M, int i, int j) const {
    int qp = M.tmg_edges[M.edge_position(i, j)].q_position;
    require(qp >= 0, ErrorCode::NotAQuadraticDifferential,
            "q lives on interior edges of the closed medial complex");
    return q[qp];
  }
};

// ---------------------------------------------------------------------------
// constraint residuals

// max over interior vertices u of |sum lambda/omega (1-z^2, i(1+z^2), 2z)|,
// relative to sum |lambda/omega|.
inline double check_koebe_qd(const KoebeQD& qd, const CirclePacking& P) {
  const auto& G = P.mesh;
  auto z = tangency_points(P);
  OmegaForm W = omega_form(G, z);
  double worst = 0;
  for (int u : G.interior_vertices) {
    CVec3 tot = CVec3::Zero();
    double scale = 0;
    for (int w : G.vertex_neighbors[u]) {
      int e = G.edge_index(u, w);
      cplx f = qd.lambda[G.interior_edge_position[e]] / W.at(G, u, w);
      cplx zi = z[e];
      tot += f * CVec3(1.0 - zi * zi, cplx(0, 1) * (1.0 + zi * zi), 2.0 * zi);
      scale += std::abs(f);
    }
    worst = std::max(worst, tot.norm() / std::max(scale, 1e-300));
  }
  return worst;
}

// max over interior medial vertices of both defining sums, relative.
inline double check_general_qd(const GeneralQD& qd, const std::vector<cplx>& z,
                               const MedialComplex& M) {
  double worst = 0;
  std::vector<cplx> sum_w(M.medial_vertex_count(), 0.0);
  std::vector<double> sum_q(M.medial_vertex_count(), 0.0);
  std::vector<double> scale_q(M.medial_vertex_count(), 0.0), scale_w(M.medial_vertex_count(), 0.0);
  for (size_t k = 0; k < M.q_edges.size(); ++k) {
    const auto& e = M.tmg_edges[M.q_edges[k]];
    double qv = qd.q[k];
    for (auto [i, j] : {std::pair{e.a, e.b}, std::pair{e.b, e.a}}) {
      sum_q[i] += qv;
      scale_q[i] += std::abs(qv);
      sum_w[i] += qv / (z[j] - z[i]);
      scale_w[i] += std::abs(qv / (z[j] - z[i]));
    }
  }
  for (int i = 0; i < M.medial_vertex_count(); ++i) {
    if (!M.mv_interior[i]) continue;
    worst = std::max(worst, std::abs(sum_q[i]) / std::max(scale_q[i], 1e-300));
    worst = std::max(worst, std::abs(sum_w[i]) / std::max(scale_w[i], 1e-300));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// null-space bases

namespace detail {

// Orthonormal basis of the null space of A with a relative singular-value
// threshold. Canonicalized through the null projector and a column-pivoted QR
// so the result depends on the subspace, not on SVD vector order; signs fixed
// by making the largest-magnitude entry positive.
inline std::vector<Eigen::VectorXd> nullspace_basis(const Eigen::MatrixXd& A, double rel_tol = 1e-8) {
  int n = static_cast<int>(A.cols());
  std::vector<Eigen::VectorXd> basis;
  if (n == 0) return basis;
  if (A.rows() == 0) {
    for (int i = 0; i < n; ++i) basis.push_back(Eigen::VectorXd::Unit(n, i));
    return basis;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  double smax = s.size() ? s(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * std::max(smax, 1e-300)) ++rank;
  int k = n - rank;
  if (k == 0) return basis;
  Eigen::MatrixXd N = svd.matrixV().rightCols(k);
  Eigen::MatrixXd proj = N * N.transpose();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(proj);
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, k);
  for (int c = 0; c < k; ++c) {
    Eigen::VectorXd v = Q.col(c);
    int imax = 0;
    for (int i = 1; i < n; ++i)
      if (std::abs(v(i)) > std::abs(v(imax))) imax = i;
    if (v(imax) < 0) v = -v;
    basis.push_back(v);
  }
  return basis;
}

}  // namespace detail

// 6 real rows per interior vertex of G (the redundancy of the system is
// measured by rank, not assumed).
inline Eigen::MatrixXd koebe_constraint_matrix(const TriangulatedDisk& G,
                                               const std::vector<cplx>& z, const OmegaForm& W) {
  int n = static_cast<int>(G.interior_edges.size());
  Eigen::MatrixXd A(6 * static_cast<int>(G.interior_vertices.size()), n);
  A.setZero();
  int row = 0;
  for (int u : G.interior_vertices) {
    for (int w : G.vertex_neighbors[u]) {
      int e = G.edge_index(u, w);
      int col = G.interior_edge_position[e];
      cplx inv = 1.0 / W.at(G, u, w);
      cplx zi = z[e];
      cplx coef[3] = {inv, inv * zi, inv * zi * zi};
      for (int t = 0; t < 3; ++t) {
        A(row + 2 * t, col) += coef[t].real();
        A(row + 2 * t + 1, col) += coef[t].imag();
      }
    }
    row += 6;
  }
  return A;
}

inline std::vector<KoebeQD> koebe_qd_basis(const CirclePacking& P, double rel_tol = 1e-8) {
  const auto& G = P.mesh;
  auto z = tangency_points(P);
  OmegaForm W = omega_form(G, z);
  auto vecs = detail::nullspace_basis(koebe_constraint_matrix(G, z, W), rel_tol);
  std::vector<KoebeQD> out;
  for (auto& v : vecs) {
    KoebeQD qd;
    qd.lambda.assign(v.data(), v.data() + v.size());
    out.push_back(std::move(qd));
  }
  return out;
}

// 3 real rows per interior medial vertex: sum q and the complex sum q/(z_j-z_i).
inline Eigen::MatrixXd general_constraint_matrix(const std::vector<cplx>& z,
                                                 const MedialComplex& M) {
  int n = static_cast<int>(M.q_edges.size());
  int rows = 0;
  for (int i = 0; i < M.medial_vertex_count(); ++i)
    if (M.mv_interior[i]) rows += 3;
  Eigen::MatrixXd A(rows, n);
  A.setZero();
  int row = 0;
  for (int i = 0; i < M.medial_vertex_count(); ++i) {
    if (!M.mv_interior[i]) continue;
    for (size_t k = 0; k < M.q_edges.size(); ++k) {
      const auto& e = M.tmg_edges[M.q_edges[k]];
      if (e.a != i && e.b != i) continue;
      int j = e.a + e.b - i;
      cplx w = 1.0 / (z[j] - z[i]);
      A(row, k) += 1.0;
      A(row + 1, k) += w.real();
      A(row + 2, k) += w.imag();
    }
    row += 3;
  }
  return A;
}

inline std::vector<GeneralQD> general_qd_basis(const std::vector<cplx>& z, const MedialComplex& M,
                                               double rel_tol = 1e-8) {
  auto vecs = detail::nullspace_basis(general_constraint_matrix(z, M), rel_tol);
  std::vector<GeneralQD> out;
  for (auto& v : vecs) {
    GeneralQD qd;
    qd.q.assign(v.data(), v.data() + v.size());
    qd.fingerprint = M.fingerprint();
    out.push_back(std::move(qd));
  }
  return out;
}

// ---------------------------------------------------------------------------
// deformations

struct DeformationField {
  std::vector<Sl2> phi;       // per face of G, zero at face 0
  std::vector<Sl2> phi_hat;   // per face of the closed medial complex
  std::vector<cplx> zdot;     // per medial vertex
};

namespace detail {
inline double sl2_norm(const Sl2& m) { return m.norm(); }
}

// Integrates the nilpotent jumps of the Koebe differential over the dual graph
// of G. Every jump matrix annihilates (z_i, 1)^T.
inline std::vector<Sl2> phi_from_koebe_qd(const KoebeQD& qd, const CirclePacking& P,
                                          double* cycle_residual = nullptr,
                                          double tol = 1e-10) {
  const auto& G = P.mesh;
  auto z = tangency_points(P);
  OmegaForm W = omega_form(G, z);
  std::vector<DualJump> jumps;
  std::vector<Sl2> values;
  double scale = 0;
  for (size_t p = 0; p < G.interior_edges.size(); ++p) {
    auto [u, v] = G.edges[G.interior_edges[p]];
    cplx f = qd.lambda[p] / W.at(G, u, v);
    cplx zi = z[G.interior_edges[p]];
    jumps.push_back({G.left_face(u, v), G.left_face(v, u)});
    values.push_back(Sl2{f * zi, -f * zi * zi, f});
    scale = std::max(scale, values.back().norm());
  }
  double res = 0;
  auto phi = integrate_dual_one_form<Sl2>(G.face_count(), jumps, values, Sl2{},
                                          detail::sl2_norm, &res);
  res /= std::max(scale, 1e-300);
  if (cycle_residual) *cycle_residual = res;
  require(res <= tol, ErrorCode::NotAQuadraticDifferential,
          "dual 1-form of the jumps is not closed");
  return phi;
}

// zdot_i = det(Phi (z_i,1)^T, (z_i,1)^T), equal from both sides of the edge.
inline std::vector<cplx> velocity_from_phi(const std::vector<Sl2>& phi, const TriangulatedDisk& G,
                                           const std::vector<cplx>& z,
                                           double* side_mismatch = nullptr, double tol = 1e-11) {
  std::vector<cplx> zdot(G.edge_count());
  double worst = 0, scale = 0;
  for (const auto& m : phi) scale = std::max(scale, m.norm());
  for (int e = 0; e < G.edge_count(); ++e) {
    auto [u, v] = G.edges[e];
    if (!G.has_left(u, v)) std::swap(u, v);
    cplx val = velocity_at(phi[G.left_face(u, v)], z[e]);
    if (G.has_left(v, u)) {
      cplx other = velocity_at(phi[G.left_face(v, u)], z[e]);
      worst = std::max(worst, std::abs(val - other));
      val = (val + other) / 2.0;
    }
    zdot[e] = val;
  }
  worst /= std::max(scale, 1e-300);
  if (side_mismatch) *side_mismatch = worst;
  require(worst <= tol, ErrorCode::SideMismatch,
          "face velocities disagree; input was not a quadratic differential");
  return zdot;
}

// One fit per face of the closed medial complex.
inline std::vector<Sl2> phi_hat_from_velocity(const std::vector<cplx>& z,
                                              const std::vector<cplx>& zdot,
                                              const MedialComplex& M) {
  std::vector<Sl2> out;
  out.reserve(M.faces.size());
  for (const auto& t : M.faces)
    out.push_back(fit_inf_moebius(z[t[0]], z[t[1]], z[t[2]], zdot[t[0]], zdot[t[1]], zdot[t[2]]));
  return out;
}

// q from the Phi-hat jumps; q equals the logarithmic derivative of the pattern
// cross ratio (checked against the explicit four-term sum on real edges).
inline GeneralQD general_qd_from_velocity(const std::vector<cplx>& z,
                                          const std::vector<cplx>& zdot, const MedialComplex& M,
                                          double* imag_part = nullptr, double tol = 1e-9) {
  auto phat = phi_hat_from_velocity(z, zdot, M);
  GeneralQD qd;
  qd.fingerprint = M.fingerprint();
  qd.q.resize(M.q_edges.size());
  double worst_im = 0, scale = 0;
  double vel = 0, len = std::numeric_limits<double>::max();
  for (cplx v : zdot) vel = std::max(vel, std::abs(v));
  for (size_t k = 0; k < M.q_edges.size(); ++k) {
    const auto& e = M.tmg_edges[M.q_edges[k]];
    len = std::min(len, std::abs(z[e.b] - z[e.a]));
    const Sl2 d = phat[M.tmg_left_face(e.a, e.b)] - phat[M.tmg_left_face(e.b, e.a)];
    cplx qc = d.c * (z[e.a] - z[e.b]);
    worst_im = std::max(worst_im, std::abs(qc.imag()));
    scale = std::max(scale, std::abs(qc));
    qd.q[k] = qc.real();
  }
  // the natural size of a log-derivative is velocity over edge length; it keeps
  // the test meaningful when q itself vanishes (global Moebius fields)
  double rel = worst_im / std::max({scale, vel / std::max(len, 1e-300), 1e-300});
  if (imag_part) *imag_part = rel;
  require(rel <= tol, ErrorCode::NonRealEigenvalue,
          "deformation does not preserve intersection angles");
  return qd;
}

// Logarithmic derivative of the packing cross ratio, per interior edge of G.
inline KoebeQD koebe_qd_from_velocity(const TriangulatedDisk& G, const std::vector<cplx>& z,
                                      const std::vector<cplx>& zdot, double* imag_part = nullptr,
                                      double tol = 1e-9) {
  KoebeQD qd;
  qd.lambda.resize(G.interior_edges.size());
  double worst_im = 0, scale = 0;
  double vel = 0, len = std::numeric_limits<double>::max();
  for (cplx v : zdot) vel = std::max(vel, std::abs(v));
  for (size_t p = 0; p < G.interior_edges.size(); ++p) {
    auto [u, v] = G.edges[G.interior_edges[p]];
    EdgeStar E = edge_star(G, z, u, v);
    len = std::min({len, std::abs(E.zi - E.zj), std::abs(E.zj - E.zk), std::abs(E.zk - E.zm),
                    std::abs(E.zm - E.zi)});
    cplx di = zdot[E.mi], dj = zdot[E.mj], dk = zdot[E.mk], dm = zdot[E.mm];
    cplx val = (di - dj) / (E.zi - E.zj) - (dj - dk) / (E.zj - E.zk) +
               (dk - dm) / (E.zk - E.zm) - (dm - di) / (E.zm - E.zi);
    worst_im = std::max(worst_im, std::abs(val.imag()));
    scale = std::max(scale, std::abs(val));
    qd.lambda[p] = val.real();
  }
  double rel = worst_im / std::max({scale, vel / std::max(len, 1e-300), 1e-300});
  if (imag_part) *imag_part = rel;
  require(rel <= tol, ErrorCode::NonRealEigenvalue,
          "velocity field does not preserve the packing to first order");
  return qd;
}

// Integrates the general-type jumps over the dual of the closed medial complex.
inline std::vector<Sl2> phi_hat_from_general_qd(const GeneralQD& qd, const std::vector<cplx>& z,
                                                const MedialComplex& M,
                                                double* cycle_residual = nullptr,
                                                double tol = 1e-10) {
  std::vector<DualJump> jumps;
  std::vector<Sl2> values;
  double scale = 0;
  for (size_t k = 0; k < M.q_edges.size(); ++k) {
    const auto& e = M.tmg_edges[M.q_edges[k]];
    cplx zi = z[e.a], zj = z[e.b];
    cplx f = qd.q[k] / (zi - zj);
    jumps.push_back({M.tmg_left_face(e.a, e.b), M.tmg_left_face(e.b, e.a)});
    values.push_back(Sl2{f * (zi + zj) / 2.0, -f * zi * zj, f});
    scale = std::max(scale, values.back().norm());
  }
  double res = 0;
  auto phat = integrate_dual_one_form<Sl2>(static_cast<int>(M.faces.size()), jumps, values, Sl2{},
                                           detail::sl2_norm, &res);
  res /= std::max(scale, 1e-300);
  if (cycle_residual) *cycle_residual = res;
  require(res <= tol, ErrorCode::NotAQuadraticDifferential,
          "q does not satisfy the closedness conditions");
  return phat;
}

// Velocities read off the per-face matrices of the closed medial complex.
inline std::vector<cplx> velocity_from_phi_hat(const std::vector<Sl2>& phat,
                                               const std::vector<cplx>& z, const MedialComplex& M,
                                               double* side_mismatch = nullptr, double tol = 1e-9) {
  std::vector<cplx> zdot(M.medial_vertex_count());
  std::vector<char> seen(M.medial_vertex_count(), 0);
  double worst = 0, scale = 0;
  for (const auto& m : phat) scale = std::max(scale, m.norm());
  for (size_t f = 0; f < M.faces.size(); ++f) {
    for (int i : M.faces[f]) {
      cplx val = velocity_at(phat[f], z[i]);
      if (!seen[i]) {
        zdot[i] = val;
        seen[i] = 1;
      } else {
        worst = std::max(worst, std::abs(val - zdot[i]));
      }
    }
  }
  worst /= std::max(scale, 1e-300);
  if (side_mismatch) *side_mismatch = worst;
  require(worst <= tol, ErrorCode::SideMismatch, "face velocities disagree at a shared vertex");
  return zdot;
}

inline GeneralQD koebe_to_general(const KoebeQD& lam, const CirclePacking& P,
                                  const MedialComplex& M) {
  auto z = tangency_points(P);
  auto phi = phi_from_koebe_qd(lam, P);
  auto zdot = velocity_from_phi(phi, P.mesh, z);
  return general_qd_from_velocity(z, zdot, M);
}

inline KoebeQD general_to_koebe(const GeneralQD& qd, const CirclePacking& P,
                                const MedialComplex& M) {
  auto z = tangency_points(P);
  auto phat = phi_hat_from_general_qd(qd, z, M);
  auto zdot = velocity_from_phi_hat(phat, z, M);
  return koebe_qd_from_velocity(P.mesh, z, zdot);
}

}  // namespace cpmin
