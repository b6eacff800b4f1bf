#pragma once

// Fractional linear maps and their infinitesimal (trace-zero) counterparts.
// An InfMoebius is the matrix [[a, b], [c, -a]]; its vector field on C is
// z -> -c z^2 + 2 a z + b, the determinant form of the three-point lemma.

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "cpmin/packing.hpp"

namespace cpmin {

struct MoebiusMap {
  cplx a{1}, b{0}, c{0}, d{1};

  // Normalizes to det 1; sign fixed by Re(a+d) >= 0, ties broken by Im(a+d),
  // then by the first nonzero component.
  static MoebiusMap normalized(cplx a, cplx b, cplx c, cplx d) {
    cplx det = a * d - b * c;
    require(std::abs(det) > 0, ErrorCode::DegenerateQuadruple, "singular coefficient matrix");
    cplx s = std::sqrt(det);
    MoebiusMap T{a / s, b / s, c / s, d / s};
    cplx tr = T.a + T.d;
    bool flip;
    if (tr.real() != 0)
      flip = tr.real() < 0;
    else if (tr.imag() != 0)
      flip = tr.imag() < 0;
    else {
      cplx probe = (T.a != cplx(0)) ? T.a : (T.b != cplx(0) ? T.b : T.c);
      flip = probe.real() < 0 || (probe.real() == 0 && probe.imag() < 0);
    }
    if (flip) {
      T.a = -T.a;
      T.b = -T.b;
      T.c = -T.c;
      T.d = -T.d;
    }
    return T;
  }

  MoebiusMap inverse() const { return normalized(d, -b, -c, a); }
  MoebiusMap then(const MoebiusMap& S) const {  // z -> S(T(z))
    return normalized(S.a * a + S.b * c, S.a * b + S.b * d, S.c * a + S.d * c, S.c * b + S.d * d);
  }

  cplx apply(cplx z) const {
    cplx den = c * z + d;
    require(std::abs(den) > 0, ErrorCode::PoleHit, "evaluation at the pole");
    return (a * z + b) / den;
  }
  // dT_z(v) = v/(cz+d)^2
  cplx apply_derivative(cplx z, cplx v) const {
    cplx den = c * z + d;
    require(std::abs(den) > 0, ErrorCode::PoleHit, "derivative at the pole");
    return v / (den * den);
  }
};

struct InfMoebius {
  cplx a{0}, b{0}, c{0};

  InfMoebius operator+(const InfMoebius& o) const { return {a + o.a, b + o.b, c + o.c}; }
  InfMoebius operator-(const InfMoebius& o) const { return {a - o.a, b - o.b, c - o.c}; }
  InfMoebius operator-() const { return {-a, -b, -c}; }
  InfMoebius& operator+=(const InfMoebius& o) {
    a += o.a;
    b += o.b;
    c += o.c;
    return *this;
  }
  InfMoebius& operator-=(const InfMoebius& o) {
    a -= o.a;
    b -= o.b;
    c -= o.c;
    return *this;
  }
  friend InfMoebius operator*(double s, const InfMoebius& m) { return {s * m.a, s * m.b, s * m.c}; }
  friend InfMoebius operator*(cplx s, const InfMoebius& m) { return {s * m.a, s * m.b, s * m.c}; }
  double norm() const { return std::sqrt(std::norm(a) + std::norm(b) + std::norm(c)); }
};

// velocity of the infinitesimal action: det(Phi (z,1)^T, (z,1)^T)
inline cplx velocity_at(const InfMoebius& m, cplx z) { return -m.c * z * z + 2.0 * m.a * z + m.b; }

// Unique trace-zero matrix whose velocity interpolates (z_i, v_i); equivalently
// quadratic polynomial interpolation in z.
inline InfMoebius fit_inf_moebius(cplx z1, cplx z2, cplx z3, cplx v1, cplx v2, cplx v3) {
  require(z1 != z2 && z2 != z3 && z1 != z3, ErrorCode::CoincidentPoints,
          "interpolation points must be distinct");
  cplx d1 = (z1 - z2) * (z1 - z3), d2 = (z2 - z1) * (z2 - z3), d3 = (z3 - z1) * (z3 - z2);
  cplx A = v1 / d1 + v2 / d2 + v3 / d3;
  cplx B = -(v1 * (z2 + z3) / d1 + v2 * (z1 + z3) / d2 + v3 * (z1 + z2) / d3);
  cplx C = v1 * z2 * z3 / d1 + v2 * z1 * z3 / d2 + v3 * z1 * z2 / d3;
  return {B / 2.0, C, -A};
}

// Least-squares global generator for a sampled velocity field.
inline InfMoebius fit_global_inf_moebius(const std::vector<cplx>& z, const std::vector<cplx>& v) {
  require(z.size() == v.size() && z.size() >= 3, ErrorCode::CoincidentPoints,
          "need at least three samples");
  Eigen::MatrixXcd A(z.size(), 3);
  Eigen::VectorXcd rhs(z.size());
  for (size_t i = 0; i < z.size(); ++i) {
    A(i, 0) = 2.0 * z[i];
    A(i, 1) = 1.0;
    A(i, 2) = -z[i] * z[i];
    rhs(i) = v[i];
  }
  Eigen::Vector3cd x = A.colPivHouseholderQr().solve(rhs);
  return {x(0), x(1), x(2)};
}

// Image packing under T via three-point refits of every circle.
inline CirclePacking moebius_image_packing(const MoebiusMap& T, const CirclePacking& P) {
  CirclePacking Q;
  Q.mesh = P.mesh;
  Q.center.resize(P.center.size());
  Q.radius.resize(P.radius.size());
  for (int v = 0; v < P.mesh.vertex_count; ++v) {
    if (std::abs(T.c) > 0) {
      cplx pole = -T.d / T.c;
      double gap = std::abs(std::abs(pole - P.center[v]) - P.radius[v]);
      require(gap > 1e-12 * P.radius[v], ErrorCode::CircleThroughPole,
              "a circle passes through the pole of the map");
    }
    cplx p0 = T.apply(P.center[v] + P.radius[v]);
    cplx p1 = T.apply(P.center[v] + P.radius[v] * std::polar(1.0, 2 * M_PI / 3));
    cplx p2 = T.apply(P.center[v] + P.radius[v] * std::polar(1.0, 4 * M_PI / 3));
    auto [cen, rad] = circumcircle(p0, p1, p2);
    Q.center[v] = cen;
    Q.radius[v] = rad;
  }
  require(packing_positively_oriented(Q), ErrorCode::OrientationReversed,
          "image packing has a reversed face");
  return Q;
}

}  // namespace cpmin
