#include <catch2/catch_amalgamated.hpp>

#include "cpmin/mesh.hpp"
#include "cpmin/packing.hpp"

using namespace cpmin;
using Catch::Matchers::WithinAbs;

namespace {
TriangulatedDisk flower() {
  return build_disk({{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 5, 6}, {0, 6, 1}});
}
}  // namespace

TEST_CASE("flower with unit boundary radii") {
  auto P = solve_packing(flower(), 1.0);
  CHECK_THAT(P.radius[0], WithinAbs(1.0, 1e-10));
  CHECK(tangency_residual(P) < 1e-10);
  CHECK(packing_positively_oriented(P));
  // centers form the hand configuration up to a rigid motion: all spokes have
  // length 2 and consecutive spokes subtend 60 degrees
  for (int k = 1; k <= 6; ++k) {
    CHECK_THAT(std::abs(P.center[k] - P.center[0]), WithinAbs(2.0, 1e-10));
    cplx r = (P.center[k % 6 + 1] - P.center[0]) / (P.center[k] - P.center[0]);
    CHECK_THAT(r.real(), WithinAbs(0.5, 1e-10));
    CHECK_THAT(r.imag(), WithinAbs(std::sqrt(3.0) / 2, 1e-10));
  }
  // layout normalization
  int b0 = P.mesh.boundary_cycle.front();
  CHECK_THAT(std::abs(P.center[b0]), WithinAbs(0.0, 1e-12));
}

TEST_CASE("scaling covariance") {
  auto P1 = solve_packing(flower(), 1.0);
  auto P2 = solve_packing(flower(), 2.0);
  CHECK_THAT(P2.radius[0], WithinAbs(2.0, 1e-9));
  for (int v = 0; v < 7; ++v) {
    CHECK_THAT(P2.radius[v], WithinAbs(2 * P1.radius[v], 1e-9));
    CHECK_THAT(std::abs(P2.center[v] - 2.0 * P1.center[v]), WithinAbs(0.0, 1e-9));
  }
}

TEST_CASE("hex lattice stays flat") {
  auto P = solve_packing(hex_disk(2), 1.0);
  for (double r : P.radius) CHECK_THAT(r, WithinAbs(1.0, 1e-10));
  CHECK(tangency_residual(P) < 1e-10);
}

TEST_CASE("randomized boundary radii still satisfy the angle conditions") {
  auto G = hex_disk(2);
  Rng rng(11);
  std::map<int, double> br;
  for (int v = 0; v < G.vertex_count; ++v)
    if (G.vertex_is_boundary[v]) br[v] = rng.uniform(0.5, 2.0);
  auto P = solve_packing(G, br);
  CHECK(tangency_residual(P) < 1e-10);
  CHECK(packing_positively_oriented(P));
  for (int u : G.interior_vertices) {
    double s = 0;
    const auto& nb = G.vertex_neighbors[u];
    for (size_t i = 0; i < nb.size(); ++i) {
      int a = nb[i], b = nb[(i + 1) % nb.size()];
      s += 2 * std::asin(std::sqrt(P.radius[a] * P.radius[b] /
                                   ((P.radius[u] + P.radius[a]) * (P.radius[u] + P.radius[b]))));
    }
    CHECK_THAT(s, WithinAbs(2 * M_PI, 1e-11));
  }
}

TEST_CASE("invalid boundary data is rejected") {
  auto G = flower();
  CHECK_THROWS_MATCHES(solve_packing(G, -1.0), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::InvalidBoundaryData;
                       }));
  std::map<int, double> br{{1, 1.0}};  // missing radii
  CHECK_THROWS_AS(solve_packing(G, br), Error);
  std::map<int, double> br2;
  for (int v = 1; v <= 6; ++v) br2[v] = 1.0;
  br2[0] = 1.0;  // interior vertex
  CHECK_THROWS_AS(solve_packing(G, br2), Error);
}

TEST_CASE("tangency points") {
  SECTION("equal circles touch at the midpoint") {
    auto G = build_disk({{0, 1, 2}});
    CirclePacking P;
    P.mesh = G;
    P.center = {cplx(0, 0), cplx(2, 0), cplx(1, std::sqrt(3.0))};
    P.radius = {1, 1, 1};
    auto z = tangency_points(P);
    CHECK_THAT(std::abs(z[G.edge_index(0, 1)] - cplx(1, 0)), WithinAbs(0.0, 1e-15));
  }
  SECTION("weighted point for unequal radii") {
    auto G = build_disk({{0, 1, 2}});
    CirclePacking P;
    P.mesh = G;
    P.center = {cplx(0, 0), cplx(3, 0), cplx(0, 2.3)};
    P.radius = {1, 2, 1.3};
    auto z = tangency_points(P);
    CHECK_THAT(std::abs(z[G.edge_index(0, 1)] - cplx(1, 0)), WithinAbs(0.0, 1e-15));
  }
  SECTION("flower spokes and ring") {
    auto P = solve_packing(flower(), 1.0);
    auto z = tangency_points(P);
    for (int k = 1; k <= 6; ++k) {
      CHECK_THAT(std::abs(z[P.mesh.edge_index(0, k)] - P.center[0]), WithinAbs(1.0, 1e-10));
      int k2 = k % 6 + 1;
      CHECK_THAT(std::abs(z[P.mesh.edge_index(k, k2)] - P.center[0]),
                 WithinAbs(std::sqrt(3.0), 1e-10));
    }
  }
}

TEST_CASE("stereographic projection") {
  CHECK_THAT((stereographic(cplx(0, 0)) - Vec3(0, 0, -1)).norm(), WithinAbs(0.0, 1e-15));
  CHECK_THAT((stereographic(cplx(1, 0)) - Vec3(1, 0, 0)).norm(), WithinAbs(0.0, 1e-15));
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    cplx z = rng.complex_in_disk(3.0);
    CHECK_THAT(stereographic(z).norm(), WithinAbs(1.0, 1e-14));
  }
}

TEST_CASE("stereographic differential") {
  CHECK_THAT((d_sigma(cplx(0, 0), cplx(1, 0)) - Vec3(2, 0, 0)).norm(), WithinAbs(0.0, 1e-14));
  CHECK_THROWS_MATCHES(d_sigma(cplx(1, 1), cplx(0, 0)), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::ZeroTangent;
                       }));
  Rng rng(7);
  for (int t = 0; t < 10; ++t) {
    cplx z = rng.complex_in_disk(2.0), v = rng.complex_in_disk(1.0) + cplx(0.1, 0.1);
    double eps = 1e-6;
    Vec3 fd = (stereographic(z + eps * v) - stereographic(z - eps * v)) / (2 * eps);
    CHECK_THAT((d_sigma(z, v) - fd).norm(), WithinAbs(0.0, 1e-8));
  }
}

TEST_CASE("circle lifts") {
  SECTION("unit circle lifts to a plane through the center") {
    CHECK_THROWS_MATCHES(lift_circle(cplx(0, 0), 1.0), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.code() == ErrorCode::DegeneratePlane;
                         }));
  }
  SECTION("small circle at the origin") {
    auto pc = lift_circle(cplx(0, 0), 0.5);
    CHECK_THAT((pc.n - Vec3(0, 0, -1)).norm(), WithinAbs(0.0, 1e-14));
    CHECK_THAT(pc.h, WithinAbs(0.6, 1e-14));
  }
  SECTION("large circle at the origin") {
    auto pc = lift_circle(cplx(0, 0), 2.0);
    CHECK_THAT((pc.n - Vec3(0, 0, 1)).norm(), WithinAbs(0.0, 1e-14));
    CHECK_THAT(pc.h, WithinAbs(0.6, 1e-14));
  }
  SECTION("all lifted points satisfy the plane equation") {
    Rng rng(13);
    for (int t = 0; t < 10; ++t) {
      cplx c = rng.complex_in_disk(0.3);
      double r = rng.uniform(0.05, 0.15);
      auto pc = lift_circle(c, r);
      for (int k = 0; k < 12; ++k) {
        Vec3 x = stereographic(c + r * std::polar(1.0, 2 * M_PI * k / 12));
        CHECK_THAT(pc.n.dot(x), WithinAbs(pc.h, 1e-12));
      }
    }
  }
}

TEST_CASE("circle poles") {
  auto pc = lift_circle(cplx(0, 0), 0.5);
  Vec3 pole = circle_pole(pc);
  CHECK_THAT((pole - Vec3(0, 0, -5.0 / 3)).norm(), WithinAbs(0.0, 1e-13));
  for (int k = 0; k < 8; ++k) {
    Vec3 x = stereographic(0.5 * std::polar(1.0, 2 * M_PI * k / 8));
    CHECK_THAT(pole.dot(x), WithinAbs(1.0, 1e-12));
  }
  CHECK_THROWS_AS(circle_pole(PlaneCircle{Vec3(0, 0, 1), 0.0}), Error);
}

TEST_CASE("pole of the dual circle of three tangent unit circles") {
  double s = 0.1;
  cplx c0(0, 0), c1(2, 0), c2(1, std::sqrt(3.0));
  cplx t01 = (c0 + c1) / 2.0, t12 = (c1 + c2) / 2.0, t20 = (c2 + c0) / 2.0;
  auto [cen, rad] = circumcircle(s * t01, s * t12, s * t20);
  auto pc = lift_circle(cen, rad);
  Vec3 pole = circle_pole(pc);
  double d0 = (pole - stereographic(s * t01)).norm();
  double d1 = (pole - stereographic(s * t12)).norm();
  double d2 = (pole - stereographic(s * t20)).norm();
  CHECK_THAT(d0, WithinAbs(d1, 1e-12));
  CHECK_THAT(d1, WithinAbs(d2, 1e-12));
}

TEST_CASE("koebe polyhedra of the flower") {
  auto P0 = solve_packing(flower(), 1.0);
  auto [P, L] = prepare_for_sphere(P0);
  auto K = koebe_polyhedra(P, L);
  auto z = tangency_points(P);
  const auto& G = P.mesh;

  for (int e : G.interior_edges) {
    auto [u, v] = G.edges[e];
    Vec3 s = stereographic(z[e]);
    CHECK_THAT(K.n_c[G.left_face(u, v)].dot(s), WithinAbs(1.0, 1e-10));
    CHECK_THAT(K.n_c[G.left_face(v, u)].dot(s), WithinAbs(1.0, 1e-10));
  }
  for (int e = 0; e < G.edge_count(); ++e) {
    auto [u, v] = G.edges[e];
    Vec3 s = stereographic(z[e]);
    CHECK_THAT(K.n_cstar[u].dot(s), WithinAbs(1.0, 1e-10));
    CHECK_THAT(K.n_cstar[v].dot(s), WithinAbs(1.0, 1e-10));
    // the edge segment touches the unit sphere
    Vec3 a = K.n_cstar[u], d = K.n_cstar[v] - K.n_cstar[u];
    double t = -a.dot(d) / d.squaredNorm();
    CHECK_THAT((a + t * d).norm(), WithinAbs(1.0, 1e-9));
  }
  // vertex of one polyhedron lies on the face plane of the other
  for (int fi = 0; fi < G.face_count(); ++fi)
    for (int u : G.faces[fi]) CHECK_THAT(K.n_c[fi].dot(K.n_cstar[u]), WithinAbs(1.0, 1e-10));
}

TEST_CASE("normalization keeps lifts well clear of degeneracy") {
  auto G = hex_disk(2);
  Rng rng(23);
  std::map<int, double> br;
  for (int v = 0; v < G.vertex_count; ++v)
    if (G.vertex_is_boundary[v]) br[v] = rng.uniform(0.5, 2.0);
  auto [P, L] = prepare_for_sphere(solve_packing(G, br));
  for (const auto& pc : L.vertex_circle) CHECK(pc.h > 1e-3);
  for (const auto& pc : L.face_circle) CHECK(pc.h > 1e-3);
  auto z = tangency_points(P);
  for (int e = 0; e < P.mesh.edge_count(); ++e) {
    auto [u, v] = P.mesh.edges[e];
    Vec3 s = stereographic(z[e]);
    CHECK_THAT(L.vertex_circle[u].n.dot(s), WithinAbs(L.vertex_circle[u].h, 1e-12));
    CHECK_THAT(L.vertex_circle[v].n.dot(s), WithinAbs(L.vertex_circle[v].h, 1e-12));
  }
}

TEST_CASE("solver failure reports NoConvergence") {
  SolveOptions opt;
  opt.max_iter = 2;
  opt.tol = 1e-15;
  CHECK_THROWS_MATCHES(solve_packing(hex_disk(2), 3.7, opt), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::NoConvergence;
                       }));
}
