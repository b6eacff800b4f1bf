#include <catch2/catch_amalgamated.hpp>

#include "cpmin/invariants.hpp"
#include "cpmin/moebius.hpp"

using namespace cpmin;
using Catch::Matchers::WithinAbs;

TEST_CASE("fractional linear action") {
  auto I = MoebiusMap{};
  CHECK(std::abs(I.apply(cplx(3, -2)) - cplx(3, -2)) == 0.0);

  auto Tr = MoebiusMap::normalized(1, 1, 0, 1);
  CHECK_THAT(std::abs(Tr.apply(cplx(2, 0)) - cplx(3, 0)), WithinAbs(0.0, 1e-15));
  CHECK_THAT(std::abs(Tr.apply_derivative(cplx(2, 0), cplx(1, 1)) - cplx(1, 1)),
             WithinAbs(0.0, 1e-15));

  // inversion-like map (0, i, i, 0): z -> 1/z, derivative v/(iz)^2
  auto Inv = MoebiusMap::normalized(0, cplx(0, 1), cplx(0, 1), 0);
  CHECK_THAT(std::abs(Inv.apply(cplx(2, 0)) - cplx(0.5, 0)), WithinAbs(0.0, 1e-15));
  CHECK_THAT(std::abs(Inv.apply_derivative(cplx(2, 0), cplx(1, 0)) - cplx(-0.25, 0)),
             WithinAbs(0.0, 1e-15));
  CHECK_THROWS_MATCHES(Inv.apply(cplx(0, 0)), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::PoleHit;
                       }));
}

TEST_CASE("normalization fixes determinant and sign") {
  auto T = MoebiusMap::normalized(2, 0, 0, 2);
  CHECK_THAT(std::abs(T.a * T.d - T.b * T.c - cplx(1, 0)), WithinAbs(0.0, 1e-14));
  CHECK(T.a.real() + T.d.real() >= 0);
  auto S = MoebiusMap::normalized(-2, 0, 0, -2);
  CHECK(S.a.real() + S.d.real() >= 0);
  // composition and inverse stay normalized
  auto R = MoebiusMap::normalized(1, cplx(0, 2), cplx(0.5, 0), 1);
  auto RI = R.then(R.inverse());
  CHECK_THAT(std::abs(RI.a - cplx(1, 0)) + std::abs(RI.b) + std::abs(RI.c) +
                 std::abs(RI.d - cplx(1, 0)),
             WithinAbs(0.0, 1e-12));
}

TEST_CASE("apply_derivative matches finite differences") {
  auto T = MoebiusMap::normalized(cplx(1.2, 0.3), cplx(0, 1), cplx(0.2, -0.1), 1);
  Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    cplx z = rng.complex_in_disk(1.0), v = rng.complex_in_disk(1.0) + cplx(0.2, 0);
    double eps = 1e-6;
    cplx fd = (T.apply(z + eps * v) - T.apply(z - eps * v)) / (2 * eps);
    CHECK_THAT(std::abs(T.apply_derivative(z, v) - fd), WithinAbs(0.0, 1e-8));
  }
}

TEST_CASE("three-point infinitesimal fits") {
  // translation field
  auto F1 = fit_inf_moebius(0, 1, 2, 1, 1, 1);
  CHECK_THAT(std::abs(F1.a) + std::abs(F1.b - cplx(1, 0)) + std::abs(F1.c), WithinAbs(0.0, 1e-14));
  // scaling field v = z
  auto F2 = fit_inf_moebius(1, 2, 3, 1, 2, 3);
  CHECK_THAT(std::abs(F2.a - cplx(0.5, 0)) + std::abs(F2.b) + std::abs(F2.c),
             WithinAbs(0.0, 1e-14));
  // rotation field v = i z on (0, 1, i)
  auto F3 = fit_inf_moebius(0, 1, cplx(0, 1), 0, cplx(0, 1), cplx(-1, 0));
  CHECK_THAT(std::abs(F3.a - cplx(0, 0.5)) + std::abs(F3.b) + std::abs(F3.c),
             WithinAbs(0.0, 1e-14));
  CHECK_THROWS_MATCHES(fit_inf_moebius(1, 1, 2, 0, 0, 0), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::CoincidentPoints;
                       }));
}

TEST_CASE("velocity round trip and linearity") {
  CHECK(std::abs(velocity_at(InfMoebius{0, 1, 0}, cplx(5, 5)) - cplx(1, 0)) == 0.0);
  CHECK_THAT(std::abs(velocity_at(InfMoebius{0.5, 0, 0}, cplx(2, 1)) - cplx(2, 1)),
             WithinAbs(0.0, 1e-15));
  Rng rng(9);
  for (int t = 0; t < 10; ++t) {
    cplx z1 = rng.complex_in_disk(2.0), z2 = z1 + cplx(1, 0.3), z3 = z1 + cplx(-0.4, 1.1);
    cplx v1 = rng.complex_in_disk(1.0), v2 = rng.complex_in_disk(1.0), v3 = rng.complex_in_disk(1.0);
    auto F = fit_inf_moebius(z1, z2, z3, v1, v2, v3);
    CHECK_THAT(std::abs(velocity_at(F, z1) - v1), WithinAbs(0.0, 1e-12));
    CHECK_THAT(std::abs(velocity_at(F, z2) - v2), WithinAbs(0.0, 1e-12));
    CHECK_THAT(std::abs(velocity_at(F, z3) - v3), WithinAbs(0.0, 1e-12));
    // linearity in the velocities
    auto F2 = fit_inf_moebius(z1, z2, z3, 2.0 * v1, 2.0 * v2, 2.0 * v3);
    CHECK_THAT((F2 - 2.0 * F).norm(), WithinAbs(0.0, 1e-12));
  }
}

TEST_CASE("fit reproduces the generator of a one-parameter family") {
  // family T_t = exp(t Phi) acting on points; compare the fitted generator with
  // finite differences of the family at t = 0
  InfMoebius gen{cplx(0.3, 0.2), cplx(-0.1, 0.5), cplx(0.05, -0.4)};
  double t = 1e-6;
  // first-order approximation of exp(t gen)
  auto Tt = MoebiusMap::normalized(1.0 + t * gen.a, t * gen.b, t * gen.c, 1.0 - t * gen.a);
  cplx z1(0.2, 0.1), z2(1.1, -0.3), z3(-0.7, 0.8);
  auto fd = [&](cplx z) { return (Tt.apply(z) - z) / t; };
  auto F = fit_inf_moebius(z1, z2, z3, fd(z1), fd(z2), fd(z3));
  CHECK_THAT((F - gen).norm(), WithinAbs(0.0, 1e-5));
}

TEST_CASE("global least-squares fit recovers an exact field") {
  InfMoebius gen{cplx(0.1, -0.2), cplx(0.4, 0.3), cplx(-0.2, 0.1)};
  Rng rng(17);
  std::vector<cplx> zs, vs;
  for (int t = 0; t < 12; ++t) {
    cplx z = rng.complex_in_disk(2.0);
    zs.push_back(z);
    vs.push_back(velocity_at(gen, z));
  }
  auto F = fit_global_inf_moebius(zs, vs);
  CHECK_THAT((F - gen).norm(), WithinAbs(0.0, 1e-12));
}

namespace {
CirclePacking flower_packing() {
  auto G = build_disk({{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 5, 6}, {0, 6, 1}});
  return solve_packing(G, 1.0);
}
}  // namespace

TEST_CASE("moebius image packings") {
  auto P = flower_packing();

  SECTION("identity and translation") {
    auto Q = moebius_image_packing(MoebiusMap{}, P);
    for (int v = 0; v < 7; ++v) {
      CHECK_THAT(std::abs(Q.center[v] - P.center[v]), WithinAbs(0.0, 1e-12));
      CHECK_THAT(Q.radius[v], WithinAbs(P.radius[v], 1e-12));
    }
    auto T = MoebiusMap::normalized(1, cplx(1, 1), 0, 1);
    auto Q2 = moebius_image_packing(T, P);
    for (int v = 0; v < 7; ++v) {
      CHECK_THAT(std::abs(Q2.center[v] - P.center[v] - cplx(1, 1)), WithinAbs(0.0, 1e-12));
      CHECK_THAT(Q2.radius[v], WithinAbs(P.radius[v], 1e-12));
    }
  }

  SECTION("inversion of an offset copy preserves tangency") {
    // move the packing away from the pole of z -> 1/z first
    CirclePacking Ps = P;
    for (int v = 0; v < 7; ++v) {
      Ps.center[v] = P.center[v] * 0.125 + cplx(0.5, 0.25);
      Ps.radius[v] = P.radius[v] * 0.125;
    }
    auto Inv = MoebiusMap::normalized(0, cplx(0, 1), cplx(0, 1), 0);
    auto Q = moebius_image_packing(Inv, Ps);
    CHECK(tangency_residual(Q) < 1e-10);
    CHECK(packing_positively_oriented(Q));
  }

  SECTION("pole inside a circle is rejected") {
    CirclePacking Ps = P;  // center circle sits at the origin after recentering
    cplx c0 = Ps.center[0];
    for (int v = 0; v < 7; ++v) Ps.center[v] = (Ps.center[v] - c0) * 0.125;
    for (int v = 0; v < 7; ++v) Ps.radius[v] *= 0.125;
    auto Inv = MoebiusMap::normalized(0, cplx(0, 1), cplx(0, 1), 0);
    CHECK_THROWS_MATCHES(moebius_image_packing(Inv, Ps), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.code() == ErrorCode::OrientationReversed ||
                                  e.code() == ErrorCode::CircleThroughPole;
                         }));
  }

  SECTION("circle through the pole is rejected") {
    CirclePacking Ps = P;
    cplx c0 = Ps.center[0];
    for (int v = 0; v < 7; ++v) Ps.center[v] -= c0 + cplx(Ps.radius[0], 0);
    // circle 0 now passes through the origin = pole of z -> 1/z
    auto Inv = MoebiusMap::normalized(0, cplx(0, 1), cplx(0, 1), 0);
    CHECK_THROWS_MATCHES(moebius_image_packing(Inv, Ps), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.code() == ErrorCode::CircleThroughPole;
                         }));
  }

  SECTION("tangency residual survives generic maps") {
    CirclePacking Ps = P;
    for (int v = 0; v < 7; ++v) {
      Ps.center[v] = P.center[v] * 0.125 + cplx(0.4, 0.3);
      Ps.radius[v] = P.radius[v] * 0.125;
    }
    auto T = MoebiusMap::normalized(cplx(1.1, 0.2), cplx(0.1, -0.3), cplx(0.15, 0.05), 1);
    auto Q = moebius_image_packing(T, Ps);
    CHECK(tangency_residual(Q) < 1e-10);
  }
}
