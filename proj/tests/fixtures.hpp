#pragma once

// Shared test fixtures and small oracles.

#include <map>

#include "cpmin/cpmin.hpp"

namespace cpmin::testing {

inline TriangulatedDisk flower_disk() {
  return build_disk({{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 5, 6}, {0, 6, 1}});
}

inline CirclePacking flower_packing() { return solve_packing(flower_disk(), 1.0); }

inline CirclePacking random_hex2_packing(std::uint64_t seed, double lo = 0.5, double hi = 2.0) {
  auto G = hex_disk(2);
  Rng rng(seed);
  std::map<int, double> br;
  for (int v = 0; v < G.vertex_count; ++v)
    if (G.vertex_is_boundary[v]) br[v] = rng.uniform(lo, hi);
  return solve_packing(G, br);
}

// a Moebius map that keeps the given packing comfortably away from its pole
inline MoebiusMap safe_inversion_for(const CirclePacking& P) {
  double extent = 0;
  for (int v = 0; v < P.mesh.vertex_count; ++v)
    extent = std::max(extent, std::abs(P.center[v]) + P.radius[v]);
  // translate far, invert, i.e. pole far outside the packing
  double off = 4 * extent + 1;
  return MoebiusMap::normalized(cplx(0.9, 0.1), cplx(0.2, -0.05), cplx(1.0 / off, 0), 1);
}

// shrink + shift a packing into generic position inside the unit disk
inline CirclePacking shrink_into_unit_disk(const CirclePacking& P, cplx shift = cplx(0.5, 0.25)) {
  CirclePacking Q = P;
  double extent = 0;
  cplx cen(0, 0);
  for (int v = 0; v < P.mesh.vertex_count; ++v) cen += P.center[v];
  cen /= static_cast<double>(P.mesh.vertex_count);
  for (int v = 0; v < P.mesh.vertex_count; ++v)
    extent = std::max(extent, std::abs(P.center[v] - cen) + P.radius[v]);
  double s = 0.125 / extent;
  for (int v = 0; v < P.mesh.vertex_count; ++v) {
    Q.center[v] = s * (P.center[v] - cen) + shift;
    Q.radius[v] = s * P.radius[v];
  }
  return Q;
}

}  // namespace cpmin::testing
