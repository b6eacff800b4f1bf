#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace cpmin {

using cplx = std::complex<double>;

enum class ErrorCode {
  NotADisk,
  NonManifoldEdge,
  OrientationConflict,
  NotADiagonal,
  DisconnectedDual,
  NoConvergence,
  InvalidBoundaryData,
  ZeroTangent,
  DegeneratePlane,
  PoleHit,
  CoincidentPoints,
  CircleThroughPole,
  OrientationReversed,
  DegenerateQuadruple,
  InconsistentRotation,
  BipartiteAmbiguity,
  NotAQuadraticDifferential,
  SideMismatch,
  NonRealEigenvalue,
  AntipodalNormals,
  NotHarmonic,
  FaceMismatch,
  DegenerateTriangle,
  FoldedEdge,
  DegenerateFace,
  ZeroEdge,
  Io,
};

inline const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NotADisk: return "NotADisk";
    case ErrorCode::NonManifoldEdge: return "NonManifoldEdge";
    case ErrorCode::OrientationConflict: return "OrientationConflict";
    case ErrorCode::NotADiagonal: return "NotADiagonal";
    case ErrorCode::DisconnectedDual: return "DisconnectedDual";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::InvalidBoundaryData: return "InvalidBoundaryData";
    case ErrorCode::ZeroTangent: return "ZeroTangent";
    case ErrorCode::DegeneratePlane: return "DegeneratePlane";
    case ErrorCode::PoleHit: return "PoleHit";
    case ErrorCode::CoincidentPoints: return "CoincidentPoints";
    case ErrorCode::CircleThroughPole: return "CircleThroughPole";
    case ErrorCode::OrientationReversed: return "OrientationReversed";
    case ErrorCode::DegenerateQuadruple: return "DegenerateQuadruple";
    case ErrorCode::InconsistentRotation: return "InconsistentRotation";
    case ErrorCode::BipartiteAmbiguity: return "BipartiteAmbiguity";
    case ErrorCode::NotAQuadraticDifferential: return "NotAQuadraticDifferential";
    case ErrorCode::SideMismatch: return "SideMismatch";
    case ErrorCode::NonRealEigenvalue: return "NonRealEigenvalue";
    case ErrorCode::AntipodalNormals: return "AntipodalNormals";
    case ErrorCode::NotHarmonic: return "NotHarmonic";
    case ErrorCode::FaceMismatch: return "FaceMismatch";
    case ErrorCode::DegenerateTriangle: return "DegenerateTriangle";
    case ErrorCode::FoldedEdge: return "FoldedEdge";
    case ErrorCode::DegenerateFace: return "DegenerateFace";
    case ErrorCode::ZeroEdge: return "ZeroEdge";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) fail(code, what);
}

// FNV-1a, used for provenance hashes and triangulation fingerprints.
inline std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 0xcbf29ce484222325ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 0xcbf29ce484222325ull) {
  return fnv1a(s.data(), s.size(), h);
}

// Deterministic RNG kernel (splitmix64). Distributions from the standard library
// are implementation-defined, so uniform doubles are derived by hand.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  cplx complex_in_disk(double r = 1.0) {
    while (true) {
      double x = uniform(-1, 1), y = uniform(-1, 1);
      if (x * x + y * y <= 1.0) return cplx(r * x, r * y);
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace cpmin
