/* Copyright 2026 The pstnet Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pstnet {

using cxd = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

// Tolerances, stated once and reused everywhere.
namespace tol {
inline constexpr double kEigenvalue = 1e-8;   // eigenvalue matching
inline constexpr double kOrthogonality = 1e-9;
inline constexpr double kIntegerRound = 1e-6; // degree rounding
inline constexpr double kPhaseMatch = 1e-9;
inline constexpr double kCouplingImag = 1e-10;
inline constexpr double kSector = 1e-10;
inline constexpr double kStratum = 1e-12;
inline constexpr double kCommutator = 1e-10;
inline constexpr double kLeakage = 1e-8;
inline constexpr double kUnitarity = 1e-9;
inline constexpr double kFidelity = 1e-9;
}  // namespace tol

inline constexpr int kDefaultMaxOrder = 4096;
inline constexpr long long kDefaultFullSpaceCap = 8192;  // 2^13

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidParameter : Error { using Error::Error; };
struct MalformedTable : Error { using Error::Error; };
struct NotAGroup : Error { using Error::Error; };
struct SizeLimit : Error { using Error::Error; };
struct NoPstTarget : Error { using Error::Error; };
struct NoSingletonClass : Error { using Error::Error; };
struct SearchExhausted : Error { using Error::Error; };
struct GaugeInconsistency : Error { using Error::Error; };
struct DegeneracyFailure : Error { using Error::Error; };
struct NumericalFailure : Error { using Error::Error; };
struct IncompatiblePlans : Error { using Error::Error; };
struct InvalidState : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

// Fixed 12-significant-digit formatting for all numeric file output.
inline std::string fmt12(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::string fmt12(cxd v) {
  return "(" + fmt12(v.real()) + ", " + fmt12(v.imag()) + ")";
}

// Reduce an angle to [0, 2*pi).
inline double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

// Distance between two angles on the circle.
inline double angle_distance(double a, double b) {
  double d = wrap_angle(a - b);
  return std::min(d, kTwoPi - d);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace pstnet
