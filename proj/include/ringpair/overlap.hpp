// Copyright 2026 The ringpair Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Longitudinal overlap of the four interacting field envelopes,
//   J_ch = int_0^L conj(f1) conj(f2) f3 f4 exp(i dk z) dz,  J = sum_ch J_ch,
// with dk = k(w1) + k(w2) - k(w3) - k(w4). Envelopes inside the coupler are
// driven by the boundary amplitudes (resonator 1, resonator 2) at the
// coupler entrance. A ring is a single channel carrying resonator 1.

#include <array>
#include <complex>
#include <functional>
#include <variant>

#include <Eigen/Dense>

#include "ringpair/coupler.hpp"
#include "ringpair/network.hpp"
#include "ringpair/numerics.hpp"

namespace ringpair {

enum class StructureKind { kRing, kDirectionalCoupler, kMachZehnder };

const char* to_string(StructureKind kind);

struct RingGeometry {
  double length{};
};

using OverlapGeometry = std::variant<RingGeometry, DirectionalCoupler, MachZehnder>;

// Throws UnsupportedError for a generic coupler (no interior field model).
OverlapGeometry overlap_geometry(const StructureSpec& spec);
StructureKind kind_of(const OverlapGeometry& geometry);
double interaction_length(const OverlapGeometry& geometry);

// Boundary amplitudes (resonator 1, resonator 2) for w1..w4.
struct BoundaryAmplitudes {
  std::array<Vector2c<double>, 4> f;
};

// Pump (w3, w4) in resonator 1, pair (w1, w2) in resonator 2, unit
// magnitude. For a ring every frequency sits in resonator 1.
BoundaryAmplitudes ideal_amplitudes(StructureKind kind, std::complex<double> pair1 = 1.0,
                                    std::complex<double> pair2 = 1.0, std::complex<double> pump3 = 1.0,
                                    std::complex<double> pump4 = 1.0);

using EnvelopeQuad = std::array<std::complex<double>, 4>;

std::complex<double> j_channel(const std::function<EnvelopeQuad(double)>& envelopes, double delta_k, double length,
                               const numerics::QuadratureOptions& opt = {});

std::complex<double> j_total(const OverlapGeometry& geometry, const BoundaryAmplitudes& amplitudes, double delta_k,
                             const numerics::QuadratureOptions& opt = {});

double phase_mismatch(const Waveguide& waveguide, double w1, double w2, double w3, double w4);

// Circulating amplitudes from the linear solve: w1, w2 injected at Add, w3,
// w4 at In (all at In for a ring).
BoundaryAmplitudes solved_amplitudes(const StructureSpec& spec, double w1, double w2, double w3, double w4);

std::complex<double> j_total(const StructureSpec& spec, double w1, double w2, double w3, double w4,
                             const numerics::QuadratureOptions& opt = {});

// Closed forms at ideal unit amplitudes: ring L exp(i dk L/2) sinc(dk L/2),
// DC -(L/4)[1 - sinc(4 kappa L)], MZI -2 s^2 k^2 L (s, k of the splitter
// the fields meet first; -L/2 at 50:50). DC and MZI accept dk = 0 only.
std::complex<double> j_spatial_analytic(const OverlapGeometry& geometry, double delta_k = 0.0);

// Ideal-amplitude overlap at any dk, in closed form for all three kinds.
std::complex<double> ideal_overlap(const OverlapGeometry& geometry, double delta_k);

// J is multilinear in the boundary amplitudes:
//   J = sum_abcd conj(u1_a) conj(u2_b) u3_c u4_d T_abcd(dk).
// The tensor is integrated once per dk and reused.
class OverlapKernel {
 public:
  OverlapKernel(const OverlapGeometry& geometry, double delta_k, const numerics::QuadratureOptions& opt = {});

  std::complex<double> contract(const BoundaryAmplitudes& amplitudes) const;
  const Eigen::Matrix<std::complex<double>, 16, 1>& tensor() const { return t_; }
  double delta_k() const { return delta_k_; }

 private:
  Eigen::Matrix<std::complex<double>, 16, 1> t_;
  double delta_k_;
};

}  // namespace ringpair
