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

#include "ringpair/overlap.hpp"

#include <cmath>
#include <stdexcept>

#include "ringpair/errors.hpp"

namespace ringpair {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

// int_0^L exp(i q z) dz
cd phase_integral(double q, double length) {
  return length * std::polar(1.0, 0.5 * q * length) * sinc(0.5 * q * length);
}

// Row vectors mapping the boundary pair onto each channel envelope at z.
struct ChannelMaps {
  int channels = 1;
  std::array<Eigen::Matrix<cd, 1, 2>, 2> row;
};

ChannelMaps channel_maps(const OverlapGeometry& geometry, double z) {
  ChannelMaps m;
  if (std::holds_alternative<RingGeometry>(geometry)) {
    m.row[0] << 1.0, 0.0;
    return m;
  }
  m.channels = 2;
  if (const auto* dc = std::get_if<DirectionalCoupler>(&geometry)) {
    const double c = std::cos(dc->kappa * z), s = std::sin(dc->kappa * z);
    m.row[0] << c, -kI * s;
    m.row[1] << -kI * s, c;
    return m;
  }
  const auto& mzi = std::get<MachZehnder>(geometry);
  const double s = mzi.sigma_dx, k = cross_from_self(s);
  const cd e = std::polar(1.0, mzi.delta_phi);
  m.row[0] << s, kI * k;
  m.row[1] << kI * k * e, s * e;
  return m;
}

}  // namespace

const char* to_string(StructureKind kind) {
  switch (kind) {
    case StructureKind::kRing: return "ring";
    case StructureKind::kDirectionalCoupler: return "dc";
    case StructureKind::kMachZehnder: return "mzi";
  }
  return "?";
}

OverlapGeometry overlap_geometry(const StructureSpec& spec) {
  if (const auto* ring = std::get_if<SingleRing>(&spec.kind)) return RingGeometry{ring->L};
  const auto& coupler = std::get<DoubleRacetrack>(spec.kind).coupler;
  if (const auto* dc = std::get_if<DirectionalCoupler>(&coupler)) return *dc;
  if (const auto* mzi = std::get_if<MachZehnder>(&coupler)) return *mzi;
  throw UnsupportedError("nonlinear overlap needs a directional or Mach-Zehnder coupler; a generic matrix has no "
                         "interior field model");
}

StructureKind kind_of(const OverlapGeometry& geometry) {
  if (std::holds_alternative<RingGeometry>(geometry)) return StructureKind::kRing;
  if (std::holds_alternative<DirectionalCoupler>(geometry)) return StructureKind::kDirectionalCoupler;
  return StructureKind::kMachZehnder;
}

double interaction_length(const OverlapGeometry& geometry) {
  return std::visit([](const auto& g) { return g.length; }, geometry);
}

BoundaryAmplitudes ideal_amplitudes(StructureKind kind, cd pair1, cd pair2, cd pump3, cd pump4) {
  BoundaryAmplitudes b;
  const bool ring = kind == StructureKind::kRing;
  b.f[0] = ring ? Vector2c<double>(pair1, 0.0) : Vector2c<double>(0.0, pair1);
  b.f[1] = ring ? Vector2c<double>(pair2, 0.0) : Vector2c<double>(0.0, pair2);
  b.f[2] = Vector2c<double>(pump3, 0.0);
  b.f[3] = Vector2c<double>(pump4, 0.0);
  return b;
}

cd j_channel(const std::function<EnvelopeQuad(double)>& envelopes, double delta_k, double length,
             const numerics::QuadratureOptions& opt) {
  if (!(length > 0)) throw std::invalid_argument("j_channel: length must be positive");
  auto integrand = [&](double z) {
    const EnvelopeQuad f = envelopes(z);
    return std::conj(f[0]) * std::conj(f[1]) * f[2] * f[3] * std::polar(1.0, delta_k * z);
  };
  return numerics::integrate_adaptive(integrand, 0.0, length, opt).value;
}

cd j_total(const OverlapGeometry& geometry, const BoundaryAmplitudes& amplitudes, double delta_k,
           const numerics::QuadratureOptions& opt) {
  const double length = interaction_length(geometry);
  const int channels = kind_of(geometry) == StructureKind::kRing ? 1 : 2;
  cd total = 0.0;
  for (int ch = 0; ch < channels; ++ch) {
    auto envelopes = [&](double z) {
      const ChannelMaps m = channel_maps(geometry, z);
      EnvelopeQuad f;
      for (int j = 0; j < 4; ++j) f[j] = m.row[ch] * amplitudes.f[j];
      return f;
    };
    total += j_channel(envelopes, delta_k, length, opt);
  }
  return total;
}

double phase_mismatch(const Waveguide& waveguide, double w1, double w2, double w3, double w4) {
  const double w0 = waveguide.omega0;
  // Differences relative to omega0 avoid cancelling four large k values.
  auto dk = [&](double w) { return (w - w0) / waveguide.v_g + 0.5 * waveguide.beta2 * (w - w0) * (w - w0); };
  for (double w : {w1, w2, w3, w4})
    if (!(w > 0)) throw std::domain_error("phase_mismatch: frequencies must be positive");
  return dk(w1) + dk(w2) - dk(w3) - dk(w4);
}

BoundaryAmplitudes solved_amplitudes(const StructureSpec& spec, double w1, double w2, double w3, double w4) {
  const Port pair_port = spec.is_ring() ? Port::kIn : Port::kAdd;
  BoundaryAmplitudes b;
  const std::array<double, 4> w{w1, w2, w3, w4};
  for (int j = 0; j < 4; ++j) {
    const PortResponse r = solve_linear(spec, w[j], j < 2 ? pair_port : Port::kIn);
    b.f[j] << r.circ1, r.circ2;
  }
  return b;
}

cd j_total(const StructureSpec& spec, double w1, double w2, double w3, double w4,
           const numerics::QuadratureOptions& opt) {
  return j_total(overlap_geometry(spec), solved_amplitudes(spec, w1, w2, w3, w4),
                 phase_mismatch(spec.waveguide, w1, w2, w3, w4), opt);
}

cd j_spatial_analytic(const OverlapGeometry& geometry, double delta_k) {
  if (const auto* ring = std::get_if<RingGeometry>(&geometry)) return phase_integral(delta_k, ring->length);
  if (delta_k != 0.0)
    throw UnsupportedError("j_spatial_analytic: coupler closed forms hold at dk = 0 only; use j_total");
  return ideal_overlap(geometry, 0.0);
}

cd ideal_overlap(const OverlapGeometry& geometry, double delta_k) {
  if (const auto* ring = std::get_if<RingGeometry>(&geometry)) return phase_integral(delta_k, ring->length);
  if (const auto* dc = std::get_if<DirectionalCoupler>(&geometry)) {
    // Each channel carries -sin^2(2 kappa z)/4 = -(1 - cos(4 kappa z))/8.
    const double q = 4.0 * dc->kappa, L = dc->length;
    if (delta_k == 0.0) return -0.25 * L * (1.0 - sinc(q * L));
    return -0.25 * (phase_integral(delta_k, L) - 0.5 * phase_integral(delta_k + q, L) -
                    0.5 * phase_integral(delta_k - q, L));
  }
  const auto& mzi = std::get<MachZehnder>(geometry);
  const double s = mzi.sigma_dx, k = cross_from_self(s);
  return -2.0 * s * s * k * k * phase_integral(delta_k, mzi.length);
}

OverlapKernel::OverlapKernel(const OverlapGeometry& geometry, double delta_k, const numerics::QuadratureOptions& opt)
    : t_(Eigen::Matrix<cd, 16, 1>::Zero()), delta_k_(delta_k) {
  using Vec16 = Eigen::Matrix<cd, 16, 1>;
  auto integrand = [&](double z) {
    const ChannelMaps m = channel_maps(geometry, z);
    const cd phase = std::polar(1.0, delta_k * z);
    Vec16 out = Vec16::Zero();
    for (int ch = 0; ch < m.channels; ++ch) {
      const auto& r = m.row[ch];
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (int c = 0; c < 2; ++c)
            for (int d = 0; d < 2; ++d)
              out(8 * a + 4 * b + 2 * c + d) += std::conj(r(a)) * std::conj(r(b)) * r(c) * r(d) * phase;
    }
    return out;
  };
  const double length = interaction_length(geometry);
  if (!(length > 0)) throw std::invalid_argument("OverlapKernel: interaction length must be positive");
  t_ = numerics::integrate_adaptive(integrand, 0.0, length, opt).value;
}

cd OverlapKernel::contract(const BoundaryAmplitudes& amplitudes) const {
  const auto& u = amplitudes.f;
  cd total = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const cd ab = std::conj(u[0](a)) * std::conj(u[1](b));
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) total += ab * u[2](c) * u[3](d) * t_(8 * a + 4 * b + 2 * c + d);
    }
  return total;
}

}  // namespace ringpair
