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

// Linear 2x2 description of the region joining the two resonators, and the
// slowly varying field envelopes inside it. Matrices exclude the common
// propagation factor exp(i k L_cp); callers apply it separately.

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <variant>

#include <Eigen/Dense>

namespace ringpair {

template <typename Scalar>
using Matrix2c = Eigen::Matrix<std::complex<Scalar>, 2, 2>;
template <typename Scalar>
using Vector2c = Eigen::Matrix<std::complex<Scalar>, 2, 1>;

template <typename Scalar>
struct DirectionalCouplerT {
  Scalar kappa{};   // 1/m
  Scalar length{};  // m
};

template <typename Scalar>
struct MachZehnderT {
  Scalar sigma_sx{};
  Scalar sigma_dx{};
  Scalar delta_phi{};  // rad, lumped on the lower arm
  Scalar length{};     // m
};

template <typename Scalar>
struct GenericUnitaryT {
  Matrix2c<Scalar> x = Matrix2c<Scalar>::Identity();
  Scalar length{0};
};

template <typename Scalar>
using CouplerSpecT = std::variant<DirectionalCouplerT<Scalar>, MachZehnderT<Scalar>, GenericUnitaryT<Scalar>>;

using DirectionalCoupler = DirectionalCouplerT<double>;
using MachZehnder = MachZehnderT<double>;
using GenericUnitary = GenericUnitaryT<double>;
using CouplerSpec = CouplerSpecT<double>;

template <typename Scalar>
struct EnvelopePairT {
  std::complex<Scalar> f_up;
  std::complex<Scalar> f_lo;
  Scalar z{};
};
using EnvelopePair = EnvelopePairT<double>;

template <typename Scalar>
Scalar cross_from_self(Scalar sigma) {
  return std::sqrt(std::max(Scalar(0), Scalar(1) - sigma * sigma));
}

// Lossless point coupler [[s, i k], [i k, s]] with s^2 + k^2 = 1.
template <typename Scalar>
Matrix2c<Scalar> point_coupler(Scalar sigma) {
  const std::complex<Scalar> s(sigma, 0), ik(0, cross_from_self(sigma));
  Matrix2c<Scalar> m;
  m << s, ik, ik, s;
  return m;
}

template <typename Scalar>
Scalar unitarity_defect(const Matrix2c<Scalar>& x) {
  return (x * x.adjoint() - Matrix2c<Scalar>::Identity()).cwiseAbs().maxCoeff();
}

template <typename Scalar>
void validate(const DirectionalCouplerT<Scalar>& dc) {
  if (!(dc.kappa >= 0)) throw std::invalid_argument("directional coupler: kappa must be >= 0");
  if (!(dc.length > 0)) throw std::invalid_argument("directional coupler: length must be > 0");
}

template <typename Scalar>
void validate(const MachZehnderT<Scalar>& mzi) {
  auto in_unit = [](Scalar s) { return s >= 0 && s <= 1; };
  if (!in_unit(mzi.sigma_sx) || !in_unit(mzi.sigma_dx))
    throw std::invalid_argument("mach-zehnder: self-coupling coefficients must lie in [0, 1]");
  if (!(mzi.length >= 0)) throw std::invalid_argument("mach-zehnder: length must be >= 0");
  if (!std::isfinite(mzi.delta_phi)) throw std::invalid_argument("mach-zehnder: delta_phi must be finite");
}

template <typename Scalar>
void validate(const GenericUnitaryT<Scalar>& g) {
  if (unitarity_defect(g.x) > Scalar(1e-12))
    throw std::invalid_argument("generic coupler: X X^H deviates from identity by more than 1e-12");
  if (std::abs(std::abs(g.x.determinant()) - Scalar(1)) > Scalar(1e-12))
    throw std::invalid_argument("generic coupler: |det X| deviates from 1 by more than 1e-12");
  if (!(g.length >= 0)) throw std::invalid_argument("generic coupler: length must be >= 0");
}

template <typename Scalar>
void validate(const CouplerSpecT<Scalar>& spec) {
  std::visit([](const auto& c) { validate(c); }, spec);
}

// Accepts a measured X within 1e-6 of unitary and snaps it onto the nearest
// unitary matrix (polar factor via SVD).
template <typename Scalar>
GenericUnitaryT<Scalar> make_generic_unitary(const Matrix2c<Scalar>& x, Scalar length = 0) {
  if (unitarity_defect(x) > Scalar(1e-6))
    throw std::invalid_argument("generic coupler: X is not unitary within 1e-6");
  Eigen::JacobiSVD<Matrix2c<Scalar>> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  GenericUnitaryT<Scalar> g;
  g.x = svd.matrixU() * svd.matrixV().adjoint();
  g.length = length;
  validate(g);
  return g;
}

// Symmetric near-uncoupled coupler with X12 = X21 = -i c, as quoted for
// measured devices.
template <typename Scalar>
GenericUnitaryT<Scalar> symmetric_cross_coupler(Scalar cross, Scalar length = 0) {
  if (!(std::abs(cross) <= 1)) throw std::invalid_argument("generic coupler: |cross| must be <= 1");
  const std::complex<Scalar> self(std::sqrt(Scalar(1) - cross * cross), 0), off(0, -cross);
  GenericUnitaryT<Scalar> g;
  g.x << self, off, off, self;
  g.length = length;
  return g;
}

template <typename Scalar>
std::complex<Scalar> sigma_mzi(Scalar sigma_sx, Scalar sigma_dx, Scalar delta_phi) {
  const Scalar k_sx = cross_from_self(sigma_sx), k_dx = cross_from_self(sigma_dx);
  return sigma_sx * sigma_dx - k_sx * k_dx * std::polar(Scalar(1), delta_phi);
}

template <typename Scalar>
Matrix2c<Scalar> transfer_matrix(const DirectionalCouplerT<Scalar>& dc) {
  const Scalar phase = dc.kappa * dc.length;
  const std::complex<Scalar> c(std::cos(phase), 0), s(0, -std::sin(phase));
  Matrix2c<Scalar> m;
  m << c, s, s, c;
  return m;
}

template <typename Scalar>
Matrix2c<Scalar> transfer_matrix(const MachZehnderT<Scalar>& mzi) {
  using C = std::complex<Scalar>;
  const Scalar s_sx = mzi.sigma_sx, s_dx = mzi.sigma_dx;
  const Scalar k_sx = cross_from_self(s_sx), k_dx = cross_from_self(s_dx);
  const C e = std::polar(Scalar(1), mzi.delta_phi);
  const C i(0, 1);
  Matrix2c<Scalar> m;
  m(0, 0) = s_sx * s_dx - k_sx * k_dx * e;
  m(0, 1) = i * (s_sx * k_dx + k_sx * s_dx * e);
  m(1, 0) = i * (k_sx * s_dx + s_sx * k_dx * e);
  m(1, 1) = -k_sx * k_dx + s_sx * s_dx * e;
  return m;
}

template <typename Scalar>
Matrix2c<Scalar> transfer_matrix(const GenericUnitaryT<Scalar>& g) {
  return g.x;
}

template <typename Scalar>
Matrix2c<Scalar> transfer_matrix(const CouplerSpecT<Scalar>& spec) {
  return std::visit([](const auto& c) { return transfer_matrix(c); }, spec);
}

template <typename Scalar>
Scalar coupler_length(const CouplerSpecT<Scalar>& spec) {
  return std::visit([](const auto& c) { return c.length; }, spec);
}

template <typename Scalar>
EnvelopePairT<Scalar> dc_envelopes(std::complex<Scalar> f1_in, std::complex<Scalar> f2_in,
                                   const DirectionalCouplerT<Scalar>& dc, Scalar z) {
  if (!(z >= 0 && z <= dc.length)) throw std::domain_error("dc_envelopes: z outside the coupler");
  const Scalar c = std::cos(dc.kappa * z), s = std::sin(dc.kappa * z);
  const std::complex<Scalar> mi(0, -1);
  return {f1_in * c + mi * f2_in * s, mi * f1_in * s + f2_in * c, z};
}

// Arm envelopes are constant along z; the lower arm carries exp(i dphi).
template <typename Scalar>
EnvelopePairT<Scalar> mzi_envelopes(std::complex<Scalar> f1_in, std::complex<Scalar> f2_in,
                                    const MachZehnderT<Scalar>& mzi) {
  const Scalar s = mzi.sigma_dx, k = cross_from_self(s);
  const std::complex<Scalar> ik(0, k);
  return {s * f1_in + ik * f2_in, (ik * f1_in + s * f2_in) * std::polar(Scalar(1), mzi.delta_phi), Scalar(0)};
}

}  // namespace ringpair
