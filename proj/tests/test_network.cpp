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

#include <doctest.h>

#include "fixtures.hpp"
#include "ringpair/errors.hpp"

using namespace ringpair;
using namespace ringpair::testing;
using cd = std::complex<double>;

namespace {

StructureSpec random_double(std::mt19937_64& g, bool lossless) {
  StructureSpec s;
  s.waveguide = silicon_wire(lossless ? 0.0 : uniform(g, 1.0, 100.0));
  s.geometry_split = uniform(g, 0.0, 1.0);
  DoubleRacetrack d;
  d.L1 = uniform(g, 200e-6, 800e-6);
  d.L2 = uniform(g, 200e-6, 800e-6);
  d.sigma_bus1 = uniform(g, 0.8, 0.999);
  d.sigma_bus2 = uniform(g, 0.8, 0.999);
  d.phase_offset1 = uniform(g, 0, 2 * kPi);
  d.phase_offset2 = uniform(g, 0, 2 * kPi);
  if (g() % 2)
    d.coupler = DirectionalCoupler{uniform(g, 1e3, 1e5), uniform(g, 10e-6, 150e-6)};
  else
    d.coupler = MachZehnder{uniform(g, 0, 1), uniform(g, 0, 1), uniform(g, 0, 2 * kPi), uniform(g, 0, 150e-6)};
  s.kind = d;
  s.validate();
  return s;
}

}  // namespace

TEST_CASE("single ring matches the all-pass closed form") {
  StructureSpec s;
  s.waveguide = silicon_wire(30.0);
  s.kind = SingleRing{200e-6, 0.97, 0.4};
  const double a = round_trip_amplitude(s.waveguide, 200e-6);
  const Eigen::ArrayXd grid = linspace(s.waveguide.omega0 * 0.999, s.waveguide.omega0 * 1.001, 301);
  const Eigen::ArrayXd t = spectrum(s, grid, Port::kIn, OutputPort::kThrough);
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const cd e = std::polar(a, k_real(s.waveguide, grid(i)) * 200e-6 + 0.4);
    CHECK(t(i) == doctest::Approx(std::norm((0.97 - e) / (1.0 - 0.97 * e))).epsilon(1e-9));
  }
}

TEST_CASE("unity bus self-coupling keeps light out of the resonator") {
  StructureSpec s;
  s.waveguide = silicon_wire();
  s.kind = SingleRing{200e-6, 1.0, 0.0};
  const Eigen::ArrayXd grid = linspace(s.waveguide.omega0 * 0.999, s.waveguide.omega0 * 1.001, 51);
  CHECK((spectrum(s, grid, Port::kIn, OutputPort::kThrough) - 1.0).abs().maxCoeff() < 1e-15);
  CHECK(intensity_enhancement(s, grid, 1).abs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(resonance_info(s, 1, 100), DegenerateStructureError);
}

TEST_CASE("spectra are passive and lossless structures conserve power") {
  auto g = rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const bool lossless = trial % 2 == 0;
    const StructureSpec s = random_double(g, lossless);
    const Eigen::ArrayXd grid = linspace(s.waveguide.omega0 * 0.9995, s.waveguide.omega0 * 1.0005, 201);
    const Eigen::ArrayXd t1 = spectrum(s, grid, Port::kIn, OutputPort::kThrough);
    const Eigen::ArrayXd t3 = spectrum(s, grid, Port::kIn, OutputPort::kDrop);
    const Eigen::ArrayXd t2 = spectrum(s, grid, Port::kAdd, OutputPort::kDrop);
    const Eigen::ArrayXd t4 = spectrum(s, grid, Port::kAdd, OutputPort::kThrough);
    CHECK((t1 + t3).maxCoeff() <= 1.0 + 1e-12);
    CHECK((t2 + t4).maxCoeff() <= 1.0 + 1e-12);
    CHECK(t1.minCoeff() >= 0.0);
    if (lossless) {
      CHECK((t3 - t4).abs().maxCoeff() < 1e-10);
      CHECK(((t1 + t3) - 1.0).abs().maxCoeff() < 1e-10);
      CHECK(((t2 + t4) - 1.0).abs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("identity coupler decouples the resonators exactly") {
  StructureSpec s = weakly_coupled_pair();
  std::get<DoubleRacetrack>(s.kind).coupler = GenericUnitary{};
  s.geometry_split = 0.0;
  StructureSpec ring;
  ring.waveguide = s.waveguide;
  ring.geometry_split = 0.0;
  const auto& d = std::get<DoubleRacetrack>(s.kind);
  ring.kind = SingleRing{d.L1, d.sigma_bus1, d.phase_offset1};
  const Eigen::ArrayXd grid = linspace(wavelength_to_omega(1551e-9), wavelength_to_omega(1549e-9), 401);
  CHECK(spectrum(s, grid, Port::kIn, OutputPort::kDrop).maxCoeff() == 0.0);
  CHECK((spectrum(s, grid, Port::kIn, OutputPort::kThrough) - spectrum(ring, grid, Port::kIn, OutputPort::kThrough))
            .abs()
            .maxCoeff() < 1e-13);
  CHECK((intensity_enhancement(s, grid, 1) - intensity_enhancement(ring, grid, 1)).abs().maxCoeff() < 1e-9);
}

TEST_CASE("resonance bookkeeping") {
  const StructureSpec s = weakly_coupled_pair();
  const auto r1 = nearest_resonance(s, 1, wavelength_to_omega(1550.07e-9));
  CHECK(r1.omega_m == doctest::Approx(wavelength_to_omega(1550.07e-9)).epsilon(1e-14));
  const auto r2 = nearest_resonance(s, 2, wavelength_to_omega(1550.75e-9));
  CHECK(r2.omega_m == doctest::Approx(wavelength_to_omega(1550.75e-9)).epsilon(1e-14));

  const auto next = resonance_info(s, 1, r1.mode_index + 1);
  CHECK(next.omega_m - r1.omega_m == doctest::Approx(2 * kPi * r1.fsr).epsilon(1e-12));
  CHECK(r1.finesse == doctest::Approx(kPi * std::sqrt(r1.sigma * r1.a) / (1 - r1.sigma * r1.a)).epsilon(1e-12));
  CHECK(r1.q_loaded == doctest::Approx(r1.omega_m / r1.gamma_m).epsilon(1e-15));

  const auto band = find_resonances(s, r1.omega_m - 5 * 2 * kPi * r1.fsr, r1.omega_m + 5 * 2 * kPi * r1.fsr);
  CHECK(band.size() >= 11);
  CHECK(std::is_sorted(band.begin(), band.end(), [](auto& a, auto& b) { return a.omega_m < b.omega_m; }));
}

TEST_CASE("enhancement peak equals the resonance value with no arc before the coupler") {
  auto g = rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    StructureSpec s = random_double(g, false);
    s.geometry_split = 0.0;
    std::get<DoubleRacetrack>(s.kind).coupler = GenericUnitary{};
    const auto r = nearest_resonance(s, 1, s.waveguide.omega0);
    Eigen::ArrayXd at(1);
    at << r.omega_m;
    CHECK(intensity_enhancement(s, at, 1)(0) == doctest::Approx(r.fe_max_sq).epsilon(1e-9));
  }
}

TEST_CASE("lineshape fit matches the analytic width") {
  const StructureSpec s = weakly_coupled_pair();
  for (int res : {1, 2}) {
    const auto r = nearest_resonance(s, res, wavelength_to_omega(res == 1 ? 1550.07e-9 : 1550.75e-9));
    const LineshapeCheck c = check_lineshape(s, r);
    CHECK(c.fwhm_mismatch < 0.01);
    CHECK(c.fitted_center == doctest::Approx(r.omega_m).epsilon(1e-9));
  }
}

TEST_CASE("critical coupling peak approaches finesse over pi") {
  StructureSpec s;
  s.waveguide = silicon_wire(10.0);
  const double a = round_trip_amplitude(s.waveguide, 500e-6);
  s.kind = SingleRing{500e-6, a, 0.0};
  const auto r = nearest_resonance(s, 1, s.waveguide.omega0);
  CHECK(r.fe_max_sq == doctest::Approx(1.0 / (1 - a * a)).epsilon(1e-12));
  CHECK(r.fe_max_sq == doctest::Approx(r.finesse / kPi).epsilon(1e-2));
}

TEST_CASE("threaded sweeps are identical to serial ones") {
  const StructureSpec s = weakly_coupled_pair();
  const Eigen::ArrayXd grid = linspace(wavelength_to_omega(1551e-9), wavelength_to_omega(1549e-9), 1001);
  CHECK((spectrum(s, grid, Port::kIn, OutputPort::kThrough, 1) -
         spectrum(s, grid, Port::kIn, OutputPort::kThrough, 4)).abs().maxCoeff() == 0.0);
  CHECK((intensity_enhancement(s, grid, 2, 1) - intensity_enhancement(s, grid, 2, 3)).abs().maxCoeff() == 0.0);
  CHECK(spectrum(s, linspace(grid(0), grid(0), 1), Port::kIn, OutputPort::kThrough).size() == 1);
}

TEST_CASE("structure validation") {
  StructureSpec s = weakly_coupled_pair();
  std::get<DoubleRacetrack>(s.kind).sigma_bus1 = 1.2;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = weakly_coupled_pair();
  std::get<DoubleRacetrack>(s.kind).coupler = DirectionalCoupler{6.4e4, 1e-3};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = weakly_coupled_pair();
  s.geometry_split = 1.5;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  CHECK_THROWS_AS(resonator_length(weakly_coupled_pair(), 3), std::invalid_argument);
  StructureSpec ring;
  ring.waveguide = silicon_wire();
  ring.kind = SingleRing{1e-4, 0.9, 0.0};
  CHECK_THROWS_AS(isolation_db(ring, nearest_resonance(ring, 1, ring.waveguide.omega0)), std::invalid_argument);
}
