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
#include "ringpair/coupler.hpp"

using namespace ringpair;
using namespace ringpair::testing;
using cd = std::complex<double>;

TEST_CASE("coupler matrices are unitary") {
  auto g = rng(7);
  for (int i = 0; i < 500; ++i) {
    const DirectionalCoupler dc{uniform(g, 0.0, 1e6), uniform(g, 1e-6, 1e-3)};
    CHECK(unitarity_defect(transfer_matrix(dc)) < 1e-14);
    const MachZehnder m{uniform(g, 0, 1), uniform(g, 0, 1), uniform(g, -10, 10), uniform(g, 0, 1e-3)};
    CHECK(unitarity_defect(transfer_matrix(m)) < 1e-14);
    CHECK(std::abs(sigma_mzi(m.sigma_sx, m.sigma_dx, m.delta_phi) - transfer_matrix(m)(0, 0)) < 1e-15);
  }
}

TEST_CASE("mzi matrix factorizes into splitters and arms") {
  auto g = rng(8);
  for (int i = 0; i < 200; ++i) {
    const MachZehnder m{uniform(g, 0, 1), uniform(g, 0, 1), uniform(g, -4, 4), 0.0};
    Matrix2c<double> arms = Matrix2c<double>::Zero();
    arms(0, 0) = 1.0;
    arms(1, 1) = std::polar(1.0, m.delta_phi);
    const Matrix2c<double> product = point_coupler(m.sigma_sx) * arms * point_coupler(m.sigma_dx);
    CHECK((product - transfer_matrix(m)).cwiseAbs().maxCoeff() < 1e-14);

    const cd f1(uniform(g, -1, 1), uniform(g, -1, 1)), f2(uniform(g, -1, 1), uniform(g, -1, 1));
    const EnvelopePair e = mzi_envelopes(f1, f2, m);
    Vector2c<double> in, inside;
    in << f1, f2;
    inside << e.f_up, e.f_lo;
    CHECK((point_coupler(m.sigma_sx) * inside - transfer_matrix(m) * in).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("directional coupler envelopes conserve power") {
  auto g = rng(9);
  for (int i = 0; i < 200; ++i) {
    const DirectionalCoupler dc{uniform(g, 1e3, 1e6), uniform(g, 1e-6, 1e-3)};
    const cd f1(uniform(g, -1, 1), uniform(g, -1, 1)), f2(uniform(g, -1, 1), uniform(g, -1, 1));
    const double p0 = std::norm(f1) + std::norm(f2);
    for (double frac : {0.0, 0.3, 0.77, 1.0}) {
      const EnvelopePair e = dc_envelopes(f1, f2, dc, frac * dc.length);
      CHECK(std::norm(e.f_up) + std::norm(e.f_lo) == doctest::Approx(p0).epsilon(1e-14));
    }
    const EnvelopePair end = dc_envelopes(f1, f2, dc, dc.length);
    Vector2c<double> in;
    in << f1, f2;
    const Vector2c<double> out = transfer_matrix(dc) * in;
    CHECK(std::abs(out(0) - end.f_up) < 1e-14);
    CHECK(std::abs(out(1) - end.f_lo) < 1e-14);
  }
  CHECK_THROWS_AS(dc_envelopes(cd(1), cd(0), DirectionalCoupler{1e5, 1e-4}, 2e-4), std::domain_error);
}

TEST_CASE("perfect uncoupling at kappa L = n pi") {
  for (int n = 1; n <= 3; ++n) {
    const DirectionalCoupler dc{n * kPi / 1e-4, 1e-4};
    const Matrix2c<double> x = transfer_matrix(dc);
    CHECK(std::abs(x(0, 1)) < 1e-15);
    CHECK(std::abs(x(0, 0) - (n % 2 ? -1.0 : 1.0)) < 1e-15);
  }
  const Matrix2c<double> x = transfer_matrix(MachZehnder{std::sqrt(0.5), std::sqrt(0.5), kPi, 0.0});
  CHECK(std::abs(x(0, 1)) < 1e-15);
  CHECK(std::abs(std::abs(x(0, 0)) - 1.0) < 1e-15);
}

TEST_CASE("generic couplers") {
  const GenericUnitary s = symmetric_cross_coupler(0.00161);
  CHECK(unitarity_defect(s.x) < 1e-15);
  CHECK(s.x(0, 1) == cd(0, -0.00161));
  CHECK_THROWS_AS(symmetric_cross_coupler(1.5), std::invalid_argument);

  Matrix2c<double> near;
  near << cd(1.0 + 1e-9, 0), cd(0, 0), cd(0, 0), cd(0, 1);
  const GenericUnitary g = make_generic_unitary(near);
  CHECK(unitarity_defect(g.x) < 1e-15);
  near(0, 1) = 0.5;
  CHECK_THROWS_AS(make_generic_unitary(near), std::invalid_argument);
  GenericUnitary bad;
  bad.x(0, 0) = 2.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  CHECK_THROWS_AS(validate(DirectionalCoupler{1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(validate(MachZehnder{1.2, 0.5, 0.0, 0.0}), std::invalid_argument);
}
