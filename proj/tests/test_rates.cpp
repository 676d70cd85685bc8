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

namespace {

struct Case {
  StructureSpec spec;
  ResonanceTriple triple;
  CwPump pump;
};

Case make_case(StructureKind kind, long order = 3) {
  Case c;
  c.spec = high_finesse(kind);
  const double wp = nearest_resonance(c.spec, 1, c.spec.waveguide.omega0).omega_m;
  c.triple = triple_around_pump(c.spec, wp, order);
  c.pump = CwPump{1e-3, wp};
  return c;
}

const NonlinearSpec kNl{1.0, std::nullopt};

}  // namespace

TEST_CASE("lorentzian pair integral") {
  const double w = 1.2e15;
  for (double ratio : {0.1, 0.5, 1.0, 2.0, 10.0}) {
    const double gi = 1e-6 * w, gs = ratio * gi;
    const double ws = w + 50 * gi, wi = w - 50 * gi;
    const double closed = lorentzian_pair_integral(gs, gi, ws, wi);
    const double numeric = lorentzian_pair_integral_numeric(gs, gi, ws, wi, w, 12.0);
    CHECK(relative_error(closed, numeric) < 1e-3);
  }
}

TEST_CASE("ratio to a single ring") {
  const double r = 10e-6, l = 2 * kPi * r;
  CHECK(ratio_to_ring(StructureKind::kDirectionalCoupler, 2 * l, 2 * l, kPi * r, l) ==
        doctest::Approx(1.0 / 1024).epsilon(1e-14));
  CHECK(ratio_to_ring(StructureKind::kMachZehnder, 2 * l, 2 * l, kPi * r, l) ==
        doctest::Approx(1.0 / 256).epsilon(1e-14));
  CHECK_THROWS_AS(ratio_to_ring(StructureKind::kRing, l, l, 0, l), std::invalid_argument);
  CHECK_THROWS_AS(ratio_to_ring(StructureKind::kMachZehnder, -l, l, 0, l), std::invalid_argument);
}

TEST_CASE("analytic and quadrature rates agree for every structure") {
  for (StructureKind kind : {StructureKind::kRing, StructureKind::kDirectionalCoupler, StructureKind::kMachZehnder}) {
    CAPTURE(to_string(kind));
    const Case c = make_case(kind);
    CHECK(c.triple.signal.finesse >= 100);
    const SfwmResult a = pair_rate_cw(c.spec, c.triple, c.pump, kNl);
    RateOptions q;
    q.method = RateMethod::kQuadrature;
    const SfwmResult lor = pair_rate_cw(c.spec, c.triple, c.pump, kNl, q);
    q.fields = FieldModel::kSolved;
    const SfwmResult sol = pair_rate_cw(c.spec, c.triple, c.pump, kNl, q);
    CHECK(relative_error(a.rate_pairs_per_s, lor.rate_pairs_per_s) < 0.02);
    CHECK(relative_error(a.rate_pairs_per_s, sol.rate_pairs_per_s) < 0.02);
    const FormInputs in = form_inputs(c.triple, c.pump, kNl, c.spec.waveguide.v_g);
    const OverlapGeometry geom = overlap_geometry(c.spec);
    CHECK(relative_error(rate_fe_form(in, geom), a.rate_pairs_per_s) < 1e-12);
    CHECK(relative_error(rate_q_form(in, geom), a.rate_pairs_per_s) < 1e-9);
  }
}

TEST_CASE("rate scaling") {
  const Case c = make_case(StructureKind::kDirectionalCoupler);
  const double base = pair_rate_cw(c.spec, c.triple, c.pump, kNl).rate_pairs_per_s;
  CwPump doubled = c.pump;
  doubled.power *= 2;
  CHECK(pair_rate_cw(c.spec, c.triple, doubled, kNl).rate_pairs_per_s == doctest::Approx(4 * base).epsilon(1e-12));
  const NonlinearSpec off{0.0, std::nullopt};
  CHECK(pair_rate_cw(c.spec, c.triple, c.pump, off).rate_pairs_per_s == 0.0);
  RateOptions q;
  q.method = RateMethod::kQuadrature;
  CHECK(pair_rate_cw(c.spec, c.triple, c.pump, off, q).rate_pairs_per_s == 0.0);
}

TEST_CASE("ring limit closed forms") {
  StructureSpec s;
  s.waveguide = silicon_wire();
  s.geometry_split = 0.0;
  s.kind = SingleRing{2 * kPi * 20e-6, 0.999, 0.0};
  const double wp = nearest_resonance(s, 1, s.waveguide.omega0).omega_m;
  const ResonanceTriple t = triple_around_pump(s, wp, 1);
  const CwPump pump{1e-3, wp};
  const double r = pair_rate_cw(s, t, pump, kNl).rate_pairs_per_s;
  const double expected = ring_rate_lossless(1.0, 1e-3, s.waveguide.v_g, t.pump.q_loaded, wp, 2 * kPi * 20e-6);
  CHECK(relative_error(r, expected) < 0.01);
  CHECK(ring_rate_critical(1.0, 1e-3, 1e8, 1e4, 1e15, 1e-4) ==
        doctest::Approx(ring_rate_lossless(1.0, 1e-3, 1e8, 1e4, 1e15, 1e-4) / 16).epsilon(1e-15));
}

TEST_CASE("input validation") {
  Case c = make_case(StructureKind::kMachZehnder);
  CwPump off = c.pump;
  off.omega_p += c.triple.pump.gamma_m;
  CHECK_THROWS_AS(pair_rate_cw(c.spec, c.triple, off, kNl), std::invalid_argument);
  ResonanceTriple broken = c.triple;
  broken.idler = resonance_info(c.spec, 2, c.triple.idler.mode_index - 1);
  CHECK_THROWS_AS(broken.validate(), std::invalid_argument);
  CHECK_THROWS_AS(pair_rate_cw(c.spec, c.triple, CwPump{0.0, c.pump.omega_p}, kNl), std::invalid_argument);
  CHECK_THROWS_AS(triple_around_pump(c.spec, c.pump.omega_p, 0), std::invalid_argument);

  NonlinearSpec with_s{1.0, s_perp_from_gamma(1.0, c.triple.signal.omega_m, c.triple.idler.omega_m,
                                              c.pump.omega_p, c.pump.omega_p, c.pump.omega_p)};
  CHECK_NOTHROW(pair_rate_cw(c.spec, c.triple, c.pump, with_s));
  *with_s.s_perp *= 1.01;
  CHECK_THROWS_AS(pair_rate_cw(c.spec, c.triple, c.pump, with_s), std::invalid_argument);
}
