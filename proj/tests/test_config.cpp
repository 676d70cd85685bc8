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

#include <sstream>

#include "fixtures.hpp"
#include "ringpair/commands.hpp"
#include "ringpair/config.hpp"
#include "ringpair/errors.hpp"

using namespace ringpair;
using namespace ringpair::testing;

namespace {

const char* kDouble = R"(# two racetracks
[waveguide]
reference = 1550 nm
n_eff = 2.4
n_group = 4.0
loss = 0.23 /cm

[structure]
kind = double
length1 = 641 um
length2 = 432 um
sigma_bus1 = 0.933
sigma_bus2 = 0.993
pin_resonance1 = 1550.07 nm
pin_resonance2 = 1550.75 nm

[coupler]
type = symmetric
cross = 0.00161

[sweep]
start = 1549 nm
stop = 1552 nm
points = 7   ; short sweep
)";

const char* kRates = R"([waveguide]
reference = 193.4 THz
n_eff = 2.4
n_group = 4
loss = 20 /m

[structure]
kind = double
length1 = 125.66370614359172 um
length2 = 129.43361732789947 um
sigma_bus1 = 0.99
sigma_bus2 = 0.995
align_to_pump = true
geometry_split = 0

[coupler]
type = dc
kappa = 0.1 /um
length = 62.83185307179586 um

[pump]
mode = cw
carrier = 1550 nm
power = 1 mW

[nonlinear]
gamma = 200 /W/km

[rates]
signal_order = 2
)";

int error_line(const std::string& text) {
  try {
    parse_config(text, "test.ini");
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  return text.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("units are normalized to SI") {
  const RunConfig c = parse_config(kDouble, "a.ini");
  const auto& d = std::get<DoubleRacetrack>(c.structure.kind);
  CHECK(d.L1 == doctest::Approx(641e-6).epsilon(1e-15));
  CHECK(c.structure.waveguide.xi == doctest::Approx(23.0).epsilon(1e-15));
  CHECK(c.structure.waveguide.omega0 == doctest::Approx(wavelength_to_omega(1550e-9)).epsilon(1e-15));
  CHECK(c.sweep.points == 7);
  CHECK(c.sweep.omega_lo == doctest::Approx(wavelength_to_omega(1552e-9)).epsilon(1e-15));
  CHECK(nearest_resonance(c.structure, 1, wavelength_to_omega(1550.07e-9)).omega_m ==
        doctest::Approx(wavelength_to_omega(1550.07e-9)).epsilon(1e-14));
  CHECK(nearest_resonance(c.structure, 2, wavelength_to_omega(1550.75e-9)).omega_m ==
        doctest::Approx(wavelength_to_omega(1550.75e-9)).epsilon(1e-14));

  const RunConfig r = parse_config(kRates, "b.ini");
  CHECK(r.structure.waveguide.omega0 == doctest::Approx(2 * kPi * 193.4e12).epsilon(1e-15));
  CHECK(r.nonlinear.gamma_nl == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(r.pump.power == doctest::Approx(1e-3).epsilon(1e-15));
  CHECK(r.pump.omega == nearest_resonance(r.structure, 1, wavelength_to_omega(1550e-9)).omega_m);
  CHECK(nearest_resonance(r.structure, 2, r.pump.omega).omega_m == doctest::Approx(r.pump.omega).epsilon(1e-15));
}

TEST_CASE("errors carry the offending line") {
  CHECK(error_line(replace(kDouble, "loss = 0.23 /cm", "loss = 0.23")) == 6);
  CHECK(error_line(replace(kDouble, "loss = 0.23 /cm", "loss = 0.23 furlong")) == 6);
  CHECK(error_line(replace(kDouble, "n_group = 4.0", "n_grp = 4.0")) == 5);
  CHECK(error_line(replace(kDouble, "[sweep]", "[sweeps]")) == 21);
  CHECK(error_line(replace(kDouble, "sigma_bus1 = 0.933", "sigma_bus1 = 1.4")) == 8);
  CHECK(error_line(replace(kDouble, "cross = 0.00161", "cross = 2")) == 18);
  CHECK(error_line(replace(kDouble, "points = 7", "points = seven")) == 24);
  CHECK(error_line(replace(kRates, "align_to_pump = true", "align_to_pump = true\npin_resonance2 = 1550 nm")) == 13);
  CHECK(error_line(replace(kRates, "power = 1 mW", "power = 1 mW\npower = 2 mW")) > 0);
  CHECK_THROWS_AS(load_config("/nonexistent/ringpair.ini"), IoError);
}

TEST_CASE("resolved config round-trips exactly") {
  for (const char* text : {kDouble, kRates}) {
    const RunConfig a = parse_config(text, "a.ini");
    const std::string resolved = a.resolved_text();
    const RunConfig b = parse_config(resolved, "resolved.ini");
    CHECK(b.resolved_text() == resolved);
    const Waveguide &wa = a.structure.waveguide, &wb = b.structure.waveguide;
    CHECK(wa.omega0 == wb.omega0);
    CHECK(wa.n_eff == wb.n_eff);
    CHECK(wa.v_g == wb.v_g);
    CHECK(wa.xi == wb.xi);
    CHECK(wa.beta2 == wb.beta2);
    CHECK(coupler_matrix(a.structure) == coupler_matrix(b.structure));
    for (int res : {1, 2}) CHECK(phase_offset(a.structure, res) == phase_offset(b.structure, res));
    CHECK(a.pump.omega == b.pump.omega);
  }
}

TEST_CASE("artifacts are deterministic and reloadable") {
  const RunConfig c = parse_config(kDouble, "a.ini");
  CommandOptions single, multi;
  single.threads = 1;
  multi.threads = 3;
  const std::string csv = run_command(Command::kSpectrum, c, single);
  CHECK(csv == run_command(Command::kSpectrum, c, multi));
  std::istringstream lines(csv);
  std::string line;
  int rows = 0;
  bool header = false;
  while (std::getline(lines, line)) {
    if (line.rfind("#", 0) == 0) continue;
    if (!header) {
      CHECK(line == "omega_rad_s,lambda_nm,T_I,T_II,T_III,T_IV");
      header = true;
    } else {
      ++rows;
    }
  }
  CHECK(rows == 7);
  CHECK(parse_config(csv, "out.csv").resolved_text() == c.resolved_text());

  CommandOptions json = single;
  json.format = "json";
  const std::string doc = run_command(Command::kEnhance, c, json);
  CHECK(parse_config(doc, "out.json").resolved_text() == c.resolved_text());
  CHECK(doc.find("\"FE2_2\"") != std::string::npos);
}

TEST_CASE("commands check their prerequisites") {
  const RunConfig c = parse_config(kDouble, "a.ini");
  CHECK_THROWS_AS(run_command(Command::kRates, c), ConfigError);
  CHECK_THROWS_AS(run_command(Command::kBiphoton, c), ConfigError);
  CHECK_THROWS_AS(run_command(Command::kFields, c), ConfigError);
  CommandOptions bad;
  bad.format = "xml";
  CHECK_THROWS_AS(run_command(Command::kSpectrum, c, bad), ConfigError);

  RunConfig missing = parse_config(kRates, "b.ini");
  missing.rates.signal_order = 1;
  std::get<DoubleRacetrack>(missing.structure.kind).L2 *= 1.0001;
  CHECK_THROWS_AS(run_command(Command::kRates, missing), NumericError);
}

TEST_CASE("rates report") {
  const RunConfig c = parse_config(kRates, "b.ini");
  CommandOptions json;
  json.format = "json";
  json.threads = 1;
  const std::string doc = run_command(Command::kRates, c, json);
  CHECK(doc.find("\"ratio_to_ring\"") != std::string::npos);
  CHECK(doc.find("\"relative_difference\"") != std::string::npos);
  CHECK(doc == run_command(Command::kRates, c, json));
}
