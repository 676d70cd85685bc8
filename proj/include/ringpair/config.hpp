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

// Run configuration: an INI-style file with named sections and
// `key = value unit` entries. Every dimensioned value carries an explicit
// unit. Frequencies may be given as wavelengths (length units) or as
// angular/ordinary frequencies.

#include <map>
#include <optional>
#include <string>

#include "ringpair/network.hpp"
#include "ringpair/pulsed.hpp"
#include "ringpair/rates.hpp"

namespace ringpair {

struct SweepConfig {
  bool present = false;
  double omega_lo = 0, omega_hi = 0;
  long points = 0;
};

struct FieldsConfig {
  bool present = false;
  Port port = Port::kIn;
  double omega = 0;
  long points = 201;
};

enum class PumpMode { kCw, kPulsed };

struct PumpConfig {
  bool present = false;
  PumpMode mode = PumpMode::kCw;
  double omega = 0;  // snapped to a resonator-1 resonance unless snap = false
  double power = 0;  // W; pulsed: peak power used to derive alpha_sq
  double bandwidth = 0;  // rad/s, FWHM of |phi_P|^2
  std::optional<double> alpha_sq;
};

struct RatesConfig {
  long signal_order = 1;
  FieldModel fields = FieldModel::kLorentzian;
  double window_gammas = 12.0;
  std::optional<double> ring_length;  // reference ring for ratio_to_ring
};

struct BiphotonConfig {
  long points_per_segment = 101;
  double half_width_gammas = 8.0;
  FieldModel fields = FieldModel::kLorentzian;
};

struct OutputConfig {
  std::string format = "csv";
  std::string path;
};

struct RunConfig {
  std::string source;
  StructureSpec structure;
  double n_group = 0;
  // Set when the coupler was given as a symmetric cross amplitude.
  std::optional<double> symmetric_cross;
  SweepConfig sweep;
  FieldsConfig fields;
  PumpConfig pump;
  bool nonlinear_present = false;
  NonlinearSpec nonlinear;
  RatesConfig rates;
  BiphotonConfig biphoton;
  OutputConfig output;

  // Canonical text with all units normalized to SI and every derived
  // quantity (pinned phase offsets, snapped pump) written out. Parsing it
  // reproduces this configuration exactly.
  std::string resolved_text() const;
};

// Parses configuration text. Lines prefixed "#! " (as embedded in CSV
// outputs) are used exclusively when present; a JSON document with a
// "config" string member is unwrapped. Errors throw ConfigError with
// name:line context.
RunConfig parse_config(const std::string& text, const std::string& name);
// Reads and parses a file; unreadable files throw IoError.
RunConfig load_config(const std::string& path);

}  // namespace ringpair
