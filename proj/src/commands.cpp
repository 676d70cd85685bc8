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

#include "ringpair/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "ringpair/constants.hpp"
#include "ringpair/errors.hpp"
#include "ringpair/overlap.hpp"
#include "ringpair/parallel.hpp"

namespace ringpair {

namespace {

using nlohmann::ordered_json;

struct Table {
  std::vector<std::string> names;
  std::vector<Eigen::ArrayXd> columns;
  std::vector<std::string> notes;  // "# " lines ahead of the header (csv) or extra members (json)
  ordered_json extra = ordered_json::object();
};

ordered_json num(double x) {
  if (std::isinf(x)) return x > 0 ? "infinite" : "-infinite";
  if (std::isnan(x)) return "nan";
  return x;
}

std::string csv_number(double x) { return fmt::format("{:.14e}", x); }

std::string config_prelude(const std::string& resolved) {
  std::string out;
  std::size_t start = 0;
  while (start < resolved.size()) {
    const std::size_t end = resolved.find('\n', start);
    const std::string line = resolved.substr(start, end == std::string::npos ? std::string::npos : end - start);
    out += line.empty() ? "#!\n" : "#! " + line + "\n";
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

std::string render(const Table& t, const std::string& format, const std::string& resolved) {
  if (format == "json") {
    ordered_json doc = ordered_json::object();
    doc["config"] = resolved;
    for (const auto& [k, v] : t.extra.items()) doc[k] = v;
    ordered_json cols = ordered_json::object();
    for (std::size_t c = 0; c < t.names.size(); ++c) {
      ordered_json col = ordered_json::array();
      for (double x : t.columns[c]) col.push_back(num(x));
      cols[t.names[c]] = std::move(col);
    }
    doc["columns"] = std::move(cols);
    return doc.dump(2) + "\n";
  }
  std::string out = config_prelude(resolved);
  for (const auto& [k, v] : t.extra.items())
    out += "# " + k + " = " + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
  for (std::size_t c = 0; c < t.names.size(); ++c) out += (c ? "," : "") + t.names[c];
  out += "\n";
  const Eigen::Index rows = t.columns.empty() ? 0 : t.columns.front().size();
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < t.columns.size(); ++c) out += (c ? "," : "") + csv_number(t.columns[c](r));
    out += "\n";
  }
  return out;
}

Eigen::ArrayXd sweep_grid(const RunConfig& cfg, const char* command) {
  if (!cfg.sweep.present) throw ConfigError(cfg.source, 0, fmt::format("{} needs a [sweep] section", command));
  return linspace(cfg.sweep.omega_lo, cfg.sweep.omega_hi, cfg.sweep.points);
}

Eigen::ArrayXd lambda_nm(const Eigen::ArrayXd& omega) {
  return omega.unaryExpr([](double w) { return omega_to_wavelength(w) * 1e9; });
}

Table spectrum_table(const RunConfig& cfg, unsigned threads) {
  const Eigen::ArrayXd grid = sweep_grid(cfg, "spectrum");
  const StructureSpec& s = cfg.structure;
  Table t;
  t.names = {"omega_rad_s", "lambda_nm", "T_I", "T_II", "T_III", "T_IV"};
  t.columns = {grid, lambda_nm(grid), spectrum(s, grid, Port::kIn, OutputPort::kThrough, threads)};
  if (s.is_ring()) {
    for (int i = 0; i < 3; ++i) t.columns.push_back(Eigen::ArrayXd::Zero(grid.size()));
  } else {
    t.columns.push_back(spectrum(s, grid, Port::kAdd, OutputPort::kDrop, threads));
    t.columns.push_back(spectrum(s, grid, Port::kIn, OutputPort::kDrop, threads));
    t.columns.push_back(spectrum(s, grid, Port::kAdd, OutputPort::kThrough, threads));
  }
  return t;
}

Table enhance_table(const RunConfig& cfg, unsigned threads) {
  const Eigen::ArrayXd grid = sweep_grid(cfg, "enhance");
  const StructureSpec& s = cfg.structure;
  Table t;
  t.names = {"omega_rad_s", "lambda_nm", "FE2_1", "FE2_2"};
  t.columns = {grid, lambda_nm(grid), intensity_enhancement(s, grid, 1, threads),
               s.is_ring() ? Eigen::ArrayXd(Eigen::ArrayXd::Zero(grid.size()))
                           : intensity_enhancement(s, grid, 2, threads)};
  return t;
}

Table fields_table(const RunConfig& cfg) {
  if (!cfg.fields.present) throw ConfigError(cfg.source, 0, "fields needs a [fields] section");
  const StructureSpec& s = cfg.structure;
  const auto* d = std::get_if<DoubleRacetrack>(&s.kind);
  if (!d || std::holds_alternative<GenericUnitary>(d->coupler))
    throw ConfigError(cfg.source, 0, "fields needs a double structure with a dc or mzi coupler");
  const PortResponse resp = solve_linear(s, cfg.fields.omega, cfg.fields.port);
  const double length = coupler_length(d->coupler);
  const Eigen::Index n = length > 0 ? cfg.fields.points : 1;
  const Eigen::ArrayXd z = linspace(0.0, length, n);
  Eigen::ArrayXd up(n), lo(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double zi = std::min(z(i), length);
    const EnvelopePair e = std::holds_alternative<DirectionalCoupler>(d->coupler)
                               ? dc_envelopes(resp.circ1, resp.circ2, std::get<DirectionalCoupler>(d->coupler), zi)
                               : mzi_envelopes(resp.circ1, resp.circ2, std::get<MachZehnder>(d->coupler));
    up(i) = std::norm(e.f_up);
    lo(i) = std::norm(e.f_lo);
  }
  Table t;
  t.names = {"z_m", "I_up", "I_lo"};
  t.columns = {z, up, lo};
  t.extra["port"] = cfg.fields.port == Port::kIn ? "in" : "add";
  t.extra["omega_rad_s"] = cfg.fields.omega;
  return t;
}

void require_pump(const RunConfig& cfg, PumpMode mode, const char* command) {
  if (!cfg.pump.present || cfg.pump.mode != mode)
    throw ConfigError(cfg.source, 0,
                      fmt::format("{} needs a [pump] section with mode = {}", command,
                                  mode == PumpMode::kCw ? "cw" : "pulsed"));
  if (!cfg.nonlinear_present) throw ConfigError(cfg.source, 0, fmt::format("{} needs a [nonlinear] section", command));
}

ResonanceTriple resolve_triple(const RunConfig& cfg) {
  const ResonanceTriple t = triple_around_pump(cfg.structure, cfg.pump.omega, cfg.rates.signal_order);
  try {
    t.validate();
    return t;
  } catch (const std::invalid_argument& e) {
    std::string msg = fmt::format("no energy-conserving resonance triple at signal_order {}: {}\nnearest misses:",
                                  cfg.rates.signal_order, e.what());
    const long top = std::max<long>(5, cfg.rates.signal_order + 2);
    for (long order = 1; order <= top; ++order) {
      const ResonanceTriple c = triple_around_pump(cfg.structure, cfg.pump.omega, order);
      msg += fmt::format("\n  order {}: |2 w_P - w_S - w_I| = {:.6e} rad/s = {:.4g} min linewidths", order,
                         std::abs(c.energy_mismatch()), std::abs(c.energy_mismatch()) / c.min_linewidth());
    }
    throw NumericError(msg);
  }
}

ordered_json resonance_json(const ResonanceInfo& r) {
  ordered_json j = ordered_json::object();
  j["resonator"] = r.resonator_index;
  j["mode_index"] = r.mode_index;
  j["omega_rad_s"] = r.omega_m;
  j["lambda_nm"] = omega_to_wavelength(r.omega_m) * 1e9;
  j["gamma_rad_s"] = r.gamma_m;
  j["fe_max_sq"] = num(r.fe_max_sq);
  j["finesse"] = num(r.finesse);
  j["q_loaded"] = num(r.q_loaded);
  j["q_coupling"] = num(r.q_coupling);
  return j;
}

ordered_json complex_json(std::complex<double> z) { return ordered_json::array({num(z.real()), num(z.imag())}); }

double relative(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale > 0 ? std::abs(a - b) / scale : 0.0;
}

ordered_json rates_report(const RunConfig& cfg) {
  require_pump(cfg, PumpMode::kCw, "rates");
  const StructureSpec& s = cfg.structure;
  const ResonanceTriple triple = resolve_triple(cfg);
  const CwPump pump{cfg.pump.power, cfg.pump.omega};
  RateOptions opt;
  opt.fields = cfg.rates.fields;
  opt.window_gammas = cfg.rates.window_gammas;
  const SfwmResult analytic = pair_rate_cw(s, triple, pump, cfg.nonlinear, opt);
  opt.method = RateMethod::kQuadrature;
  const SfwmResult quad = pair_rate_cw(s, triple, pump, cfg.nonlinear, opt);

  const OverlapGeometry geometry = overlap_geometry(s);
  const FormInputs in = form_inputs(triple, pump, cfg.nonlinear, s.waveguide.v_g);

  ordered_json doc = ordered_json::object();
  doc["structure"] = to_string(kind_of(geometry));
  ordered_json t = ordered_json::object();
  t["pump"] = resonance_json(triple.pump);
  t["signal"] = resonance_json(triple.signal);
  t["idler"] = resonance_json(triple.idler);
  t["energy_mismatch_rad_s"] = triple.energy_mismatch();
  doc["triple"] = std::move(t);
  doc["power_w"] = pump.power;
  doc["gamma_nl_per_w_m"] = cfg.nonlinear.gamma_nl;

  ordered_json a = ordered_json::object();
  a["rate_pairs_per_s"] = num(analytic.rate_pairs_per_s);
  a["j_spatial_m"] = complex_json(analytic.j_spatial);
  a["fe_product"] = num(analytic.fe_product);
  doc["analytic"] = std::move(a);

  ordered_json q = ordered_json::object();
  q["fields"] = to_string(opt.fields);
  q["rate_pairs_per_s"] = num(quad.rate_pairs_per_s);
  q["j_spatial_m"] = complex_json(quad.j_spatial);
  q["relative_difference"] = relative(analytic.rate_pairs_per_s, quad.rate_pairs_per_s);
  doc["quadrature"] = std::move(q);

  ordered_json f = ordered_json::object();
  f["fe_form"] = num(rate_fe_form(in, geometry));
  f["q_form"] = num(rate_q_form(in, geometry));
  f["finesse_form"] = num(rate_finesse_form(in, geometry));
  doc["forms"] = std::move(f);

  if (const auto* d = std::get_if<DoubleRacetrack>(&s.kind)) {
    const double ring_length = cfg.rates.ring_length.value_or(0.5 * d->L1);
    ordered_json r = ordered_json::object();
    r["ring_length_m"] = ring_length;
    r["closed_form"] =
        num(ratio_to_ring(kind_of(geometry), d->L1, d->L2, interaction_length(geometry), ring_length));
    doc["ratio_to_ring"] = std::move(r);
  }
  return doc;
}

std::string render_report(const ordered_json& report, const std::string& format, const std::string& resolved) {
  if (format == "json") {
    ordered_json doc = ordered_json::object();
    doc["config"] = resolved;
    for (const auto& [k, v] : report.items()) doc[k] = v;
    return doc.dump(2) + "\n";
  }
  std::string out = config_prelude(resolved) + "quantity,value\n";
  const ordered_json flat = report.flatten();
  for (const auto& [k, v] : flat.items()) {
    std::string value;
    if (v.is_number_float()) {
      value = csv_number(v.get<double>());
    } else if (v.is_string()) {
      value = v.get<std::string>();
    } else {
      value = v.dump();
    }
    out += k + "," + value + "\n";
  }
  return out;
}

PulsedPump make_pulsed_pump(const RunConfig& cfg) {
  const double alpha_guess = cfg.pump.alpha_sq.value_or(1.0);
  PulsedPump pump = PulsedPump::gaussian(cfg.pump.omega, cfg.pump.bandwidth, alpha_guess);
  if (!cfg.pump.alpha_sq) pump.alpha_sq = alpha_sq_for_power(cfg.pump.power, pump.omega_center, pump.effective_duration());
  return pump;
}

Table biphoton_table(const RunConfig& cfg, unsigned threads) {
  require_pump(cfg, PumpMode::kPulsed, "biphoton");
  const StructureSpec& s = cfg.structure;
  const ResonanceTriple triple = resolve_triple(cfg);
  const PulsedPump pump = make_pulsed_pump(cfg);
  PulsedOptions opt;
  opt.fields = cfg.biphoton.fields;
  opt.window_gammas = cfg.rates.window_gammas;
  opt.threads = threads;
  const PairsPerPulse ppp = pairs_per_pulse(s, triple, pump, cfg.nonlinear, opt);

  const int pts = static_cast<int>(cfg.biphoton.points_per_segment);
  const double hw = cfg.biphoton.half_width_gammas;
  const double centres[] = {triple.signal.omega_m, triple.idler.omega_m};
  const double half = hw * std::max(triple.signal.gamma_m, triple.idler.gamma_m);
  const Eigen::ArrayXd w1 = segmented_axis(centres, half, pts);
  const Eigen::ArrayXd& w2 = w1;
  const BiphotonResult b = biphoton_wavefunction(s, triple, pump, cfg.nonlinear, w1, w2, opt);

  Table t;
  const Eigen::Index n = w1.size() * w2.size();
  Eigen::ArrayXd col1(n), col2(n), abs2(n);
  for (Eigen::Index i = 0; i < w1.size(); ++i)
    for (Eigen::Index j = 0; j < w2.size(); ++j) {
      const Eigen::Index k = i * w2.size() + j;
      col1(k) = w1(i);
      col2(k) = w2(j);
      abs2(k) = std::norm(b.phi(i, j));
    }
  t.names = {"omega1_rad_s", "omega2_rad_s", "abs_phi_sq"};
  t.columns = {col1, col2, abs2};
  t.extra["alpha_sq"] = pump.alpha_sq;
  t.extra["effective_duration_s"] = pump.effective_duration();
  t.extra["beta_sq"] = ppp.beta_sq;
  t.extra["beta_sq_relative_change"] = ppp.relative_change;
  t.extra["pre_norm_integral"] = b.pre_norm_integral;
  t.extra["norm_residual"] = b.norm_residual;
  t.extra["marginal_fwhm_signal_rad_s"] = b.marginal_fwhm_signal;
  t.extra["marginal_fwhm_idler_rad_s"] = b.marginal_fwhm_idler;
  t.extra["gamma_signal_rad_s"] = triple.signal.gamma_m;
  t.extra["gamma_idler_rad_s"] = triple.idler.gamma_m;
  std::vector<std::string> warnings = ppp.warnings;
  warnings.insert(warnings.end(), b.warnings.begin(), b.warnings.end());
  for (std::size_t i = 0; i < warnings.size(); ++i) t.extra[fmt::format("warning_{}", i + 1)] = warnings[i];
  return t;
}

}  // namespace

const char* to_string(Command c) {
  switch (c) {
    case Command::kSpectrum: return "spectrum";
    case Command::kEnhance: return "enhance";
    case Command::kFields: return "fields";
    case Command::kRates: return "rates";
    case Command::kBiphoton: return "biphoton";
  }
  return "?";
}

std::string output_path(const RunConfig& config, const CommandOptions& options) {
  return options.out.value_or(config.output.path);
}

std::string run_command(Command command, const RunConfig& config, const CommandOptions& options) {
  const std::string format = options.format.value_or(config.output.format);
  if (format != "csv" && format != "json")
    throw ConfigError(config.source, 0, fmt::format("unknown output format '{}'", format));
  const unsigned threads = detail::resolve_threads(options.threads);
  const std::string resolved = config.resolved_text();
  switch (command) {
    case Command::kSpectrum: return render(spectrum_table(config, threads), format, resolved);
    case Command::kEnhance: return render(enhance_table(config, threads), format, resolved);
    case Command::kFields: return render(fields_table(config), format, resolved);
    case Command::kRates: return render_report(rates_report(config), format, resolved);
    case Command::kBiphoton: return render(biphoton_table(config, threads), format, resolved);
  }
  throw std::logic_error("unknown command");
}

void write_artifact(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoError("cannot write to standard output");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path));
  out << text;
  out.flush();
  if (!out) throw IoError(fmt::format("cannot write '{}'", path));
}

}  // namespace ringpair
