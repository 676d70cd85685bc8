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

#include "ringpair/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "ringpair/constants.hpp"
#include "ringpair/errors.hpp"

namespace ringpair {

namespace {

enum class Dim { kNone, kLength, kInverseLength, kFrequency, kPower, kAngle, kGvd, kNonlinear };

struct Unit {
  const char* name;
  Dim dim;
  double scale;
};

constexpr double kTwoPi = 2.0 * kPi;

const std::array<Unit, 27> kUnits{{
    {"m", Dim::kLength, 1.0},          {"cm", Dim::kLength, 1e-2},      {"mm", Dim::kLength, 1e-3},
    {"um", Dim::kLength, 1e-6},        {"nm", Dim::kLength, 1e-9},      {"/m", Dim::kInverseLength, 1.0},
    {"/cm", Dim::kInverseLength, 1e2}, {"/mm", Dim::kInverseLength, 1e3}, {"/um", Dim::kInverseLength, 1e6},
    {"rad/s", Dim::kFrequency, 1.0},   {"Hz", Dim::kFrequency, kTwoPi}, {"kHz", Dim::kFrequency, kTwoPi * 1e3},
    {"MHz", Dim::kFrequency, kTwoPi * 1e6}, {"GHz", Dim::kFrequency, kTwoPi * 1e9},
    {"THz", Dim::kFrequency, kTwoPi * 1e12}, {"W", Dim::kPower, 1.0}, {"mW", Dim::kPower, 1e-3},
    {"uW", Dim::kPower, 1e-6},         {"rad", Dim::kAngle, 1.0},       {"deg", Dim::kAngle, kPi / 180.0},
    {"pi", Dim::kAngle, kPi},          {"s2/m", Dim::kGvd, 1.0},        {"ps2/m", Dim::kGvd, 1e-24},
    {"ps2/km", Dim::kGvd, 1e-27},      {"fs2/mm", Dim::kGvd, 1e-27},    {"/W/m", Dim::kNonlinear, 1.0},
    {"/W/km", Dim::kNonlinear, 1e-3},
}};

const char* dim_name(Dim d) {
  switch (d) {
    case Dim::kNone: return "a plain number";
    case Dim::kLength: return "a length (m, cm, mm, um, nm)";
    case Dim::kInverseLength: return "an inverse length (/m, /cm, /mm, /um)";
    case Dim::kFrequency: return "a frequency (rad/s, Hz, kHz, MHz, GHz, THz)";
    case Dim::kPower: return "a power (W, mW, uW)";
    case Dim::kAngle: return "an angle (rad, deg, pi)";
    case Dim::kGvd: return "a dispersion (s2/m, ps2/m, ps2/km, fs2/mm)";
    case Dim::kNonlinear: return "a nonlinear factor (/W/m, /W/km)";
  }
  return "?";
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

struct Entry {
  std::string value;
  int line = 0;
};

struct Section {
  int line = 0;
  std::map<std::string, Entry> entries;
  std::set<std::string> used;
};

class Reader {
 public:
  Reader(std::string name, std::map<std::string, Section> sections)
      : name_(std::move(name)), sections_(std::move(sections)) {}

  [[noreturn]] void fail(int line, const std::string& msg) const { throw ConfigError(name_, line, msg); }

  bool has_section(const std::string& s) const { return sections_.count(s) > 0; }
  int section_line(const std::string& s) const {
    auto it = sections_.find(s);
    return it == sections_.end() ? 0 : it->second.line;
  }

  const Entry* find(const std::string& section, const std::string& key) {
    auto it = sections_.find(section);
    if (it == sections_.end()) return nullptr;
    auto e = it->second.entries.find(key);
    if (e == it->second.entries.end()) return nullptr;
    it->second.used.insert(key);
    return &e->second;
  }

  const Entry& require(const std::string& section, const std::string& key) {
    if (const Entry* e = find(section, key)) return *e;
    fail(section_line(section), fmt::format("[{}] is missing required key '{}'", section, key));
  }

  // Parses "<number> [unit]" and returns the SI value and the unit's dimension.
  std::pair<double, Dim> number(const Entry& e) const {
    const std::string& v = e.value;
    double x = 0;
    const char* first = v.data();
    const char* last = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(first, last, x);
    if (ec != std::errc() || !std::isfinite(x)) fail(e.line, fmt::format("'{}' does not start with a number", v));
    const std::string unit = trim(std::string_view(ptr, static_cast<std::size_t>(last - ptr)));
    if (unit.empty()) return {x, Dim::kNone};
    for (const Unit& u : kUnits)
      if (unit == u.name) return {x * u.scale, u.dim};
    fail(e.line, fmt::format("unknown unit '{}'", unit));
  }

  double quantity(const Entry& e, Dim dim) const {
    auto [x, d] = number(e);
    if (d != dim) fail(e.line, fmt::format("'{}' must be {}", e.value, dim_name(dim)));
    return x;
  }

  double quantity(const std::string& s, const std::string& k, Dim dim) { return quantity(require(s, k), dim); }

  std::optional<double> optional_quantity(const std::string& s, const std::string& k, Dim dim) {
    if (const Entry* e = find(s, k)) return quantity(*e, dim);
    return std::nullopt;
  }

  // Wavelength (length units) or frequency, returned as rad/s.
  double omega(const Entry& e) const {
    auto [x, d] = number(e);
    if (d == Dim::kLength) {
      if (!(x > 0)) fail(e.line, "wavelength must be positive");
      return wavelength_to_omega(x);
    }
    if (d == Dim::kFrequency) {
      if (!(x > 0)) fail(e.line, "frequency must be positive");
      return x;
    }
    fail(e.line, fmt::format("'{}' must be a wavelength or a frequency", e.value));
  }

  std::optional<double> optional_omega(const std::string& s, const std::string& k) {
    if (const Entry* e = find(s, k)) return omega(*e);
    return std::nullopt;
  }

  long integer(const Entry& e) const {
    long x = 0;
    const std::string& v = e.value;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size()) fail(e.line, fmt::format("'{}' is not an integer", v));
    return x;
  }

  template <typename T>
  T choice(const Entry& e, std::initializer_list<std::pair<const char*, T>> options) const {
    std::string known;
    for (const auto& [n, val] : options) {
      if (e.value == n) return val;
      known += known.empty() ? n : std::string(", ") + n;
    }
    fail(e.line, fmt::format("'{}' is not one of: {}", e.value, known));
  }

  bool boolean(const Entry& e) const { return choice<bool>(e, {{"true", true}, {"false", false}}); }

  void check_unused() const {
    for (const auto& [name, sec] : sections_)
      for (const auto& [key, entry] : sec.entries)
        if (!sec.used.count(key)) fail(entry.line, fmt::format("key '{}' does not apply to this [{}] section", key, name));
  }

 private:
  std::string name_;
  std::map<std::string, Section> sections_;
};

struct Line {
  std::string text;
  int number;
};

std::vector<Line> split_lines(const std::string& text) {
  std::vector<Line> out;
  std::istringstream in(text);
  std::string s;
  int n = 0;
  while (std::getline(in, s)) out.push_back({s, ++n});
  return out;
}

std::vector<Line> select_lines(const std::string& text, const std::string& name) {
  const std::string t = trim(text);
  if (!t.empty() && t.front() == '{') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(t);
    } catch (const std::exception& e) {
      throw ConfigError(name, 0, fmt::format("not a valid JSON report: {}", e.what()));
    }
    if (!doc.contains("config") || !doc["config"].is_string())
      throw ConfigError(name, 0, "JSON input has no embedded \"config\" string");
    return split_lines(doc["config"].get<std::string>());
  }
  std::vector<Line> lines = split_lines(text), embedded;
  for (const Line& l : lines)
    if (l.text.rfind("#!", 0) == 0) embedded.push_back({l.text.size() > 2 ? l.text.substr(l.text[2] == ' ' ? 3 : 2) : "", l.number});
  return embedded.empty() ? lines : embedded;
}

std::map<std::string, Section> parse_ini(const std::vector<Line>& lines, const std::string& name) {
  static const std::map<std::string, std::set<std::string>> kSections{
      {"waveguide", {"reference", "n_eff", "n_group", "loss", "beta2", "loss_convention"}},
      {"structure",
       {"kind", "length", "sigma_bus", "phase_offset", "length1", "length2", "sigma_bus1", "sigma_bus2",
        "phase_offset1", "phase_offset2", "pin_resonance1", "pin_resonance2", "align_to_pump", "geometry_split"}},
      {"coupler", {"type", "kappa", "length", "sigma_sx", "sigma_dx", "delta_phi", "cross", "x11", "x12", "x21", "x22"}},
      {"sweep", {"start", "stop", "points"}},
      {"fields", {"port", "carrier", "snap", "points"}},
      {"pump", {"mode", "carrier", "snap", "power", "bandwidth", "alpha_sq"}},
      {"nonlinear", {"gamma", "s_perp"}},
      {"rates", {"signal_order", "fields", "window", "ring_length"}},
      {"biphoton", {"points", "half_width", "fields"}},
      {"output", {"format", "path"}},
  };
  std::map<std::string, Section> out;
  Section* current = nullptr;
  std::string current_name;
  for (const Line& l : lines) {
    std::string s = l.text;
    for (const char* marker : {";", " #"}) {
      const auto pos = s.find(marker);
      if (pos != std::string::npos) s.erase(pos);
    }
    s = trim(s);
    if (s.empty() || s.front() == '#') continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(name, l.number, "unterminated section header");
      current_name = trim(s.substr(1, s.size() - 2));
      if (!kSections.count(current_name))
        throw ConfigError(name, l.number, fmt::format("unknown section [{}]", current_name));
      if (out.count(current_name)) throw ConfigError(name, l.number, fmt::format("duplicate section [{}]", current_name));
      current = &out[current_name];
      current->line = l.number;
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(name, l.number, "expected 'key = value'");
    if (!current) throw ConfigError(name, l.number, "key outside of any section");
    const std::string key = trim(s.substr(0, eq)), value = trim(s.substr(eq + 1));
    if (key.empty() || value.empty()) throw ConfigError(name, l.number, "empty key or value");
    if (!kSections.at(current_name).count(key))
      throw ConfigError(name, l.number, fmt::format("unknown key '{}' in [{}]", key, current_name));
    if (current->entries.count(key))
      throw ConfigError(name, l.number, fmt::format("duplicate key '{}' in [{}]", key, current_name));
    current->entries[key] = {value, l.number};
  }
  return out;
}

std::complex<double> complex_entry(const Reader& r, const Entry& e) {
  std::istringstream in(e.value);
  double re = 0, im = 0;
  std::string rest;
  if (!(in >> re >> im) || (in >> rest)) r.fail(e.line, fmt::format("'{}' must be two numbers: real imag", e.value));
  return {re, im};
}

FieldModel field_model(const Reader& r, const Entry& e) {
  return r.choice<FieldModel>(e, {{"lorentzian", FieldModel::kLorentzian}, {"solved", FieldModel::kSolved}});
}

template <typename F>
void guarded(Reader& r, int line, F&& f) {
  try {
    f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    r.fail(line, e.what());
  } catch (const std::domain_error& e) {
    r.fail(line, e.what());
  }
}

std::string g17(double x) { return fmt::format("{:.17g}", x); }

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& name) {
  Reader r(name, parse_ini(select_lines(text, name), name));
  RunConfig cfg;
  cfg.source = name;

  // [waveguide]
  if (!r.has_section("waveguide")) r.fail(0, "missing [waveguide] section");
  Waveguide& wg = cfg.structure.waveguide;
  wg.omega0 = r.omega(r.require("waveguide", "reference"));
  wg.n_eff = r.quantity("waveguide", "n_eff", Dim::kNone);
  cfg.n_group = r.quantity("waveguide", "n_group", Dim::kNone);
  if (!(cfg.n_group > 0)) r.fail(r.require("waveguide", "n_group").line, "n_group must be positive");
  wg.v_g = kSpeedOfLight / cfg.n_group;
  wg.xi = r.optional_quantity("waveguide", "loss", Dim::kInverseLength).value_or(0.0);
  wg.beta2 = r.optional_quantity("waveguide", "beta2", Dim::kGvd).value_or(0.0);
  if (const Entry* e = r.find("waveguide", "loss_convention"))
    wg.loss_convention = r.choice<LossConvention>(
        *e, {{"field", LossConvention::kFieldAttenuation}, {"literal", LossConvention::kLiteralExponent}});
  guarded(r, r.section_line("waveguide"), [&] { wg.validate(); });

  // [structure] and [coupler]
  if (!r.has_section("structure")) r.fail(0, "missing [structure] section");
  const Entry& kind = r.require("structure", "kind");
  const bool ring = r.choice<bool>(kind, {{"ring", true}, {"double", false}});
  if (const Entry* e = r.find("structure", "geometry_split")) cfg.structure.geometry_split = r.quantity(*e, Dim::kNone);
  if (ring) {
    if (r.has_section("coupler")) r.fail(r.section_line("coupler"), "a ring structure takes no [coupler] section");
    SingleRing s;
    s.L = r.quantity("structure", "length", Dim::kLength);
    s.sigma_bus = r.quantity("structure", "sigma_bus", Dim::kNone);
    s.phase_offset = r.optional_quantity("structure", "phase_offset", Dim::kAngle).value_or(0.0);
    cfg.structure.kind = s;
  } else {
    DoubleRacetrack d;
    d.L1 = r.quantity("structure", "length1", Dim::kLength);
    d.L2 = r.quantity("structure", "length2", Dim::kLength);
    d.sigma_bus1 = r.quantity("structure", "sigma_bus1", Dim::kNone);
    d.sigma_bus2 = r.quantity("structure", "sigma_bus2", Dim::kNone);
    d.phase_offset1 = r.optional_quantity("structure", "phase_offset1", Dim::kAngle).value_or(0.0);
    d.phase_offset2 = r.optional_quantity("structure", "phase_offset2", Dim::kAngle).value_or(0.0);
    if (!r.has_section("coupler")) r.fail(kind.line, "a double structure needs a [coupler] section");
    const Entry& type = r.require("coupler", "type");
    const int type_line = type.line;
    const std::string t = type.value;
    const double length =
        t == "dc" ? r.quantity("coupler", "length", Dim::kLength)
                  : r.optional_quantity("coupler", "length", Dim::kLength).value_or(0.0);
    if (t == "dc") {
      d.coupler = DirectionalCoupler{r.quantity("coupler", "kappa", Dim::kInverseLength), length};
    } else if (t == "mzi") {
      MachZehnder m;
      m.sigma_sx = r.quantity("coupler", "sigma_sx", Dim::kNone);
      m.sigma_dx = r.quantity("coupler", "sigma_dx", Dim::kNone);
      m.delta_phi = r.quantity("coupler", "delta_phi", Dim::kAngle);
      m.length = length;
      d.coupler = m;
    } else if (t == "symmetric") {
      const double cross = r.quantity("coupler", "cross", Dim::kNone);
      cfg.symmetric_cross = cross;
      guarded(r, type_line, [&] { d.coupler = symmetric_cross_coupler(cross, length); });
    } else if (t == "generic") {
      Matrix2c<double> x;
      x << complex_entry(r, r.require("coupler", "x11")), complex_entry(r, r.require("coupler", "x12")),
          complex_entry(r, r.require("coupler", "x21")), complex_entry(r, r.require("coupler", "x22"));
      guarded(r, type_line, [&] { d.coupler = make_generic_unitary(x, length); });
    } else {
      r.fail(type_line, fmt::format("'{}' is not one of: dc, mzi, symmetric, generic", t));
    }
    cfg.structure.kind = d;
  }
  guarded(r, r.section_line("structure"), [&] { cfg.structure.validate(); });

  const auto pin1 = r.optional_omega("structure", "pin_resonance1");
  const auto pin2 = r.optional_omega("structure", "pin_resonance2");
  const Entry* align = r.find("structure", "align_to_pump");
  const bool align_to_pump = align && r.boolean(*align);
  if (pin1) guarded(r, r.section_line("structure"), [&] {
      set_phase_offset(cfg.structure, 1, 0.0);
      set_phase_offset(cfg.structure, 1, phase_offset_for_resonance(cfg.structure, 1, *pin1));
    });

  // [pump]
  if (r.has_section("pump")) {
    PumpConfig& p = cfg.pump;
    p.present = true;
    if (const Entry* e = r.find("pump", "mode"))
      p.mode = r.choice<PumpMode>(*e, {{"cw", PumpMode::kCw}, {"pulsed", PumpMode::kPulsed}});
    p.omega = r.omega(r.require("pump", "carrier"));
    const Entry* snap = r.find("pump", "snap");
    if (!snap || r.boolean(*snap))
      guarded(r, r.section_line("pump"), [&] { p.omega = nearest_resonance(cfg.structure, 1, p.omega).omega_m; });
    p.power = r.optional_quantity("pump", "power", Dim::kPower).value_or(0.0);
    if (!(p.power >= 0)) r.fail(r.require("pump", "power").line, "power must be non-negative");
    if (p.mode == PumpMode::kPulsed) {
      const Entry& bw = r.require("pump", "bandwidth");
      const auto g = bw.value.rfind("gamma");
      if (g != std::string::npos && g + 5 == bw.value.size()) {
        const double x = r.quantity(Entry{trim(bw.value.substr(0, g)), bw.line}, Dim::kNone);
        guarded(r, bw.line, [&] { p.bandwidth = x * resonance_info(cfg.structure, 1, p.omega).gamma_m; });
      } else {
        p.bandwidth = r.quantity(bw, Dim::kFrequency);
      }
      if (!(p.bandwidth > 0)) r.fail(bw.line, "bandwidth must be positive");
      if (const Entry* e = r.find("pump", "alpha_sq")) {
        p.alpha_sq = r.quantity(*e, Dim::kNone);
        if (!(*p.alpha_sq > 0)) r.fail(e->line, "alpha_sq must be positive");
      } else if (!(p.power > 0)) {
        r.fail(r.section_line("pump"), "a pulsed pump needs alpha_sq or a positive power");
      }
    } else if (!(p.power > 0)) {
      r.fail(r.section_line("pump"), "a cw pump needs a positive power");
    }
  }
  if (align_to_pump) {
    if (ring) r.fail(align->line, "align_to_pump needs a double structure");
    if (!cfg.pump.present) r.fail(align->line, "align_to_pump needs a [pump] section");
    if (pin2) r.fail(align->line, "align_to_pump and pin_resonance2 are mutually exclusive");
    guarded(r, align->line, [&] {
      set_phase_offset(cfg.structure, 2, 0.0);
      set_phase_offset(cfg.structure, 2, phase_offset_for_resonance(cfg.structure, 2, cfg.pump.omega));
    });
  }
  if (pin2) {
    if (ring) r.fail(r.section_line("structure"), "pin_resonance2 needs a double structure");
    guarded(r, r.section_line("structure"), [&] {
      set_phase_offset(cfg.structure, 2, 0.0);
      set_phase_offset(cfg.structure, 2, phase_offset_for_resonance(cfg.structure, 2, *pin2));
    });
  }

  // [sweep]
  if (r.has_section("sweep")) {
    SweepConfig& s = cfg.sweep;
    s.present = true;
    const double a = r.omega(r.require("sweep", "start")), b = r.omega(r.require("sweep", "stop"));
    s.omega_lo = std::min(a, b);
    s.omega_hi = std::max(a, b);
    const Entry& pts = r.require("sweep", "points");
    s.points = r.integer(pts);
    if (s.points < 1) r.fail(pts.line, "points must be >= 1");
    if (s.points > 1 && !(s.omega_hi > s.omega_lo)) r.fail(pts.line, "start and stop must differ");
  }

  // [fields]
  if (r.has_section("fields")) {
    FieldsConfig& f = cfg.fields;
    f.present = true;
    f.port = r.choice<Port>(r.require("fields", "port"), {{"in", Port::kIn}, {"add", Port::kAdd}});
    f.omega = r.omega(r.require("fields", "carrier"));
    if (const Entry* e = r.find("fields", "snap")) {
      const int res = r.choice<int>(*e, {{"none", 0}, {"1", 1}, {"2", 2}});
      if (res == 2 && ring) r.fail(e->line, "a ring has no resonator 2");
      if (res) guarded(r, e->line, [&] { f.omega = nearest_resonance(cfg.structure, res, f.omega).omega_m; });
    }
    if (const Entry* e = r.find("fields", "points")) {
      f.points = r.integer(*e);
      if (f.points < 2) r.fail(e->line, "points must be >= 2");
    }
  }

  // [nonlinear]
  if (r.has_section("nonlinear")) {
    cfg.nonlinear_present = true;
    cfg.nonlinear.gamma_nl = r.quantity("nonlinear", "gamma", Dim::kNonlinear);
    if (const Entry* e = r.find("nonlinear", "s_perp")) cfg.nonlinear.s_perp = r.quantity(*e, Dim::kNone);
    guarded(r, r.section_line("nonlinear"), [&] { cfg.nonlinear.validate(); });
  }

  // [rates]
  if (const Entry* e = r.find("rates", "signal_order")) {
    cfg.rates.signal_order = r.integer(*e);
    if (cfg.rates.signal_order < 1) r.fail(e->line, "signal_order must be >= 1");
  }
  if (const Entry* e = r.find("rates", "fields")) cfg.rates.fields = field_model(r, *e);
  if (const Entry* e = r.find("rates", "window")) {
    cfg.rates.window_gammas = r.quantity(*e, Dim::kNone);
    if (!(cfg.rates.window_gammas > 0)) r.fail(e->line, "window must be positive");
  }
  if (const Entry* e = r.find("rates", "ring_length")) {
    cfg.rates.ring_length = r.quantity(*e, Dim::kLength);
    if (!(*cfg.rates.ring_length > 0)) r.fail(e->line, "ring_length must be positive");
  }

  // [biphoton]
  if (const Entry* e = r.find("biphoton", "points")) {
    cfg.biphoton.points_per_segment = r.integer(*e);
    if (cfg.biphoton.points_per_segment < 5) r.fail(e->line, "points must be >= 5");
  }
  if (const Entry* e = r.find("biphoton", "half_width")) {
    cfg.biphoton.half_width_gammas = r.quantity(*e, Dim::kNone);
    if (!(cfg.biphoton.half_width_gammas > 0)) r.fail(e->line, "half_width must be positive");
  }
  if (const Entry* e = r.find("biphoton", "fields")) cfg.biphoton.fields = field_model(r, *e);

  // [output]
  if (const Entry* e = r.find("output", "format"))
    cfg.output.format = r.choice<std::string>(*e, {{"csv", "csv"}, {"json", "json"}});
  if (const Entry* e = r.find("output", "path")) cfg.output.path = e->value;

  r.check_unused();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open config file '{}'", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError(fmt::format("cannot read config file '{}'", path));
  return parse_config(buf.str(), path);
}

std::string RunConfig::resolved_text() const {
  std::string out;
  auto line = [&](const std::string& key, const std::string& value) { out += key + " = " + value + "\n"; };
  auto si = [&](const std::string& key, double v, const char* unit) {
    line(key, unit[0] ? g17(v) + " " + unit : g17(v));
  };
  const Waveguide& wg = structure.waveguide;
  out += "[waveguide]\n";
  si("reference", wg.omega0, "rad/s");
  si("n_eff", wg.n_eff, "");
  si("n_group", n_group, "");
  si("loss", wg.xi, "/m");
  si("beta2", wg.beta2, "s2/m");
  line("loss_convention", wg.loss_convention == LossConvention::kFieldAttenuation ? "field" : "literal");

  out += "\n[structure]\n";
  if (const auto* ring = std::get_if<SingleRing>(&structure.kind)) {
    line("kind", "ring");
    si("length", ring->L, "m");
    si("sigma_bus", ring->sigma_bus, "");
    si("phase_offset", ring->phase_offset, "rad");
    si("geometry_split", structure.geometry_split, "");
  } else {
    const auto& d = std::get<DoubleRacetrack>(structure.kind);
    line("kind", "double");
    si("length1", d.L1, "m");
    si("length2", d.L2, "m");
    si("sigma_bus1", d.sigma_bus1, "");
    si("sigma_bus2", d.sigma_bus2, "");
    si("phase_offset1", d.phase_offset1, "rad");
    si("phase_offset2", d.phase_offset2, "rad");
    si("geometry_split", structure.geometry_split, "");
    out += "\n[coupler]\n";
    if (const auto* dc = std::get_if<DirectionalCoupler>(&d.coupler)) {
      line("type", "dc");
      si("kappa", dc->kappa, "/m");
      si("length", dc->length, "m");
    } else if (const auto* m = std::get_if<MachZehnder>(&d.coupler)) {
      line("type", "mzi");
      si("sigma_sx", m->sigma_sx, "");
      si("sigma_dx", m->sigma_dx, "");
      si("delta_phi", m->delta_phi, "rad");
      si("length", m->length, "m");
    } else {
      const auto& g = std::get<GenericUnitary>(d.coupler);
      if (symmetric_cross) {
        line("type", "symmetric");
        si("cross", *symmetric_cross, "");
      } else {
        line("type", "generic");
        const char* names[2][2] = {{"x11", "x12"}, {"x21", "x22"}};
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) line(names[i][j], g17(g.x(i, j).real()) + " " + g17(g.x(i, j).imag()));
      }
      si("length", g.length, "m");
    }
  }

  if (sweep.present) {
    out += "\n[sweep]\n";
    si("start", sweep.omega_lo, "rad/s");
    si("stop", sweep.omega_hi, "rad/s");
    line("points", std::to_string(sweep.points));
  }
  if (fields.present) {
    out += "\n[fields]\n";
    line("port", fields.port == Port::kIn ? "in" : "add");
    si("carrier", fields.omega, "rad/s");
    line("snap", "none");
    line("points", std::to_string(fields.points));
  }
  if (pump.present) {
    out += "\n[pump]\n";
    line("mode", pump.mode == PumpMode::kCw ? "cw" : "pulsed");
    si("carrier", pump.omega, "rad/s");
    line("snap", "false");
    si("power", pump.power, "W");
    if (pump.mode == PumpMode::kPulsed) {
      si("bandwidth", pump.bandwidth, "rad/s");
      if (pump.alpha_sq) si("alpha_sq", *pump.alpha_sq, "");
    }
  }
  if (nonlinear_present) {
    out += "\n[nonlinear]\n";
    si("gamma", nonlinear.gamma_nl, "/W/m");
    if (nonlinear.s_perp) si("s_perp", *nonlinear.s_perp, "");
  }
  out += "\n[rates]\n";
  line("signal_order", std::to_string(rates.signal_order));
  line("fields", to_string(rates.fields));
  si("window", rates.window_gammas, "");
  if (rates.ring_length) si("ring_length", *rates.ring_length, "m");
  out += "\n[biphoton]\n";
  line("points", std::to_string(biphoton.points_per_segment));
  si("half_width", biphoton.half_width_gammas, "");
  line("fields", to_string(biphoton.fields));
  out += "\n[output]\n";
  line("format", output.format);
  if (!output.path.empty()) line("path", output.path);
  return out;
}

}  // namespace ringpair
