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

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ringpair/commands.hpp"
#include "ringpair/config.hpp"
#include "ringpair/errors.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

}  // namespace

int main(int argc, char** argv) {
  using namespace ringpair;
  CLI::App app{"SFWM pair generation in coupled racetrack resonators"};
  app.require_subcommand(1);

  std::string config_path;
  CommandOptions options;
  std::string out, format;

  const std::pair<Command, const char*> commands[] = {
      {Command::kSpectrum, "per-port transmission spectra"},
      {Command::kEnhance, "intensity enhancement per resonator"},
      {Command::kFields, "intensity through the coupler"},
      {Command::kRates, "cw pair-generation rate report"},
      {Command::kBiphoton, "pulsed biphoton wavefunction"},
  };
  Command selected = Command::kSpectrum;
  for (const auto& [cmd, help] : commands) {
    CLI::App* sub = app.add_subcommand(to_string(cmd), help);
    sub->add_option("--config", config_path, "config file")->required();
    sub->add_option("--out", out, "output path, - for stdout");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", options.threads, "worker threads, 0 for all cores");
    sub->callback([&selected, c = cmd] { selected = c; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  if (!out.empty()) options.out = out;
  if (!format.empty()) options.format = format;

  try {
    const RunConfig config = load_config(config_path);
    const std::string text = run_command(selected, config, options);
    write_artifact(text, output_path(config, options));
  } catch (const IoError& e) {
    std::cerr << "ringpair: I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ConfigError& e) {
    std::cerr << "ringpair: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericError& e) {
    std::cerr << "ringpair: numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "ringpair: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "ringpair: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "ringpair: numeric error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return 0;
}
