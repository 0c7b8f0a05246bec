// Copyright 2026 The Polagenda Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: polagenda <subcommand> [--config FILE] [--key V].

#include <cstdint>
#include <exception>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "polagenda/errors.h"
#include "polagenda/pipeline.h"

namespace {

using Runner = void (*)(const polagenda::RunConfig&, std::ostream&);

struct Subcommand {
  const char* name;
  const char* help;
  Runner run;
};

const Subcommand kSubcommands[] = {
    {"preprocess", "tokenize tweets and the labeled corpus",
     polagenda::RunPreprocess},
    {"train-supervised", "train, evaluate and apply the supervised classifier",
     polagenda::RunTrainSupervised},
    {"fit-lda", "fit the topic model and assign topics",
     polagenda::RunFitLda},
    {"sweep-k", "fit one topic model per K with diagnostics",
     polagenda::RunSweepK},
    {"coherence", "NPMI coherence of the fitted topics",
     polagenda::RunCoherence},
    {"compare", "Cohen's kappa between the two models on policy tweets",
     polagenda::RunCompare},
    {"report", "distribution, breakdown and feature tables",
     polagenda::RunReport},
};

std::string FlagName(const std::string& key) {
  std::string flag = "--" + key;
  for (char& c : flag) {
    if (c == '_') c = '-';
  }
  return flag;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Policy agenda classification of legislators' tweets"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  app.add_option("--config", config_path, "JSON run configuration");

  const nlohmann::json defaults = polagenda::RunConfig::Defaults();
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  std::map<std::string, bool> flags;
  for (const auto& [key, value] : defaults.items()) {
    if (value.is_boolean()) {
      flags[key] = false;
      options[key] = app.add_flag(FlagName(key), flags[key],
                                  "override config key " + key);
    } else {
      options[key] = app.add_option(FlagName(key), values[key],
                                    "override config key " + key);
    }
  }

  Runner runner = nullptr;
  for (const Subcommand& sc : kSubcommands) {
    CLI::App* sub = app.add_subcommand(sc.name, sc.help);
    sub->callback([&runner, &sc] { runner = sc.run; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    nlohmann::json config = config_path.empty()
                                ? defaults
                                : polagenda::LoadConfigJson(config_path);
    for (const auto& [key, option] : options) {
      if (option->count() == 0) continue;
      if (flags.contains(key)) {
        config[key] = flags[key];
      } else {
        polagenda::ApplyOverride(config, key, values[key]);
      }
    }
    polagenda::RunConfig run = polagenda::RunConfig::FromJson(config);
    runner(run, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return polagenda::ExitCodeFor(e);
  }
  return 0;
}
