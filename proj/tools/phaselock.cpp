// Copyright 2026 The phaselock Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Command-line driver: phaselock <command> [--config FILE] [--set key=value]...

#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "phaselock/commands.hpp"
#include "phaselock/config.hpp"
#include "phaselock/parallel.hpp"

namespace {

std::string read_file(const std::string &path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw phaselock::Error(phaselock::ErrorKind::Config, "cannot read config file " + path);
    }
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Phase-locked Morse wave packets: states, Wigner functions and sub-Planck metrics"};
    app.set_version_flag("--version", std::string(phaselock::kVersion));
    std::string command;
    std::string config_path;
    std::vector<std::string> overrides;
    bool quiet = false;
    app.add_option("command", command, "eigen | state | wigner | carpet | metrics | sensitivity | table1 | table2")
        ->required()
        ->check(CLI::IsMember(phaselock::command_names()));
    app.add_option("-c,--config", config_path, "key=value configuration file");
    app.add_option("-s,--set", overrides, "override one key, e.g. --set theta=pi/2")->take_all();
    app.add_flag("-q,--quiet", quiet, "suppress progress messages");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        const std::string text = config_path.empty() ? std::string() : read_file(config_path);
        phaselock::RunConfig cfg = phaselock::parse_config(text, overrides);
        cfg.workers = phaselock::workers_from_env(cfg.workers);
        std::ostringstream sink;
        std::ostream &log = quiet ? static_cast<std::ostream &>(sink) : std::cerr;
        const auto result = phaselock::run_command(command, cfg, log);
        for (const auto &f : result.files) {
            std::cout << f.string() << '\n';
        }
        return 0;
    } catch (const phaselock::Error &e) {
        std::cerr << "phaselock: " << e.what() << '\n';
        return phaselock::exit_status(e.kind());
    } catch (const std::exception &e) {
        std::cerr << "phaselock: internal error: " << e.what() << '\n';
        return 2;
    }
}
