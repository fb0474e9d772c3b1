/*
 * Copyright 2026 The kasi Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "kasi_cli/commands.hpp"

using namespace kasi;

namespace {

std::size_t env_budget()
{
    if (const char* v = std::getenv("KASI_STATE_BUDGET")) {
        try {
            return static_cast<std::size_t>(std::stoull(v));
        } catch (const std::exception&) {
            std::cerr << "ignoring malformed KASI_STATE_BUDGET\n";
        }
    }
    return 1'000'000;
}

void add_config(CLI::App* sub)
{
    // expanded by expand_config before parsing; declared so it shows in --help
    sub->add_option("--config", "read key=value defaults from a file (command-line flags win)");
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

/*
 * Replace `--config FILE` by the options it lists. Each non-blank line not
 * starting with '#' is `key = value`; it becomes `--key value`, placed before
 * the command-line arguments so those take precedence. List options named
 * on the command line are not extended. `true` turns a flag on, `false` leaves it off.
 */
std::vector<std::string> expand_config(std::vector<std::string> args)
{
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + 2));
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (path.empty()) return args;
    std::ifstream in(path);
    if (!in) throw cli::UsageError("cannot open config file '" + path + "'");
    const auto given = [&](const std::string& flag) {
        for (const std::string& a : args) {
            if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
        }
        return false;
    };
    std::vector<std::string> extra;
    std::string line;
    for (std::size_t n = 1; std::getline(in, line); ++n) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw cli::UsageError(path + ":" + std::to_string(n) + ": expected key=value");
        }
        const std::string flag = "--" + trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (given(flag) || value == "false") continue;
        extra.push_back(flag);
        if (value != "true") extra.push_back(value);
    }
    // right after the subcommand name
    args.insert(args.begin() + (args.empty() ? 0 : 1), extra.begin(), extra.end());
    return args;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"kasi: bounded-energy and lower-bound problems on mean-payoff games"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "kasi 0.1.0");
    // config values are inserted before the user's arguments, so the last value wins
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    cli::RunConfig run;
    std::string bound_text;
    auto* solve = app.add_subcommand("solve", "solve lb or lwub_b on a game file");
    add_config(solve);
    solve->add_option("input", run.input, "game file, or - for stdin")->capture_default_str();
    solve->add_option("--algorithm,-a", run.algorithm, "kasi or vi")
        ->check(CLI::IsMember({"kasi", "vi"}))
        ->capture_default_str();
    solve->add_option("--problem,-p", run.problem, "lb or lwub")
        ->check(CLI::IsMember({"lb", "lwub"}))
        ->capture_default_str();
    solve->add_option("--bound,-b", bound_text, "energy bound b (lwub only)");
    solve->add_option("--output,-o", run.output, "result file")->capture_default_str();
    solve->add_option("--emit-strategy", run.emit_strategy, "write the Max strategy (kasi only)");
    solve->add_option("--emit-witness", run.emit_witness, "write the Min witness (kasi only)");
    solve->add_option("--vi-variant", run.vi_variant, "plain or worklist")
        ->check(CLI::IsMember({"plain", "worklist"}))
        ->capture_default_str();
    solve->add_flag("--check-conditions", run.check_conditions, "check solver entry conditions each iteration");

    GenSpec spec;
    std::string family = "sprand", gen_output = "-";
    auto* gen = app.add_subcommand("gen", "generate a game");
    add_config(gen);
    gen->add_option("--family,-f", family, "sprand, torus, layered, collect, supply, taxi, uniform")
        ->check(CLI::IsMember({"sprand", "torus", "layered", "collect", "supply", "taxi", "uniform"}))
        ->capture_default_str();
    gen->add_option("--seed", spec.seed)->capture_default_str();
    gen->add_option("--n", spec.n, "vertices (sprand, uniform)")->capture_default_str();
    gen->add_option("--edge-factor", spec.edge_factor, "edges per vertex (sprand)")->capture_default_str();
    gen->add_option("--max-out-degree", spec.max_out_degree, "(uniform)")->capture_default_str();
    gen->add_option("--rows", spec.rows, "torus rows, layers, or grid height")->capture_default_str();
    gen->add_option("--cols", spec.cols, "torus cols, layer width, or grid width")->capture_default_str();
    gen->add_option("--added-cycles", spec.added_cycles)->capture_default_str();
    gen->add_option("--cycle-length", spec.cycle_length, "0 means cols")->capture_default_str();
    gen->add_option("--weight-lo", spec.weight_lo)->capture_default_str();
    gen->add_option("--weight-hi", spec.weight_hi)->capture_default_str();
    gen->add_option("--shift", spec.shift, "subtracted from every synthetic weight")->capture_default_str();
    gen->add_option("--items", spec.items)->capture_default_str();
    gen->add_option("--docks", spec.docks)->capture_default_str();
    gen->add_option("--obstacles-per-mille", spec.obstacles_per_mille)->capture_default_str();
    gen->add_option("--move-weight", spec.move_weight)->capture_default_str();
    gen->add_option("--idle-weight", spec.idle_weight)->capture_default_str();
    gen->add_option("--recharge-weight", spec.recharge_weight)->capture_default_str();
    gen->add_option("--locations", spec.locations)->capture_default_str();
    gen->add_option("--max-request", spec.max_request)->capture_default_str();
    gen->add_option("--refill", spec.refill)->capture_default_str();
    gen->add_option("--hop-weight", spec.hop_weight)->capture_default_str();
    gen->add_option("--fare-per-hop", spec.fare_per_hop)->capture_default_str();
    gen->add_option("--drive-weight", spec.drive_weight)->capture_default_str();
    gen->add_option("--output,-o", gen_output)->capture_default_str();

    cli::VerifyConfig ver;
    ver.budget = env_budget();
    auto* verify = app.add_subcommand("verify", "cross-check kasi and vi against the brute-force oracle");
    add_config(verify);
    verify->add_option("inputs", ver.inputs, "game files to check for b = 0..bound-max (default: random games)")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    verify->add_option("--trials", ver.trials)->capture_default_str();
    verify->add_option("--n-max", ver.n_max)->capture_default_str();
    verify->add_option("--weight-max", ver.weight_max)->capture_default_str();
    verify->add_option("--bound-max", ver.bound_max)->capture_default_str();
    verify->add_option("--max-out-degree", ver.max_out_degree)->capture_default_str();
    verify->add_option("--seed", ver.seed)->capture_default_str();
    verify->add_option("--budget", ver.budget, "oracle state budget (env KASI_STATE_BUDGET)")->capture_default_str();
    verify->add_option("--counterexample", ver.counterexample, "where a shrunk counterexample goes")
        ->capture_default_str();

    cli::BenchConfig bench;
    auto* bench_cmd = app.add_subcommand("bench", "time kasi and vi, write CSV");
    add_config(bench_cmd);
    bench_cmd->add_option("inputs", bench.inputs, "game files")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    bench_cmd->add_flag("--desk", bench.desk, "include the built-in desk-scale corpus");
    bench_cmd->add_option("--algorithms", bench.algorithms)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)->delimiter(',')->capture_default_str();
    bench_cmd->add_option("--problems", bench.problems)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)->delimiter(',')->capture_default_str();
    bench_cmd->add_option("--bound", bench.bound, "lwub bound (default: half the average finite lb)");
    bench_cmd->add_option("--repeat", bench.repeat, "runs per cell; the median is reported")->capture_default_str();
    bench_cmd->add_option("--timeout", bench.timeout, "seconds before vi is abandoned")->capture_default_str();
    bench_cmd->add_option("--seed", bench.seed, "seed for --desk")->capture_default_str();
    bench_cmd->add_option("--output,-o", bench.output)->capture_default_str();

    try {
        std::vector<std::string> args = expand_config({argv + 1, argv + argc});
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const cli::UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kInputError;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? cli::kOk : cli::kInputError;
    }

    if (solve->parsed()) {
        if (!bound_text.empty()) {
            try {
                std::size_t used = 0;
                run.bound = std::stoll(bound_text, &used);
                if (used != bound_text.size()) throw std::invalid_argument(bound_text);
            } catch (const std::exception&) {
                std::cerr << "--bound must be an integer\n";
                return cli::kInputError;
            }
        }
        return cli::cmd_solve(run);
    }
    if (gen->parsed()) {
        spec.family = *family_from_string(family);
        return cli::cmd_gen(spec, gen_output);
    }
    if (verify->parsed()) return cli::cmd_verify(ver);
    return cli::cmd_bench(bench);
}
