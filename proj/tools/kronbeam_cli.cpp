// SPDX-License-Identifier: Apache-2.0
//
// kronbeam - Kronecker-factor analog beamforming and two-stage channel
// estimation for large uniform linear arrays
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
//
// Command-line simulator. Subcommands:
//   spectrum  - beam-scan magnitude profile of one training observation
//   beamform  - beamformer weights, nulling residuals and rates, one scenario
//   estimate  - two-stage angle/gain estimates for one scenario
//   sweep     - Monte Carlo parameter sweep (preset or config file)
//   bench     - construction-time benchmark table
//
// All output is CSV with a header row; identical inputs (config, seed)
// produce byte-identical output. Exit codes: 0 success, 2 usage, 3 invalid
// configuration, 4 insufficient Kronecker factors, 5 degenerate scenario,
// 6 target angle in null set, 7 I/O failure, 8 internal error.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <kronbeam/kronbeam.hpp>

namespace
{

using namespace kronbeam;

// Common options shared by every subcommand.
struct CommonOptions
{
    std::string configPath;
    std::string preset;
    std::string outPath;
    std::vector<std::string> overrides;
    std::uint64_t seed = 0;
    bool seedGiven = false;
    int threads = 1;
};

void add_common_options(CLI::App* sub, CommonOptions& opt)
{
    sub->add_option("--config", opt.configPath, "Experiment configuration file")
        ->envname("KRONBEAM_CONFIG");
    sub->add_option("--preset", opt.preset, "Named preset experiment")
        ->envname("KRONBEAM_PRESET");
    sub->add_option("--out", opt.outPath, "Output CSV path (default: stdout)")
        ->envname("KRONBEAM_OUT");
    sub->add_option("--set", opt.overrides,
                    "Override a configuration key (key=value, repeatable)");
    sub->add_option_function<std::uint64_t>(
           "--seed",
           [&opt](const std::uint64_t& v) {
               opt.seed = v;
               opt.seedGiven = true;
           },
           "Random seed (default " + std::to_string(kDefaultSeed) + ")")
        ->envname("KRONBEAM_SEED");
    sub->add_option("--threads", opt.threads, "Worker threads for Monte Carlo trials")
        ->envname("KRONBEAM_THREADS")
        ->check(CLI::PositiveNumber);
}

// Map `--set key=value` pairs onto the same sectioned settings the config
// file uses, so overrides go through identical validation.
ParsedSettings settings_from_overrides(const std::vector<std::string>& overrides)
{
    static const std::map<std::string, int> sectionOf = {
        {"n", 0},      {"k", 0},    {"m", 0},      {"l", 0},     {"z", 0},
        {"param", 1},  {"from", 1}, {"to", 1},     {"points", 1}, {"scale", 1},
        {"trials", 2}, {"seed", 2}, {"methods", 2}};

    ParsedSettings s;
    for (const std::string& kv : overrides)
    {
        std::size_t eq = kv.find('=');
        if (eq == std::string::npos)
            throw ConfigError("override '" + kv + "': expected key=value");
        std::string key = kv.substr(0, eq);
        std::string value = kv.substr(eq + 1);
        auto it = sectionOf.find(key);
        if (it == sectionOf.end())
            throw ConfigError("override '" + key + "': unknown key");
        auto& section = it->second == 0 ? s.system : (it->second == 1 ? s.sweep : s.run);
        section[key] = value; // the last repetition of a key wins
    }
    return s;
}

ExperimentSpec build_spec(const CommonOptions& opt)
{
    ExperimentSpec spec;
    if (!opt.preset.empty())
        spec = make_preset(opt.preset);

    if (!opt.configPath.empty())
    {
        std::ifstream in(opt.configPath);
        if (!in)
            throw std::ios_base::failure("cannot read config file '" + opt.configPath + "'");
        std::ostringstream text;
        text << in.rdbuf();
        spec = experiment_from_settings(parse_config(text.str()), spec);
    }

    if (!opt.overrides.empty())
        spec = experiment_from_settings(settings_from_overrides(opt.overrides), spec);

    if (opt.seedGiven)
        spec.seed = opt.seed;
    spec.threads = opt.threads;
    return spec;
}

void emit(const Table& table, const CommonOptions& opt)
{
    if (opt.outPath.empty())
    {
        write_csv(std::cout, table);
        return;
    }
    std::ofstream out(opt.outPath, std::ios::binary);
    if (!out)
        throw std::ios_base::failure("cannot open output file '" + opt.outPath + "'");
    write_csv(out, table);
    if (!out)
        throw std::ios_base::failure("error writing output file '" + opt.outPath + "'");
}

// Shared single-scenario setup for `beamform` and `estimate`: one channel
// realization with the minimum angular separation enforced, plus pilot books
// and training noise drawn from derived sub-streams.
Scenario draw_cli_scenario(const ExperimentSpec& spec)
{
    spec.base.validate();
    RngStream root(spec.seed);
    return draw_scenario_separated(spec.base, root.derive(0, 0), spec.minSeparation);
}

int run_sweep(const ExperimentSpec& specIn, const CommonOptions& opt)
{
    ExperimentSpec spec = specIn;
    // A bare [system] configuration gets the full method set by default;
    // the library itself insists on an explicit choice.
    if (spec.methods.empty())
    {
        if (spec.kind == "rate")
            spec.methods = {"kron", "full_mmse", "equal_gain", "analog_mmse"};
        else if (spec.kind == "estimation")
            spec.methods = {"cc", "zf"};
    }
    emit(run_experiment(spec), opt);
    return 0;
}

int run_spectrum(ExperimentSpec spec, const CommonOptions& opt)
{
    spec.kind = "spectrum";
    emit(run_experiment(spec), opt);
    return 0;
}

int run_bench(ExperimentSpec spec, const CommonOptions& opt)
{
    spec.kind = "bench";
    if (spec.benchSizes.empty())
        spec.benchSizes = {128, 256, 512, 1024, 2048};
    if (spec.methods.empty())
        spec.methods = {"kron", "full_mmse", "equal_gain", "analog_mmse"};
    emit(run_experiment(spec), opt);
    return 0;
}

int run_beamform(const ExperimentSpec& spec, const CommonOptions& opt)
{
    Scenario sc = draw_cli_scenario(spec);
    const int n = sc.config.antennas;

    // Same construction the rate experiments score: per-column assignment
    // search on top of the canonical nulling-plus-enhancement design.
    AnalogBeamformer analog =
        multiuser_analog(sc, prime_factorization(n), 2, /*searchAssignment=*/true);
    HybridBeamformer hybrid = mmse_digital(analog, sc);

    Table table;
    table.header = {"record", "user", "index", "re", "im"};
    auto row = [&table](const std::string& record, int user, int index, double re, double im) {
        table.rows.push_back({record, std::to_string(user), std::to_string(index),
                              format_value(re), format_value(im)});
    };

    for (int k = 0; k < sc.config.users; ++k)
        for (int i = 0; i < n; ++i)
            row("analog_weight", k, i, hybrid.analog(i, k).real(), hybrid.analog(i, k).imag());
    for (int k = 0; k < sc.config.users; ++k)
        for (int r = 0; r < hybrid.digital.rows(); ++r)
            row("digital_weight", k, r, hybrid.digital(r, k).real(),
                hybrid.digital(r, k).imag());

    // Normalized analog response toward every interference direction; exact
    // nulling drives these to numerical zero.
    for (int k = 0; k < sc.config.users; ++k)
        for (int m = 0; m < sc.config.interferers; ++m)
        {
            cvec v = steering_vector(sc.interfPaths[m].angle, n);
            row("nulling_residual", k, m, std::abs(hybrid.analog.col(k).dot(v)) / n, 0.0);
        }

    for (int k = 0; k < sc.config.users; ++k)
        row("rate", k, 0, user_rate(hybrid, sc, k), 0.0);
    row("sum_rate", 0, 0, sum_rate(hybrid, sc), 0.0);

    emit(table, opt);
    return 0;
}

int run_estimate(const ExperimentSpec& spec, const CommonOptions& opt)
{
    Scenario sc = draw_cli_scenario(spec);
    const SystemConfig& cfg = sc.config;
    const int n = cfg.antennas;
    const int z = cfg.pilotLength;

    RngStream aux = RngStream(spec.seed).derive(0xdead, 7);
    PilotBook book = make_pilots(cfg.users, z, aux.derive(1), cfg.interferers);

    cmat noise(n, z);
    RngStream noiseStream = aux.derive(2);
    for (int c = 0; c < z; ++c)
        for (int r = 0; r < n; ++r)
            noise(r, c) = noiseStream.complex_normal(cfg.noiseVar);

    rmat interfSymbols = book.interfering;
    for (int m = 0; m < cfg.interferers; ++m)
        interfSymbols.row(m) *= std::sqrt(cfg.interferer_power(m));

    cmat y = received_training_matrix(sc, book.intended, interfSymbols, noise);
    UplinkEstimate est = estimate_uplink(y, book, cfg);

    Table table;
    table.header = {"class", "user", "angle", "gain_re", "gain_im", "matched_true",
                    "angle_error"};

    auto nearest = [](PhaseAngle angle, const std::vector<PhaseAngle>& truths) {
        double bestDist = 0.0, bestAngle = 0.0;
        for (std::size_t i = 0; i < truths.size(); ++i)
        {
            double d = circular_distance(angle, truths[i]);
            if (i == 0 || d < bestDist)
            {
                bestDist = d;
                bestAngle = truths[i].value();
            }
        }
        return std::pair<double, double>(bestAngle, bestDist);
    };

    for (int k = 0; k < cfg.users; ++k)
    {
        std::vector<PhaseAngle> truths;
        for (const PathComponent& p : sc.dataPaths[k])
            truths.push_back(p.angle);
        for (const PathEstimate& pe : est.dataPaths[k])
        {
            auto [matched, err] = nearest(pe.angle, truths);
            table.rows.push_back({"data", std::to_string(k), format_value(pe.angle.value()),
                                  format_value(pe.gain.real()), format_value(pe.gain.imag()),
                                  format_value(matched), format_value(err)});
        }
    }

    std::vector<PhaseAngle> interfTruths;
    for (const PathComponent& p : sc.interfPaths)
        interfTruths.push_back(p.angle);
    for (const PhaseAngle& angle : est.interferenceAngles)
    {
        auto [matched, err] = nearest(angle, interfTruths);
        table.rows.push_back({"interference", "-1", format_value(angle.value()), "0", "0",
                              format_value(matched), format_value(err)});
    }

    emit(table, opt);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Kronecker-factor hybrid beamforming and channel estimation simulator"};
    app.require_subcommand(1);

    CommonOptions opt;
    CLI::App* spectrum = app.add_subcommand(
        "spectrum", "Beam-scan magnitude profile of one training observation");
    CLI::App* beamform = app.add_subcommand(
        "beamform", "Beamformer weights, nulling residuals and rates for one scenario");
    CLI::App* estimate =
        app.add_subcommand("estimate", "Two-stage angle/gain estimates for one scenario");
    CLI::App* sweep =
        app.add_subcommand("sweep", "Monte Carlo parameter sweep (preset or config file)");
    CLI::App* bench = app.add_subcommand("bench", "Construction-time benchmark table");
    for (CLI::App* sub : {spectrum, beamform, estimate, sweep, bench})
        add_common_options(sub, opt);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        int code = app.exit(e);
        return code == 0 ? 0 : 2; // 0: --help/--version handled by CLI11
    }

    try
    {
        ExperimentSpec spec = build_spec(opt);
        if (spectrum->parsed())
            return run_spectrum(spec, opt);
        if (beamform->parsed())
            return run_beamform(spec, opt);
        if (estimate->parsed())
            return run_estimate(spec, opt);
        if (bench->parsed())
            return run_bench(spec, opt);
        return run_sweep(spec, opt);
    }
    catch (const InsufficientFactors& e)
    {
        std::cerr << "error: InsufficientFactors: " << e.what() << "\n";
        return 4;
    }
    catch (const DegenerateScenario& e)
    {
        std::cerr << "error: DegenerateScenario: " << e.what() << "\n";
        return 5;
    }
    catch (const TargetInNullSet& e)
    {
        std::cerr << "error: TargetInNullSet: " << e.what() << "\n";
        return 6;
    }
    catch (const ConfigError& e)
    {
        std::cerr << "error: ConfigError: " << e.what() << "\n";
        return 3;
    }
    catch (const std::ios_base::failure& e)
    {
        std::cerr << "error: IoError: " << e.what() << "\n";
        return 7;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: InternalError: " << e.what() << "\n";
        return 8;
    }
}
