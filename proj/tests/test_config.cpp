// SPDX-License-Identifier: Apache-2.0
//
// Tests for the experiment-file parser, settings validation, preset
// definitions, CSV output, and end-to-end determinism of the Monte Carlo
// driver.

#include <catch_amalgamated.hpp>

#include <sstream>

#include <kronbeam/config.hpp>
#include <kronbeam/csv.hpp>

using namespace kronbeam;
using Catch::Matchers::ContainsSubstring;

namespace
{

const char* kSmallRateConfig = R"(# tiny smoke configuration
[system]
n = 16     # antennas
k = 1
m = 1
l = 1
z = 4

[sweep]
param = rho_u
from = 1
to = 9
points = 5
scale = lin

[run]
trials = 8
seed = 42
methods = kron, full_mmse
)";

} // namespace

TEST_CASE("parser: sections, comments, and whitespace", "[config]")
{
    ParsedSettings s = parse_config(kSmallRateConfig);
    REQUIRE(s.system.at("n") == "16");
    REQUIRE(s.system.at("z") == "4");
    REQUIRE(s.sweep.at("param") == "rho_u");
    REQUIRE(s.sweep.at("points") == "5");
    REQUIRE(s.run.at("methods") == "kron, full_mmse");
    REQUIRE(parse_config("").system.empty());
    REQUIRE(parse_config("# only a comment\n\n").run.empty());
}

TEST_CASE("parser: structural errors name the offending token", "[config]")
{
    REQUIRE_THROWS_MATCHES(parse_config("[network]\n"), ConfigError,
                           Catch::Matchers::MessageMatches(ContainsSubstring("network")));
    REQUIRE_THROWS_MATCHES(
        parse_config("[system]\nq = 1\n"), ConfigError,
        Catch::Matchers::MessageMatches(ContainsSubstring("unknown key 'q'")));
    REQUIRE_THROWS_MATCHES(
        parse_config("[system]\nn = 4\nn = 8\n"), ConfigError,
        Catch::Matchers::MessageMatches(ContainsSubstring("duplicate key 'n'")));
    REQUIRE_THROWS_MATCHES(
        parse_config("[system]\njust some words\n"), ConfigError,
        Catch::Matchers::MessageMatches(ContainsSubstring("expected key = value")));
    REQUIRE_THROWS_MATCHES(
        parse_config("n = 4\n"), ConfigError,
        Catch::Matchers::MessageMatches(ContainsSubstring("outside any section")));
    REQUIRE_THROWS_MATCHES(
        parse_config("[system\nn = 4\n"), ConfigError,
        Catch::Matchers::MessageMatches(ContainsSubstring("unterminated")));
}

TEST_CASE("settings: values land in the experiment spec", "[config]")
{
    ExperimentSpec spec = experiment_from_settings(parse_config(kSmallRateConfig));
    REQUIRE(spec.base.antennas == 16);
    REQUIRE(spec.base.users == 1);
    REQUIRE(spec.base.interferers == 1);
    REQUIRE(spec.base.pathsPerUser == 1);
    REQUIRE(spec.base.pilotLength == 4);
    REQUIRE(spec.sweepParam == "rho_u");
    REQUIRE(spec.sweepDb == false);
    REQUIRE(spec.sweepValues == std::vector<double>{1, 3, 5, 7, 9});
    REQUIRE(spec.trials == 8);
    REQUIRE(spec.seed == 42);
    REQUIRE(spec.methods == std::vector<std::string>{"kron", "full_mmse"});

    // Defaults survive when the file says nothing.
    ExperimentSpec dflt = experiment_from_settings(parse_config("[system]\nn = 32\n"));
    REQUIRE(dflt.trials == 500);
    REQUIRE(dflt.seed == kDefaultSeed);
    REQUIRE(dflt.kind == "rate");
}

TEST_CASE("settings: dimension overrides clear preset power lists", "[config]")
{
    ExperimentSpec preset;
    preset.base.users = 2;
    preset.base.userPower = {1.0, 4.0};
    ExperimentSpec out =
        experiment_from_settings(parse_config("[system]\nk = 3\nm = 0\n"), preset);
    REQUIRE(out.base.users == 3);
    REQUIRE(out.base.userPower.empty()); // back to implicit unit powers
    REQUIRE(out.base.user_power(2) == 1.0);
}

TEST_CASE("settings: dB scale and single-point sweeps", "[config]")
{
    ExperimentSpec spec = experiment_from_settings(parse_config(
        "[sweep]\nparam = rho_i\nfrom = -10\nto = 30\npoints = 1\nscale = db\n"));
    REQUIRE(spec.sweepDb);
    REQUIRE(spec.sweepValues == std::vector<double>{-10});
}

TEST_CASE("settings: every semantic problem is reported at once", "[config]")
{
    const char* bad = "[sweep]\n"
                      "param = bogus_param\n"
                      "from = 0\n"
                      "to = 1\n"
                      "points = 3\n"
                      "scale = octave\n"
                      "[run]\n"
                      "trials = 0\n"
                      "methods = kron, warp_drive\n";
    try
    {
        experiment_from_settings(parse_config(bad));
        FAIL("expected ConfigError");
    }
    catch (const ConfigError& e)
    {
        std::string msg = e.what();
        REQUIRE_THAT(msg, ContainsSubstring("invalid configuration"));
        REQUIRE_THAT(msg, ContainsSubstring("unknown param 'bogus_param'"));
        REQUIRE_THAT(msg, ContainsSubstring("scale must be lin or db"));
        REQUIRE_THAT(msg, ContainsSubstring("trials must be >= 1"));
        REQUIRE_THAT(msg, ContainsSubstring("unknown method 'warp_drive'"));
    }

    REQUIRE_THROWS_MATCHES(
        experiment_from_settings(parse_config("[sweep]\nparam = n\n")), ConfigError,
        Catch::Matchers::MessageMatches(ContainsSubstring("missing key 'from'")));
    REQUIRE_THROWS_AS(experiment_from_settings(parse_config("[system]\nn = lots\n")),
                      ConfigError);
    REQUIRE_THROWS_AS(experiment_from_settings(parse_config("[system]\nn = 12.5\n")),
                      ConfigError);
}

TEST_CASE("settings: factor budget versus interferer count", "[config]")
{
    // 97 is prime: one factor, cannot null two interferers with the
    // Kronecker front end.
    const char* prime = "[system]\nn = 97\nm = 2\nz = 4\n[run]\nmethods = kron\n";
    REQUIRE_THROWS_MATCHES(
        experiment_from_settings(parse_config(prime)), InsufficientFactors,
        Catch::Matchers::MessageMatches(ContainsSubstring(
            "array size 97 provides only 1 Kronecker factor(s) for 2 interferer(s)")));

    // The unconstrained baseline does not care.
    const char* fullOnly = "[system]\nn = 97\nm = 2\nz = 4\n[run]\nmethods = full_mmse\n";
    REQUIRE_NOTHROW(experiment_from_settings(parse_config(fullOnly)));

    // No explicit methods defaults to the Kronecker design: still checked.
    REQUIRE_THROWS_AS(experiment_from_settings(parse_config("[system]\nn = 97\nm = 2\nz = 4\n")),
                      InsufficientFactors);

    // An antenna sweep checks every swept size.
    const char* sweep = "[system]\nm = 2\nz = 4\n"
                        "[sweep]\nparam = n\nfrom = 97\nto = 97\npoints = 1\n"
                        "[run]\nmethods = kron\n";
    REQUIRE_THROWS_AS(experiment_from_settings(parse_config(sweep)), InsufficientFactors);
}

TEST_CASE("presets are defined and self-consistent", "[config]")
{
    for (const std::string& name : preset_names())
    {
        ExperimentSpec spec = make_preset(name);
        REQUIRE(spec.name == name);
        REQUIRE((spec.kind == "rate" || spec.kind == "estimation" ||
                 spec.kind == "spectrum" || spec.kind == "bench"));
        if (spec.kind == "bench")
            REQUIRE(!spec.benchSizes.empty());
        else if (spec.kind != "spectrum")
            REQUIRE(!spec.methods.empty());
    }
    REQUIRE_THROWS_AS(make_preset("fig99"), ConfigError);
}

TEST_CASE("csv output format", "[config]")
{
    Table t;
    t.header = {"a", "b"};
    t.rows = {{"1", "x"}, {"2.5", "y"}};
    std::ostringstream oss;
    write_csv(oss, t);
    REQUIRE(oss.str() == "a,b\n1,x\n2.5,y\n");
}

TEST_CASE("rate experiment: identical spec produces identical bytes", "[config]")
{
    ExperimentSpec spec = experiment_from_settings(parse_config(kSmallRateConfig));

    auto render = [](const ExperimentSpec& s) {
        std::ostringstream oss;
        write_csv(oss, run_experiment(s));
        return oss.str();
    };

    std::string first = render(spec);
    std::string second = render(spec);
    REQUIRE(first == second);
    REQUIRE_THAT(first, ContainsSubstring("param,value,method,metric,mean,stderr,trials"));
    REQUIRE_THAT(first, ContainsSubstring("rho_u,"));

    // Thread count must not change a single byte.
    ExperimentSpec threaded = spec;
    threaded.threads = 3;
    REQUIRE(render(threaded) == first);

    // A different seed must.
    ExperimentSpec reseeded = spec;
    reseeded.seed = 43;
    REQUIRE(render(reseeded) != first);

    // 2 methods x 5 sweep cells.
    REQUIRE(run_experiment(spec).rows.size() == 10);
}

TEST_CASE("estimation experiment: fixed separations tag the metric", "[config]")
{
    ExperimentSpec spec;
    spec.kind = "estimation";
    spec.base.antennas = 16;
    spec.base.users = 1;
    spec.base.interferers = 1;
    spec.base.pathsPerUser = 1;
    spec.base.pilotLength = 4;
    spec.methods = {"cc", "zf"};
    spec.trials = 4;
    spec.separations = {0.5};

    Table t = run_experiment(spec);
    REQUIRE(t.rows.size() == 2);
    REQUIRE(t.rows[0][2] == "cc");
    REQUIRE(t.rows[1][2] == "zf");
    REQUIRE(t.rows[0][3] == "abs_gain_error_sep0.5");

    spec.methods = {"kron"};
    REQUIRE_THROWS_AS(run_experiment(spec), ConfigError);
}

TEST_CASE("spectrum experiment emits one row per grid sample", "[config]")
{
    ExperimentSpec spec;
    spec.kind = "spectrum";
    spec.base.antennas = 16;
    spec.base.users = 1;
    spec.base.interferers = 1;
    spec.base.pathsPerUser = 1;
    spec.base.pilotLength = 4;
    spec.spectrumZ = {1, 4};
    spec.minSeparation = 0.3;

    Table t = run_experiment(spec);
    REQUIRE(t.header == std::vector<std::string>{"z", "angle", "magnitude"});
    REQUIRE(t.rows.size() == 2 * 8 * 16);
    REQUIRE(t.rows[0][0] == "1");
    REQUIRE(t.rows[8 * 16][0] == "4");
}

TEST_CASE("unknown experiment kind is rejected", "[config]")
{
    ExperimentSpec spec;
    spec.kind = "interpretive_dance";
    REQUIRE_THROWS_AS(run_experiment(spec), ConfigError);
}
