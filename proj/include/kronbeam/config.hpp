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

#pragma once

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "monte_carlo.hpp"

namespace kronbeam
{
namespace detail
{

inline std::string trim(const std::string& s)
{
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_list(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream iss(s);
    while (std::getline(iss, cur, sep))
    {
        cur = trim(cur);
        if (!cur.empty())
            out.push_back(cur);
    }
    return out;
}

inline double parse_number(const std::string& key, const std::string& value)
{
    std::size_t pos = 0;
    double v = 0.0;
    try
    {
        v = std::stod(value, &pos);
    }
    catch (const std::exception&)
    {
        throw ConfigError("key '" + key + "': '" + value + "' is not a number");
    }
    if (pos != value.size())
        throw ConfigError("key '" + key + "': '" + value + "' is not a number");
    return v;
}

inline long long parse_integer(const std::string& key, const std::string& value)
{
    double v = parse_number(key, value);
    long long i = static_cast<long long>(v);
    if (static_cast<double>(i) != v)
        throw ConfigError("key '" + key + "': '" + value + "' is not an integer");
    return i;
}

} // namespace detail

// Raw key/value view of a parsed experiment file: three fixed sections with
// a closed key set each. Structural problems (unknown names, duplicates,
// malformed lines, bad numbers) throw immediately with the offending token;
// semantic validation happens in `experiment_from_settings` and reports
// every violated constraint at once.
struct ParsedSettings
{
    std::map<std::string, std::string> system; // n k m l z
    std::map<std::string, std::string> sweep;  // param from to points scale
    std::map<std::string, std::string> run;    // trials seed methods
};

inline ParsedSettings parse_config(const std::string& text)
{
    static const std::set<std::string> systemKeys = {"n", "k", "m", "l", "z"};
    static const std::set<std::string> sweepKeys = {"param", "from", "to", "points", "scale"};
    static const std::set<std::string> runKeys = {"trials", "seed", "methods"};

    ParsedSettings out;
    std::map<std::string, std::string>* section = nullptr;
    std::string sectionName;

    std::istringstream iss(text);
    std::string line;
    int lineNo = 0;
    while (std::getline(iss, line))
    {
        ++lineNo;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty())
            continue;

        if (line.front() == '[')
        {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineNo) + ": unterminated section header");
            sectionName = detail::trim(line.substr(1, line.size() - 2));
            if (sectionName == "system")
                section = &out.system;
            else if (sectionName == "sweep")
                section = &out.sweep;
            else if (sectionName == "run")
                section = &out.run;
            else
                throw ConfigError("unknown section '" + sectionName + "'");
            continue;
        }

        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineNo) + ": expected key = value");
        if (!section)
            throw ConfigError("line " + std::to_string(lineNo) + ": key outside any section");

        std::string key = detail::trim(line.substr(0, eq));
        std::string value = detail::trim(line.substr(eq + 1));
        const std::set<std::string>& allowed =
            section == &out.system ? systemKeys : (section == &out.sweep ? sweepKeys : runKeys);
        if (!allowed.count(key))
            throw ConfigError("unknown key '" + key + "' in section [" + sectionName + "]");
        if (section->count(key))
            throw ConfigError("duplicate key '" + key + "' in section [" + sectionName + "]");
        (*section)[key] = value;
    }
    return out;
}

// Turn parsed settings into a runnable experiment, collecting every semantic
// violation into a single error. The factor-budget check (enough Kronecker
// factors for the configured interferers) throws its own error class.
inline ExperimentSpec experiment_from_settings(const ParsedSettings& s,
                                               ExperimentSpec spec = ExperimentSpec{})
{
    for (const auto& [key, value] : s.system)
    {
        long long v = detail::parse_integer(key, value);
        if (key == "n")
            spec.base.antennas = static_cast<int>(v);
        else if (key == "k")
            spec.base.users = static_cast<int>(v);
        else if (key == "m")
            spec.base.interferers = static_cast<int>(v);
        else if (key == "l")
            spec.base.pathsPerUser = static_cast<int>(v);
        else if (key == "z")
            spec.base.pilotLength = static_cast<int>(v);
    }
    // Dimension changes invalidate any preset per-entity power lists.
    if (!s.system.empty())
    {
        spec.base.userPower.clear();
        spec.base.interfererPower.clear();
        spec.base.pathVar.clear();
    }

    std::vector<std::string> problems;

    if (!s.sweep.empty())
    {
        auto need = [&s, &problems](const char* key) -> const std::string* {
            auto it = s.sweep.find(key);
            if (it == s.sweep.end())
            {
                problems.push_back(std::string("[sweep] missing key '") + key + "'");
                return nullptr;
            }
            return &it->second;
        };
        const std::string* param = need("param");
        const std::string* from = need("from");
        const std::string* to = need("to");
        const std::string* points = need("points");

        if (param)
        {
            static const std::set<std::string> known = {"rho_u", "rho_i", "n", "z"};
            if (!known.count(*param))
                problems.push_back("[sweep] unknown param '" + *param + "'");
            else
                spec.sweepParam = *param;
        }
        spec.sweepDb = false;
        if (auto it = s.sweep.find("scale"); it != s.sweep.end())
        {
            if (it->second == "db")
                spec.sweepDb = true;
            else if (it->second != "lin")
                problems.push_back("[sweep] scale must be lin or db, got '" + it->second + "'");
        }
        if (from && to && points)
        {
            double f = detail::parse_number("from", *from);
            double t = detail::parse_number("to", *to);
            long long p = detail::parse_integer("points", *points);
            if (p < 1)
                problems.push_back("[sweep] points must be >= 1");
            else
            {
                spec.sweepValues.clear();
                for (long long i = 0; i < p; ++i)
                    spec.sweepValues.push_back(p == 1 ? f : f + (t - f) * i / (p - 1));
            }
        }
    }

    if (auto it = s.run.find("trials"); it != s.run.end())
    {
        long long t = detail::parse_integer("trials", it->second);
        if (t < 1)
            problems.push_back("[run] trials must be >= 1");
        else
            spec.trials = static_cast<int>(t);
    }
    if (auto it = s.run.find("seed"); it != s.run.end())
    {
        try
        {
            spec.seed = std::stoull(it->second);
        }
        catch (const std::exception&)
        {
            throw ConfigError("key 'seed': '" + it->second + "' is not an unsigned integer");
        }
    }
    if (auto it = s.run.find("methods"); it != s.run.end())
    {
        spec.methods = detail::split_list(it->second, ',');
        static const std::set<std::string> known = {"kron", "full_mmse", "equal_gain",
                                                    "analog_mmse", "cc", "zf"};
        for (const std::string& m : spec.methods)
            if (!known.count(m))
                problems.push_back("[run] unknown method '" + m + "'");
    }

    for (const std::string& v : spec.base.violations())
        problems.push_back("[system] " + v);

    if (!problems.empty())
    {
        std::ostringstream oss;
        oss << "invalid configuration: ";
        for (std::size_t i = 0; i < problems.size(); ++i)
            oss << (i ? "; " : "") << problems[i];
        throw ConfigError(oss.str());
    }

    // Factor budget: the Kronecker front end needs one factor per interferer.
    bool usesKron = spec.methods.empty();
    for (const std::string& m : spec.methods)
        if (m == "kron" || m == "zf")
            usesKron = true;
    if (usesKron && spec.base.interferers > 0)
    {
        auto checkSize = [&spec](int n) {
            std::size_t d = prime_factorization(n).count();
            if (static_cast<std::size_t>(spec.base.interferers) > d)
                throw InsufficientFactors(
                    "array size " + std::to_string(n) + " provides only " + std::to_string(d) +
                    " Kronecker factor(s) for " + std::to_string(spec.base.interferers) +
                    " interferer(s)");
        };
        if (spec.sweepParam == "n")
            for (double v : spec.sweepValues)
                checkSize(static_cast<int>(v));
        else
            checkSize(spec.base.antennas);
    }

    return spec;
}

} // namespace kronbeam
