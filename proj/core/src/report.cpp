//---------------------------------------------------------------------------//
// Copyright 2026 the bstrings authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file report.cpp
//! JSON and CSV serialization of experiment reports.
//---------------------------------------------------------------------------//
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bstrings/experiment.hpp"

namespace bstrings
{
namespace
{
using ordered_json = nlohmann::ordered_json;

//---------------------------------------------------------------------------//
ordered_json number(double v)
{
    if (!std::isfinite(v))
        return nullptr;
    return round_sig12(v);
}

ordered_json number(std::optional<double> v)
{
    return v ? number(*v) : ordered_json(nullptr);
}

std::optional<double> opt_number(ordered_json const& j)
{
    if (j.is_null())
        return std::nullopt;
    return j.get<double>();
}

double plain_number(ordered_json const& j)
{
    return j.is_null() ? NAN : j.get<double>();
}

std::string csv_number(std::optional<double> v)
{
    if (!v)
        return {};
    if (!std::isfinite(*v))
        return std::isnan(*v) ? "nan" : (*v > 0 ? "inf" : "-inf");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", *v);
    return buf;
}

std::string csv_field(std::string const& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s)
    {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + '"';
}

std::optional<double> round_opt(std::optional<double> v)
{
    if (!v || !std::isfinite(*v))
        return std::nullopt;
    return round_sig12(*v);
}

}  // namespace

//---------------------------------------------------------------------------//
double round_sig12(double value)
{
    if (!std::isfinite(value) || value == 0)
        return value;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return std::strtod(buf, nullptr);
}

bool ExperimentReport::passed() const
{
    for (auto const& t : tests)
    {
        if (!t.pass)
            return false;
    }
    return true;
}

ExperimentReport canonicalize(ExperimentReport r)
{
    auto& c = r.config;
    for (double* v : {&c.a, &c.b, &c.mark_loss_tol, &c.bias_target, &c.alpha,
                      &c.z_max})
    {
        *v = round_sig12(*v);
    }
    for (auto& ref : r.references)
        ref.value = round_sig12(ref.value);
    for (auto& s : r.summaries)
        s.value = round_sig12(s.value);
    for (auto& t : r.tests)
    {
        t.theoretical = round_opt(t.theoretical);
        t.empirical = round_opt(t.empirical);
        t.statistic = round_opt(t.statistic);
        t.p_value = round_opt(t.p_value);
    }
    r.wall_clock_seconds = round_sig12(r.wall_clock_seconds);
    return r;
}

//---------------------------------------------------------------------------//
std::string emit_report(ExperimentReport const& report, ReportFormat format)
{
    if (format == ReportFormat::csv)
    {
        std::ostringstream os;
        os << "experiment,test,theoretical,empirical,statistic,p_value,"
              "verdict\n";
        for (auto const& t : report.tests)
        {
            os << csv_field(report.config.experiment) << ','
               << csv_field(t.name) << ',' << csv_number(t.theoretical) << ','
               << csv_number(t.empirical) << ',' << csv_number(t.statistic)
               << ',' << csv_number(t.p_value) << ','
               << (t.pass ? "pass" : "fail") << '\n';
        }
        return os.str();
    }

    auto const& c = report.config;
    ordered_json j;
    j["version"] = report.version;
    j["experiment"] = c.experiment;
    j["config"] = {
        {"experiment", c.experiment},
        {"a", number(c.a)},
        {"b", number(c.b)},
        {"n", c.n},
        {"replicates", c.replicates},
        {"dmax", c.dmax},
        {"seed", c.seed},
        {"mark_loss_tol", number(c.mark_loss_tol)},
        {"bias_target", number(c.bias_target)},
        {"alpha", number(c.alpha)},
        {"z_max", number(c.z_max)},
    };
    j["effective_seed"] = report.effective_seed;
    j["attempts"] = report.attempts;
    j["passed"] = report.passed();

    j["references"] = ordered_json::array();
    for (auto const& r : report.references)
    {
        j["references"].push_back({{"name", r.name},
                                   {"value", number(r.value)},
                                   {"provenance", r.provenance}});
    }
    j["summaries"] = ordered_json::array();
    for (auto const& s : report.summaries)
        j["summaries"].push_back({{"name", s.name}, {"value", number(s.value)}});
    j["tests"] = ordered_json::array();
    for (auto const& t : report.tests)
    {
        j["tests"].push_back({{"name", t.name},
                              {"kind", t.kind},
                              {"theoretical", number(t.theoretical)},
                              {"empirical", number(t.empirical)},
                              {"statistic", number(t.statistic)},
                              {"p_value", number(t.p_value)},
                              {"verdict", t.pass ? "pass" : "fail"},
                              {"provenance", t.provenance}});
    }
    j["wall_clock_seconds"] = number(report.wall_clock_seconds);
    return j.dump(2) + "\n";
}

void write_report(ExperimentReport const& report, std::string const& path,
                  ReportFormat format)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open report file '" + path + "'");
    out << emit_report(report, format);
    if (!out)
        throw std::runtime_error("failed writing report file '" + path + "'");
}

//---------------------------------------------------------------------------//
ExperimentReport parse_report(std::string_view text)
{
    auto j = ordered_json::parse(text);
    ExperimentReport r;
    r.version = j.at("version").get<std::string>();
    auto const& c = j.at("config");
    r.config.experiment = c.at("experiment").get<std::string>();
    r.config.a = plain_number(c.at("a"));
    r.config.b = plain_number(c.at("b"));
    r.config.n = c.at("n").get<std::uint64_t>();
    r.config.replicates = c.at("replicates").get<std::uint64_t>();
    r.config.dmax = c.at("dmax").get<int>();
    r.config.seed = c.at("seed").get<std::uint64_t>();
    r.config.mark_loss_tol = plain_number(c.at("mark_loss_tol"));
    r.config.bias_target = plain_number(c.at("bias_target"));
    r.config.alpha = plain_number(c.at("alpha"));
    r.config.z_max = plain_number(c.at("z_max"));
    r.effective_seed = j.at("effective_seed").get<std::uint64_t>();
    r.attempts = j.at("attempts").get<int>();
    for (auto const& e : j.at("references"))
    {
        r.references.push_back({e.at("name").get<std::string>(),
                                plain_number(e.at("value")),
                                e.at("provenance").get<std::string>()});
    }
    for (auto const& e : j.at("summaries"))
    {
        r.summaries.push_back(
            {e.at("name").get<std::string>(), plain_number(e.at("value"))});
    }
    for (auto const& e : j.at("tests"))
    {
        TestRecord t;
        t.name = e.at("name").get<std::string>();
        t.kind = e.at("kind").get<std::string>();
        t.theoretical = opt_number(e.at("theoretical"));
        t.empirical = opt_number(e.at("empirical"));
        t.statistic = opt_number(e.at("statistic"));
        t.p_value = opt_number(e.at("p_value"));
        t.pass = e.at("verdict").get<std::string>() == "pass";
        t.provenance = e.at("provenance").get<std::string>();
        r.tests.push_back(std::move(t));
    }
    r.wall_clock_seconds = plain_number(j.at("wall_clock_seconds"));
    return r;
}

//---------------------------------------------------------------------------//
}  // namespace bstrings
