//---------------------------------------------------------------------------//
// Copyright 2026 the bstrings authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file bstrings.cpp
//! Command-line experiment runner.
//---------------------------------------------------------------------------//
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "bstrings/experiment.hpp"

namespace
{
std::string experiment_list()
{
    std::string out;
    for (auto e : bstrings::all_experiments())
    {
        if (!out.empty())
            out += ", ";
        out += bstrings::to_string(e);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv)
{
    using namespace bstrings;

    CLI::App app{"Run a reproducible string-count experiment and print its "
                 "report.\nExit status: 0 all checks pass, 1 a check failed "
                 "after one reseeded retry, 2 invalid configuration."};

    std::string name;
    ExperimentConfig config;
    std::string format = "json";
    bool no_retry = false;

    app.add_option("--experiment,-e", name, "One of: " + experiment_list())
        ->required();
    app.add_option("--a", config.a, "Model parameter a > 0 (default depends "
                                    "on the experiment)");
    app.add_option("--b", config.b, "Model parameter b >= 0");
    app.add_option("--n", config.n,
                   "Horizon, prefix length, or permutation size (default: "
                   "from the bias target or per experiment)");
    app.add_option("--replicates,-r", config.replicates,
                   "Monte Carlo replicates (default 100000)");
    app.add_option("--dmax", config.dmax, "Largest string length counted");
    app.add_option("--seed,-s", config.seed, "Master seed")
        ->capture_default_str();
    app.add_option("--mark-loss-tol", config.mark_loss_tol,
                   "Point-process truncation tolerance (default 1e-3)");
    app.add_option("--bias-target", config.bias_target,
                   "Bias bound used to choose n automatically");
    app.add_option("--alpha", config.alpha, "Significance level")
        ->capture_default_str();
    app.add_option("--z-max", config.z_max, "z-score bound")
        ->capture_default_str();
    app.add_option("--threads,-j", config.threads,
                   "Worker threads (0: all cores)")
        ->capture_default_str();
    app.add_flag("--no-retry", no_retry, "Do not rerun once on failure");
    app.add_option("--out,-o", config.output,
                   "Write the report here instead of stdout");
    app.add_option("--format,-f", format, "Report format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::ParseError const& e)
    {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    auto experiment = parse_experiment(name);
    if (!experiment)
    {
        std::cerr << "unknown experiment '" << name << "'; expected one of: "
                  << experiment_list() << '\n';
        return 2;
    }
    config.experiment = *experiment;
    config.retry = !no_retry;
    config.format = format == "csv" ? ReportFormat::csv : ReportFormat::json;

    try
    {
        auto report = run(config);
        if (config.output.empty())
            std::cout << emit_report(report, config.format);
        return report.passed() ? 0 : 1;
    }
    catch (ConfigError const& e)
    {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return 2;
    }
    catch (std::invalid_argument const& e)
    {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return 2;
    }
    catch (std::exception const& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
