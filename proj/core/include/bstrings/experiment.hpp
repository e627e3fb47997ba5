//---------------------------------------------------------------------------//
// Copyright 2026 the bstrings authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file bstrings/experiment.hpp
//! Named, reproducible experiments and their machine-readable reports.
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bstrings
{
//---------------------------------------------------------------------------//
enum class Experiment
{
    bern_counts,
    bern1_counts,
    bern1_recurrence,
    cmpp_equivalence,
    plus_dependence,
    swapped_dependence,
    feller_cycles,
    feller_uniformity,
    enumeration_oracle,
    mixture_tables,
};

std::string_view to_string(Experiment e);
std::optional<Experiment> parse_experiment(std::string_view name);
std::span<Experiment const> all_experiments();

enum class ReportFormat
{
    json,
    csv,
};

//! Invalid configuration; the CLI maps it to exit status 2.
class ConfigError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

//---------------------------------------------------------------------------//
/*!
 * What to run. Unset optionals take per-experiment defaults (see
 * resolve()).
 *
 * \c n is the prefix/horizon length for sequence experiments, the
 * permutation size for the Feller experiments, and the enumeration horizon
 * for enumeration-oracle.
 */
struct ExperimentConfig
{
    Experiment experiment = Experiment::bern_counts;
    std::optional<double> a;
    std::optional<double> b;
    std::optional<std::uint64_t> n;
    std::optional<std::uint64_t> replicates;
    std::optional<int> dmax;
    std::uint64_t seed = 1;
    //! Expected lost marks of order <= dmax when truncating the point process.
    std::optional<double> mark_loss_tol;
    //! Target bound on expected missed strings when n is chosen automatically.
    std::optional<double> bias_target;
    double alpha = 1e-3;
    double z_max = 4.0;
    //! Worker threads; 0 uses the hardware concurrency.
    unsigned threads = 0;
    //! Reseed once and rerun when a check fails.
    bool retry = true;
    std::string output;
    ReportFormat format = ReportFormat::json;
};

//! Echo of the fully resolved configuration.
struct ResolvedConfig
{
    std::string experiment;
    double a = 0;
    double b = 0;
    std::uint64_t n = 0;
    std::uint64_t replicates = 0;
    int dmax = 0;
    std::uint64_t seed = 0;
    double mark_loss_tol = 0;
    double bias_target = 0;
    double alpha = 0;
    double z_max = 0;

    friend bool operator==(ResolvedConfig const&, ResolvedConfig const&)
        = default;
};

//! Fill defaults and validate every parameter; throws ConfigError.
ResolvedConfig resolve(ExperimentConfig const& config);

//---------------------------------------------------------------------------//
//! A theoretical value used by the experiment and where it comes from.
struct Reference
{
    std::string name;
    double value = 0;
    std::string provenance;

    friend bool operator==(Reference const&, Reference const&) = default;
};

struct Summary
{
    std::string name;
    double value = 0;

    friend bool operator==(Summary const&, Summary const&) = default;
};

struct TestRecord
{
    std::string name;
    std::string kind;  //!< chi2, two-sample, moment, proportion, ...
    std::optional<double> theoretical;
    std::optional<double> empirical;
    std::optional<double> statistic;
    std::optional<double> p_value;
    bool pass = false;
    std::string provenance;

    friend bool operator==(TestRecord const&, TestRecord const&) = default;
};

struct ExperimentReport
{
    std::string version;
    ResolvedConfig config;
    std::uint64_t effective_seed = 0;
    int attempts = 1;
    std::vector<Reference> references;
    std::vector<Summary> summaries;
    std::vector<TestRecord> tests;
    double wall_clock_seconds = 0;

    bool passed() const;

    friend bool operator==(ExperimentReport const&, ExperimentReport const&)
        = default;
};

//---------------------------------------------------------------------------//
/*!
 * Run an experiment.
 *
 * Samples with seed \c config.seed; if any check fails and retry is on, the
 * whole experiment is rerun once with a derived seed, and that second
 * attempt's report is returned. Writes the report when \c config.output is
 * set. Throws ConfigError before sampling if the configuration is invalid.
 */
ExperimentReport run(ExperimentConfig const& config);

//! Serialize: JSON with stable key order and 12 significant digits, or CSV
//! with one row per test.
std::string emit_report(ExperimentReport const& report, ReportFormat format);

//! Write the serialized report; throws std::runtime_error if unwritable.
void write_report(ExperimentReport const& report, std::string const& path,
                  ReportFormat format);

//! Parse a JSON report produced by emit_report.
ExperimentReport parse_report(std::string_view json);

//! Copy with every floating-point field rounded to 12 significant digits.
ExperimentReport canonicalize(ExperimentReport report);

//! Round to 12 significant digits.
double round_sig12(double value);

//---------------------------------------------------------------------------//
}  // namespace bstrings
