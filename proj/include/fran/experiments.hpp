#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fran/baseline.hpp"
#include "fran/game.hpp"
#include "fran/scenario.hpp"

namespace fran
{

/// One experiment run. `params` holds the resolved scenario (config file plus
/// overrides); the grids are the swept variable of the experiment.
struct ExperimentSpec
{
	std::string name;
	std::optional<std::filesystem::path> config_path;
	SystemParams params;
	std::vector<double> thresholds{1.0, 2.0, 4.0, 8.0, 16.0};
	std::vector<double> initial_shares{0.1, 0.5, 0.9};
	std::string sweep_key;
	std::vector<double> sweep_values;
	std::size_t trials = 100000;
	std::size_t baseline_realizations = 20;
	std::uint64_t seed = 1;
	std::filesystem::path out_dir = ".";
	unsigned threads = 0;
};

/// Throws Error(ConfigError) on an empty grid, zero trials or an invalid scenario.
ValidatedParams check_spec(const ExperimentSpec & spec);

// ---------------------------------------------------------------------------
// Rate curves against threshold

struct RateCurveRow
{
	double threshold = 0.0;
	double d2d_analytic = 0.0;
	Estimate d2d_mc;
	double fap_analytic = 0.0;
	std::optional<double> fap_lemma;  // only where the closed-form approximation applies
	Estimate fap_mc;
};

/// Analytic and simulated rates of both modes at each threshold (both
/// thresholds set to T); one SIR batch serves every T.
std::vector<RateCurveRow> rate_curve(
	const ValidatedParams & params, const std::vector<double> & thresholds, std::size_t trials,
	std::uint64_t seed, unsigned threads = 0);

// ---------------------------------------------------------------------------
// Evolution runs

struct EvolutionRun
{
	EvolutionMode mode = EvolutionMode::Replicator;
	double x0 = 0.0;
	EvolutionTrace trace;
};

struct EvolutionSummary
{
	GroupSizes groups;
	PayoffInputs inputs;
	Equilibrium equilibrium;
	std::vector<EvolutionRun> runs;
	std::vector<BaselineOutcome> baseline;  // one per seeded realization
	double baseline_avg_payoff = 0.0;
};

/// Agent-mode runs start with round(x0 N^D) agents in F-AP mode.
EvolutionSummary evolution_study(
	const ValidatedParams & params, const std::vector<double> & initial_shares,
	std::size_t baseline_realizations, std::uint64_t seed);

/// Max-rate assignment on `realizations` independent networks, realization r
/// drawn under stream_seed(seed, r).
std::vector<BaselineOutcome> baseline_study(
	const ValidatedParams & params, const GroupSizes & groups, const PayoffInputs & in,
	std::size_t realizations, std::uint64_t seed);

// ---------------------------------------------------------------------------
// File-producing runs. Each returns the files it wrote; every CSV starts with
// the resolved config as `# ` comment lines.

std::vector<std::filesystem::path> run_fig4(const ExperimentSpec & spec);
std::vector<std::filesystem::path> run_fig56(const ExperimentSpec & spec);
std::vector<std::filesystem::path> run_baseline(const ExperimentSpec & spec);
std::vector<std::filesystem::path> run_scatter(const ExperimentSpec & spec);
std::vector<std::filesystem::path> run_sweep(const ExperimentSpec & spec);

/// `# ` header block: resolved config plus the run's seed and trial count.
std::string config_header(const ExperimentSpec & spec);

}  // namespace fran
