#include "fran/experiments.hpp"

#include <cmath>
#include <fmt/format.h>
#include <fstream>

#include "fran/analytics.hpp"
#include "fran/error.hpp"
#include "fran/geometry.hpp"

namespace fran
{

namespace
{

namespace fs = std::filesystem;

std::ofstream open_csv(const fs::path & path, const ExperimentSpec & spec)
{
	std::ofstream out(path, std::ios::binary);
	if (!out)
		throw Error(Errc::ConfigError, fmt::format("cannot write {}", path.string()));
	out << config_header(spec);
	return out;
}

std::string share_tag(double x0)
{
	return fmt::format("{:.3f}", x0);
}

const char * mode_name(EvolutionMode mode)
{
	return mode == EvolutionMode::Replicator ? "replicator" : "agents";
}

constexpr std::uint64_t baseline_stream = 0x62617365ULL;

}  // namespace

ValidatedParams check_spec(const ExperimentSpec & spec)
{
	if (spec.trials == 0)
		throw Error(Errc::ConfigError, "trials must be positive");
	if (spec.thresholds.empty())
		throw Error(Errc::ConfigError, "threshold grid is empty");
	if (spec.initial_shares.empty())
		throw Error(Errc::ConfigError, "initial share set is empty");
	for (double x0 : spec.initial_shares)
		if (!(x0 >= 0.0 && x0 <= 1.0))
			throw Error(Errc::ConfigError, fmt::format("initial share {} outside [0, 1]", x0));
	return validate(spec.params);
}

std::string config_header(const ExperimentSpec & spec)
{
	std::string out = fmt::format("# experiment = {}\n# seed = {}\n# trials = {}\n", spec.name, spec.seed, spec.trials);
	out += to_ini(spec.params, "# ");
	return out;
}

std::vector<RateCurveRow> rate_curve(
	const ValidatedParams & params, const std::vector<double> & thresholds, std::size_t trials,
	std::uint64_t seed, unsigned threads)
{
	const Tiers t = tiers(params);
	const double dist = params->d2d_link_distance;
	const SirBatch batch = sample_sir_batch(params, trials, seed, threads);

	std::vector<RateCurveRow> rows;
	rows.reserve(thresholds.size());
	for (double T : thresholds)
	{
		RateCurveRow row;
		row.threshold = T;
		row.d2d_analytic = ergodic_rate_d2d(t, T, dist);
		row.d2d_mc = ergodic_rate_estimate(batch.d2d, T);
		row.fap_analytic = ergodic_rate_fap(t, T);
		row.fap_mc = ergodic_rate_estimate(batch.fap, T);
		try
		{
			row.fap_lemma = lemma1_rate_fap(t, T);
		}
		catch (const Error &)
		{
		}
		rows.push_back(row);
	}
	return rows;
}

std::vector<BaselineOutcome> baseline_study(
	const ValidatedParams & params, const GroupSizes & groups, const PayoffInputs & in,
	std::size_t realizations, std::uint64_t seed)
{
	std::vector<BaselineOutcome> out;
	out.reserve(realizations);
	for (std::size_t r = 0; r < realizations; ++r)
	{
		const NetworkRealization net =
			sample_network(params, stream_seed(seed ^ baseline_stream, r), Detail::Full);
		out.push_back(baseline_payoff(max_rate_assign(net, params), groups, in));
	}
	return out;
}

EvolutionSummary evolution_study(
	const ValidatedParams & params, const std::vector<double> & initial_shares,
	std::size_t baseline_realizations, std::uint64_t seed)
{
	EvolutionSummary s;
	s.groups = group_sizes(params);
	s.inputs = make_payoff_inputs(params, seed);
	const EvolveOptions opts = evolve_options(params);
	s.equilibrium = equilibrium(s.groups, s.inputs, opts.learning_rate);

	for (std::size_t i = 0; i < initial_shares.size(); ++i)
	{
		const double x0 = initial_shares[i];
		s.runs.push_back(
			{EvolutionMode::Replicator, x0, evolve_replicator({x0, s.groups}, s.inputs, opts)});

		Rng rng = make_stream(seed, i);
		const auto initial_fap = static_cast<std::int64_t>(
			std::floor(x0 * static_cast<double>(s.groups.n_potential_d2d) + 0.5));
		s.runs.push_back(
			{EvolutionMode::AgentBased, x0, evolve_agents(initial_fap, s.groups, s.inputs, opts, rng)});
	}

	s.baseline = baseline_study(params, s.groups, s.inputs, baseline_realizations, seed);
	double sum = 0.0;
	for (const BaselineOutcome & b : s.baseline)
		sum += b.avg_payoff;
	s.baseline_avg_payoff = s.baseline.empty() ? 0.0 : sum / static_cast<double>(s.baseline.size());
	return s;
}

std::vector<fs::path> run_fig4(const ExperimentSpec & spec)
{
	const ValidatedParams params = check_spec(spec);
	const auto rows = rate_curve(params, spec.thresholds, spec.trials, spec.seed, spec.threads);

	fs::create_directories(spec.out_dir);
	const fs::path path = spec.out_dir / "fig4.csv";
	std::ofstream out = open_csv(path, spec);
	out << "T,R_d_analytic,R_d_mc,R_d_mc_stderr,R_f_analytic,R_f_lemma1,R_f_mc,R_f_mc_stderr\n";
	for (const RateCurveRow & r : rows)
		out << fmt::format(
			"{},{},{},{},{},{},{},{}\n", r.threshold, r.d2d_analytic, r.d2d_mc.value, r.d2d_mc.std_error,
			r.fap_analytic, r.fap_lemma ? fmt::format("{}", *r.fap_lemma) : std::string{}, r.fap_mc.value,
			r.fap_mc.std_error);
	return {path};
}

std::vector<fs::path> run_fig56(const ExperimentSpec & spec)
{
	const ValidatedParams params = check_spec(spec);
	const EvolutionSummary s =
		evolution_study(params, spec.initial_shares, spec.baseline_realizations, spec.seed);

	fs::create_directories(spec.out_dir);
	std::vector<fs::path> files;
	for (const EvolutionRun & run : s.runs)
	{
		const fs::path path =
			spec.out_dir / fmt::format("trace_{}_x0_{}.csv", mode_name(run.mode), share_tag(run.x0));
		std::ofstream out = open_csv(path, spec);
		write_trace_csv(out, run.trace);
		files.push_back(path);
	}

	const fs::path path = spec.out_dir / "summary.csv";
	std::ofstream out = open_csv(path, spec);
	out << fmt::format(
		"# equilibrium x_star = {}, boundary = {}, df/dx = {}\n", s.equilibrium.x_star,
		s.equilibrium.boundary, s.equilibrium.certificate.derivative);
	out << "mode,x0,x_star,iterations_to_converge,final_avg_payoff,baseline_avg_payoff,converged\n";
	for (const EvolutionRun & run : s.runs)
	{
		const TraceRow & last = run.trace.final_row();
		out << fmt::format(
			"{},{},{},{},{},{},{}\n", mode_name(run.mode), run.x0, last.x_fap,
			run.trace.converged_at ? fmt::format("{}", *run.trace.converged_at) : std::string{},
			last.avg_payoff, s.baseline_avg_payoff, run.trace.converged() ? 1 : 0);
		if (!run.trace.converged())
			fmt::print(
				stderr, "warning: {} run from x0 = {} did not converge in {} iterations\n",
				mode_name(run.mode), run.x0, params->max_iters);
	}
	files.push_back(path);
	return files;
}

std::vector<fs::path> run_baseline(const ExperimentSpec & spec)
{
	const ValidatedParams params = check_spec(spec);
	const GroupSizes groups = group_sizes(params);
	const PayoffInputs in = make_payoff_inputs(params, spec.seed);
	const Equilibrium eq = equilibrium(groups, in, params->learning_rate);
	const PopulationState eq_state{eq.x_star, groups};
	const double eq_avg = average_payoff(eq_state, payoffs(eq_state, in));

	fs::create_directories(spec.out_dir);
	const fs::path summary_path = spec.out_dir / "baseline.csv";
	std::ofstream summary = open_csv(summary_path, spec);
	summary << "realization,n_require,n_d2d,n_fap,n_potential,n_potential_fap,x_fap,avg_payoff,equilibrium_avg_payoff\n";

	const fs::path assign_path = spec.out_dir / "assignment.csv";
	for (std::size_t r = 0; r < spec.baseline_realizations; ++r)
	{
		const NetworkRealization net =
			sample_network(params, stream_seed(spec.seed ^ baseline_stream, r), Detail::Full);
		const AssignmentResult a = max_rate_assign(net, params);
		const BaselineOutcome b = baseline_payoff(a, groups, in);
		summary << fmt::format(
			"{},{},{},{},{},{},{},{},{}\n", r, a.users.size(), a.n_d2d, a.n_fap, a.n_potential,
			a.n_potential_in_fap, b.x_fap, b.avg_payoff, eq_avg);
		if (r == 0)
		{
			std::ofstream out = open_csv(assign_path, spec);
			write_assignment_csv(out, a);
		}
	}
	if (spec.baseline_realizations == 0)
		return {summary_path};
	return {summary_path, assign_path};
}

std::vector<fs::path> run_scatter(const ExperimentSpec & spec)
{
	const ValidatedParams params = check_spec(spec);
	const NetworkRealization net = sample_network(params, spec.seed, Detail::Full);

	fs::create_directories(spec.out_dir);
	const fs::path path = spec.out_dir / "scatter.csv";
	std::ofstream out = open_csv(path, spec);
	write_realization_csv(out, net);
	return {path};
}

std::vector<fs::path> run_sweep(const ExperimentSpec & spec)
{
	check_spec(spec);
	if (spec.sweep_key.empty())
		throw Error(Errc::ConfigError, "sweep needs a parameter key");
	if (spec.sweep_values.empty())
		throw Error(Errc::ConfigError, "sweep grid is empty");

	fs::create_directories(spec.out_dir);
	const fs::path path = spec.out_dir / "sweep.csv";
	std::ofstream out = open_csv(path, spec);
	out << fmt::format("# sweep = {}\n", spec.sweep_key);
	out << "value,R_d,R_f,coverage_d2d,coverage_fap,n_potential_d2d,x_star,avg_payoff\n";
	for (double v : spec.sweep_values)
	{
		SystemParams p = spec.params;
		apply_override(p, fmt::format("{}={}", spec.sweep_key, v));
		const ValidatedParams params = validate(p);
		const GroupSizes groups = group_sizes(params);
		const PayoffInputs in = make_payoff_inputs(params, spec.seed);
		const Equilibrium eq = equilibrium(groups, in, params->learning_rate);
		const PopulationState state{eq.x_star, groups};
		out << fmt::format(
			"{},{},{},{},{},{},{},{}\n", v, in.rate_d2d, in.rate_fap,
			coverage_d2d(params, p.sir_threshold_d2d, p.d2d_link_distance),
			coverage_fap(params, p.sir_threshold_fap), groups.n_potential_d2d, eq.x_star,
			average_payoff(state, payoffs(state, in)));
	}
	return {path};
}

}  // namespace fran
