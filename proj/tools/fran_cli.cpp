// fran: access-mode selection experiments.
//
//   fran validate --config scenario.ini --set game.cost_c1=3
//   fran fig4 --trials 100000 --seed 7 --out out/fig4
//   fran evolve --x0 0.1,0.5,0.9 --out out/evolve
//   fran baseline --realizations 20 --out out/baseline
//   fran scatter --seed 3 --out out/scatter
//   fran sweep --param network.density_faps --values 1e-5,3e-5,5e-5 --out out/sweep

#include <CLI11.hpp>
#include <chrono>
#include <fmt/format.h>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "fran/analytics.hpp"
#include "fran/content.hpp"
#include "fran/error.hpp"
#include "fran/experiments.hpp"

#ifndef FRAN_VERSION
#define FRAN_VERSION "unknown"
#endif

namespace
{

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct CommonOptions
{
	std::string config;
	std::vector<std::string> overrides;
	std::uint64_t seed = 1;
	std::size_t trials = 100000;
	std::string out = ".";
	bool out_given = false;
	unsigned threads = 0;
};

void add_common(CLI::App & sub, CommonOptions & o)
{
	sub.add_option("--config", o.config, "INI scenario file")->check(CLI::ExistingFile);
	sub.add_option("--set", o.overrides, "override, section.key=value (repeatable)");
	sub.add_option("--seed", o.seed, "master seed");
	sub.add_option("--trials", o.trials, "Monte Carlo trials");
	sub.add_option("--out", o.out, "output directory");
	sub.add_option("--threads", o.threads, "worker threads, 0 = all cores");
}

fran::ExperimentSpec make_spec(const std::string & name, const CommonOptions & o)
{
	fran::ExperimentSpec spec;
	spec.name = name;
	if (!o.config.empty())
	{
		spec.config_path = o.config;
		spec.params = fran::load_config(o.config);
	}
	for (const std::string & s : o.overrides)
		fran::apply_override(spec.params, s);
	spec.seed = o.seed;
	spec.trials = o.trials;
	spec.out_dir = o.out;
	spec.threads = o.threads;
	return spec;
}

json config_json(const fran::SystemParams & params)
{
	json cfg = json::object();
	std::istringstream ini(fran::to_ini(params));
	std::string line, section;
	while (std::getline(ini, line))
	{
		if (line.empty())
			continue;
		if (line.front() == '[')
		{
			section = line.substr(1, line.size() - 2);
			cfg[section] = json::object();
			continue;
		}
		const auto eq = line.find(" = ");
		if (eq != std::string::npos)
			cfg[section][line.substr(0, eq)] = line.substr(eq + 3);
	}
	return cfg;
}

void write_manifest(
	const fran::ExperimentSpec & spec, const std::vector<fs::path> & files, double seconds,
	const json & error)
{
	json m;
	m["version"] = FRAN_VERSION;
	m["experiment"] = spec.name;
	m["seed"] = spec.seed;
	m["trials"] = spec.trials;
	if (spec.config_path)
		m["config_file"] = spec.config_path->string();
	m["config"] = config_json(spec.params);
	json outputs = json::array();
	for (const fs::path & f : files)
		outputs.push_back(f.filename().string());
	m["outputs"] = outputs;
	m["wall_clock_seconds"] = seconds;
	m["status"] = error.is_null() ? "ok" : "error";
	if (!error.is_null())
		m["error"] = error;

	fs::create_directories(spec.out_dir);
	std::ofstream(spec.out_dir / "manifest.json") << m.dump(2) << '\n';
}

void print_summary(const fran::ExperimentSpec & spec)
{
	const fran::ValidatedParams params = fran::check_spec(spec);
	const fran::GroupSizes groups = fran::group_sizes(params);
	const fran::DelayProfile delays = fran::total_delays(params);
	const fran::SystemParams & p = params.params();

	std::cout << fran::to_ini(p);
	std::cout << fmt::format(
		"\n# derived\n"
		"hit_d2d = {}\nhit_fap = {}\nd2d_availability = {}\n"
		"n_require = {}\nn_potential_d2d = {}\nn_potential_fap = {}\n"
		"phi_d2d_s = {}\nphi_fap_s = {}\n"
		"coverage_d2d = {}\ncoverage_fap = {}\nrate_d2d = {}\nrate_fap = {}\n",
		params.hit_d2d(), params.hit_fap(), params.d2d_availability(), groups.n_require,
		groups.n_potential_d2d, groups.n_potential_fap, delays.phi_d, delays.phi_f,
		fran::coverage_d2d(params, p.sir_threshold_d2d, p.d2d_link_distance),
		fran::coverage_fap(params, p.sir_threshold_fap),
		fran::ergodic_rate_d2d(params, p.sir_threshold_d2d, p.d2d_link_distance),
		fran::ergodic_rate_fap(params, p.sir_threshold_fap));
}

}  // namespace

int main(int argc, char ** argv)
{
	CLI::App app{"F-RAN access-mode selection experiments"};
	app.set_version_flag("--version", std::string(FRAN_VERSION));
	app.require_subcommand(1);

	CommonOptions o;
	std::vector<double> thresholds{1.0, 2.0, 4.0, 8.0, 16.0};
	std::vector<double> shares{0.1, 0.5, 0.9};
	std::size_t realizations = 20;
	std::string sweep_key;
	std::vector<double> sweep_values;

	auto * validate = app.add_subcommand("validate", "check a scenario and print derived quantities");
	auto * fig4 = app.add_subcommand("fig4", "analytic and simulated rates against SIR threshold");
	auto * evolve = app.add_subcommand("evolve", "replicator and agent evolution traces");
	auto * baseline = app.add_subcommand("baseline", "max-rate assignment payoffs");
	auto * scatter = app.add_subcommand("scatter", "dump one network realization");
	auto * sweep = app.add_subcommand("sweep", "equilibrium over one swept parameter");
	for (CLI::App * sub : {validate, fig4, evolve, baseline, scatter, sweep})
		add_common(*sub, o);

	fig4->add_option("--thresholds", thresholds, "SIR thresholds (linear)")->delimiter(',');
	evolve->add_option("--x0", shares, "initial F-AP shares")->delimiter(',');
	evolve->add_option("--realizations", realizations, "baseline realizations");
	baseline->add_option("--realizations", realizations, "realizations");
	sweep->add_option("--param", sweep_key, "section.key to sweep")->required();
	sweep->add_option("--values", sweep_values, "values in config units")->delimiter(',')->required();

	CLI11_PARSE(app, argc, argv);

	CLI::App * sub = app.get_subcommands().front();
	o.out_given = sub->count("--out") > 0;

	fran::ExperimentSpec spec;
	const auto start = std::chrono::steady_clock::now();
	auto elapsed = [&] {
		return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
	};

	json error;
	std::vector<fs::path> files;
	try
	{
		spec = make_spec(sub->get_name(), o);
		spec.thresholds = thresholds;
		spec.initial_shares = shares;
		spec.baseline_realizations = realizations;
		spec.sweep_key = sweep_key;
		spec.sweep_values = sweep_values;

		if (sub == validate)
			print_summary(spec);
		else if (sub == fig4)
			files = fran::run_fig4(spec);
		else if (sub == evolve)
			files = fran::run_fig56(spec);
		else if (sub == baseline)
			files = fran::run_baseline(spec);
		else if (sub == scatter)
			files = fran::run_scatter(spec);
		else if (sub == sweep)
			files = fran::run_sweep(spec);
	}
	catch (const fran::ConstraintViolation & e)
	{
		error = {{"code", fran::to_string(e.code())}, {"field", e.field()}, {"message", e.what()}};
	}
	catch (const fran::Error & e)
	{
		error = {{"code", fran::to_string(e.code())}, {"message", e.what()}};
	}
	catch (const std::exception & e)
	{
		error = {{"code", "InternalError"}, {"message", e.what()}};
	}

	const bool wants_manifest = sub != validate || o.out_given;
	if (wants_manifest)
	{
		try
		{
			write_manifest(spec, files, elapsed(), error);
		}
		catch (const std::exception & e)
		{
			if (error.is_null())
				error = {{"code", "InternalError"}, {"message", e.what()}};
		}
	}

	if (!error.is_null())
	{
		std::cerr << json{{"status", "error"}, {"experiment", sub->get_name()}, {"error", error}}.dump()
				  << '\n';
		return 1;
	}
	for (const fs::path & f : files)
		std::cout << f.string() << '\n';
	return 0;
}
