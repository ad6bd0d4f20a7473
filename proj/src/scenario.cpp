#include "fran/scenario.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include "fran/content.hpp"
#include "fran/error.hpp"

namespace fran
{

std::string_view to_string(Errc code)
{
	switch (code)
	{
	case Errc::ConstraintViolation: return "ConstraintViolation";
	case Errc::ConfigError: return "ConfigError";
	case Errc::EmptyLibrary: return "EmptyLibrary";
	case Errc::CacheExceedsLibrary: return "CacheExceedsLibrary";
	case Errc::DivisionByZeroGateway: return "DivisionByZeroGateway";
	case Errc::NoFapInRegion: return "NoFapInRegion";
	case Errc::ZeroCoveredSamples: return "ZeroCoveredSamples";
	case Errc::DivergentInterference: return "DivergentInterference";
	case Errc::OutOfDomain: return "OutOfDomain";
	case Errc::WrongExponentForLemma: return "WrongExponentForLemma";
	case Errc::ApproximationDomain: return "ApproximationDomain";
	case Errc::CostOverflow: return "CostOverflow";
	case Errc::DegenerateGame: return "DegenerateGame";
	}
	return "Unknown";
}

double dbm_to_watts(double dbm)
{
	return std::pow(10.0, dbm / 10.0) * 1e-3;
}

double watts_to_dbm(double watts)
{
	return 10.0 * std::log10(watts * 1e3);
}

namespace
{

void require(bool ok, const char * field, const std::string & reason)
{
	if (!ok)
		throw ConstraintViolation(field, reason);
}

void require_positive(double v, const char * field)
{
	require(std::isfinite(v) && v > 0.0, field, fmt::format("must be finite and > 0, got {}", v));
}

void require_non_negative(double v, const char * field)
{
	require(std::isfinite(v) && v >= 0.0, field, fmt::format("must be finite and >= 0, got {}", v));
}

}  // namespace

ValidatedParams validate(const SystemParams & p)
{
	require(p.n_contents >= 1, "n_contents", "library must hold at least one file");
	require_positive(p.zipf_exponent, "zipf_exponent");
	require(p.cache_size_d2d >= 0, "cache_size_d2d", "must be >= 0");
	require(
		p.cache_size_d2d < p.cache_size_fap, "cache_size_d2d",
		fmt::format("must be < cache_size_fap ({} >= {})", p.cache_size_d2d, p.cache_size_fap));
	require(
		p.cache_size_fap < p.n_contents, "cache_size_fap",
		fmt::format("must be < n_contents ({} >= {})", p.cache_size_fap, p.n_contents));

	require(
		std::isfinite(p.pathloss_exponent) && p.pathloss_exponent > 2.0, "pathloss_exponent",
		fmt::format("must be > 2, got {}", p.pathloss_exponent));
	require_positive(p.d2d_range, "d2d_range");
	require_positive(p.maxrate_search_radius, "maxrate_search_radius");
	require_positive(p.tx_power_d2d, "tx_power_d2d");
	require_positive(p.tx_power_fap, "tx_power_fap");
	require_positive(p.bandwidth_d2d, "bandwidth_d2d");
	require_positive(p.bandwidth_fap, "bandwidth_fap");
	require_positive(p.density_require_users, "density_require_users");
	require_positive(p.density_tx_users, "density_tx_users");
	require_positive(p.density_faps, "density_faps");
	require_positive(p.density_gateways, "density_gateways");
	require_positive(p.sir_threshold_d2d, "sir_threshold_d2d");
	require_positive(p.sir_threshold_fap, "sir_threshold_fap");
	require_positive(p.region_radius, "region_radius");
	require_positive(p.d2d_link_distance, "d2d_link_distance");

	require_non_negative(p.proc_delay_d2d, "proc_delay_d2d");
	require_non_negative(p.proc_delay_fap, "proc_delay_fap");
	require_non_negative(p.fronthaul_k, "fronthaul_k");
	require_positive(p.fronthaul_a, "fronthaul_a");
	require_positive(p.fronthaul_mu, "fronthaul_mu");
	require_positive(p.fronthaul_packet_b, "fronthaul_packet_b");

	require_non_negative(p.price_d2d, "price_d2d");
	require_non_negative(p.price_fap, "price_fap");
	require_positive(p.cost_c1, "cost_c1");
	require_positive(p.cost_c2, "cost_c2");
	require_positive(p.cost_c3, "cost_c3");
	require_positive(p.cost_c4, "cost_c4");
	require_positive(p.learning_rate, "learning_rate");
	require_positive(p.step_size, "step_size");
	require_positive(p.tolerance, "tolerance");
	require(p.max_iters >= 1, "max_iters", "must be >= 1");
	require(
		p.switch_probability > 0.0 && p.switch_probability <= 1.0, "switch_probability",
		"must lie in (0, 1]");
	require(p.mc_rate_trials >= 1, "mc_rate_trials", "must be >= 1");
	require(std::isfinite(p.guard_factor) && p.guard_factor >= 1.0, "guard_factor", "must be >= 1");

	ValidatedParams v;
	v.params_ = p;
	const PopularityProfile profile = zipf(p.n_contents, p.zipf_exponent);
	v.hit_d2d_ = cache_hit_prob(profile, p.cache_size_d2d);
	v.hit_fap_ = cache_hit_prob(profile, p.cache_size_fap);
	v.d2d_avail_ = d2d_availability(v.hit_d2d_, p.density_tx_users, p.d2d_range);
	return v;
}

GroupSizes group_sizes(const ValidatedParams & params, double p_d2d_avail)
{
	const auto round_half_up = [](double x) { return static_cast<std::int64_t>(std::floor(x + 0.5)); };
	const double area = M_PI * params->region_radius * params->region_radius;
	GroupSizes g;
	g.n_require = round_half_up(area * params->density_require_users);
	g.n_potential_d2d = round_half_up(static_cast<double>(g.n_require) * p_d2d_avail);
	g.n_potential_fap = g.n_require - g.n_potential_d2d;
	return g;
}

GroupSizes group_sizes(const ValidatedParams & params)
{
	return group_sizes(params, params.d2d_availability());
}

// ---------------------------------------------------------------------------
// Config keys

namespace
{

struct Key
{
	std::string_view section;
	std::string_view name;
	std::function<void(SystemParams &, std::string_view)> set;
	std::function<std::string(const SystemParams &)> get;
};

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view want)
{
	throw Error(
		Errc::ConfigError, fmt::format("config key '{}': cannot parse '{}' as {}", key, value, want));
}

std::string_view trim(std::string_view s)
{
	const auto first = s.find_first_not_of(" \t\r\n");
	if (first == std::string_view::npos)
		return {};
	const auto last = s.find_last_not_of(" \t\r\n");
	return s.substr(first, last - first + 1);
}

double parse_real(std::string_view key, std::string_view text)
{
	text = trim(text);
	double v = 0.0;
	const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
	if (ec != std::errc{} || ptr != text.data() + text.size())
		bad_value(key, text, "a real number");
	return v;
}

std::int64_t parse_int(std::string_view key, std::string_view text)
{
	text = trim(text);
	std::int64_t v = 0;
	const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
	if (ec != std::errc{} || ptr != text.data() + text.size())
		bad_value(key, text, "an integer");
	return v;
}

bool parse_bool(std::string_view key, std::string_view text)
{
	text = trim(text);
	if (text == "true" || text == "1" || text == "yes" || text == "on")
		return true;
	if (text == "false" || text == "0" || text == "no" || text == "off")
		return false;
	bad_value(key, text, "a boolean");
}

Key real(std::string_view section, std::string_view name, double SystemParams::*member)
{
	return {
		section, name,
		[name, member](SystemParams & p, std::string_view v) { p.*member = parse_real(name, v); },
		[member](const SystemParams & p) { return fmt::format("{}", p.*member); }};
}

Key scaled(
	std::string_view section, std::string_view name, double SystemParams::*member,
	double (*to_internal)(double), double (*to_external)(double))
{
	return {
		section, name,
		[=](SystemParams & p, std::string_view v) { p.*member = to_internal(parse_real(name, v)); },
		[=](const SystemParams & p) { return fmt::format("{}", to_external(p.*member)); }};
}

Key integer(std::string_view section, std::string_view name, std::int64_t SystemParams::*member)
{
	return {
		section, name,
		[name, member](SystemParams & p, std::string_view v) { p.*member = parse_int(name, v); },
		[member](const SystemParams & p) { return fmt::format("{}", p.*member); }};
}

Key boolean(std::string_view section, std::string_view name, bool SystemParams::*member)
{
	return {
		section, name,
		[name, member](SystemParams & p, std::string_view v) { p.*member = parse_bool(name, v); },
		[member](const SystemParams & p) { return std::string(p.*member ? "true" : "false"); }};
}

double mhz_to_hz(double v) { return v * 1e6; }
double hz_to_mhz(double v) { return v / 1e6; }

const std::vector<Key> & keys()
{
	static const std::vector<Key> table = [] {
		using P = SystemParams;
		std::vector<Key> k;
		k.push_back(real("network", "region_radius", &P::region_radius));
		k.push_back(real("network", "density_require_users", &P::density_require_users));
		k.push_back(real("network", "density_tx_users", &P::density_tx_users));
		k.push_back(real("network", "density_faps", &P::density_faps));
		k.push_back(real("network", "density_gateways", &P::density_gateways));
		k.push_back(real("network", "pathloss_exponent", &P::pathloss_exponent));
		k.push_back(scaled("network", "tx_power_d2d_dbm", &P::tx_power_d2d, dbm_to_watts, watts_to_dbm));
		k.push_back(scaled("network", "tx_power_fap_dbm", &P::tx_power_fap, dbm_to_watts, watts_to_dbm));
		k.push_back(scaled("network", "bandwidth_d2d_mhz", &P::bandwidth_d2d, mhz_to_hz, hz_to_mhz));
		k.push_back(scaled("network", "bandwidth_fap_mhz", &P::bandwidth_fap, mhz_to_hz, hz_to_mhz));
		k.push_back(real("network", "d2d_range", &P::d2d_range));
		k.push_back(real("network", "maxrate_search_radius", &P::maxrate_search_radius));
		k.push_back(real("network", "d2d_link_distance", &P::d2d_link_distance));
		k.push_back(real("network", "sir_threshold_d2d", &P::sir_threshold_d2d));
		k.push_back(real("network", "sir_threshold_fap", &P::sir_threshold_fap));

		k.push_back(integer("cache", "n_contents", &P::n_contents));
		k.push_back(real("cache", "zipf_exponent", &P::zipf_exponent));
		k.push_back(integer("cache", "cache_size_d2d", &P::cache_size_d2d));
		k.push_back(integer("cache", "cache_size_fap", &P::cache_size_fap));

		k.push_back(real("delay", "proc_delay_d2d", &P::proc_delay_d2d));
		k.push_back(real("delay", "proc_delay_fap", &P::proc_delay_fap));
		k.push_back(real("delay", "fronthaul_k", &P::fronthaul_k));
		k.push_back(real("delay", "fronthaul_a", &P::fronthaul_a));
		k.push_back(real("delay", "fronthaul_mu", &P::fronthaul_mu));
		k.push_back(real("delay", "fronthaul_packet_b", &P::fronthaul_packet_b));

		k.push_back(real("game", "price_d2d", &P::price_d2d));
		k.push_back(real("game", "price_fap", &P::price_fap));
		k.push_back(real("game", "cost_c1", &P::cost_c1));
		k.push_back(real("game", "cost_c2", &P::cost_c2));
		k.push_back(real("game", "cost_c3", &P::cost_c3));
		k.push_back(real("game", "cost_c4", &P::cost_c4));
		k.push_back(real("game", "learning_rate", &P::learning_rate));
		k.push_back(real("game", "step_size", &P::step_size));
		k.push_back(real("game", "tolerance", &P::tolerance));
		k.push_back(integer("game", "max_iters", &P::max_iters));
		k.push_back(real("game", "switch_probability", &P::switch_probability));
		k.push_back(Key{
			"game", "rate_source",
			[](SystemParams & p, std::string_view v) {
				v = trim(v);
				if (v == "analytic")
					p.rate_source = RateSource::Analytic;
				else if (v == "montecarlo")
					p.rate_source = RateSource::MonteCarlo;
				else
					bad_value("rate_source", v, "'analytic' or 'montecarlo'");
			},
			[](const SystemParams & p) {
				return std::string(p.rate_source == RateSource::Analytic ? "analytic" : "montecarlo");
			}});
		k.push_back(integer("game", "mc_rate_trials", &P::mc_rate_trials));

		k.push_back(real("simulation", "guard_factor", &P::guard_factor));
		k.push_back(boolean("simulation", "far_field_mean", &P::far_field_mean));
		k.push_back(boolean("simulation", "thin_fap_interferers", &P::thin_fap_interferers));
		k.push_back(boolean("simulation", "printed_d2d_rate_exponent", &P::printed_d2d_rate_exponent));
		return k;
	}();
	return table;
}

const Key & find_key(std::string_view section, std::string_view name)
{
	const Key * hit = nullptr;
	for (const Key & k : keys())
	{
		if (k.name != name || (!section.empty() && k.section != section))
			continue;
		hit = &k;
		break;
	}
	if (hit == nullptr)
	{
		if (section.empty())
			throw Error(Errc::ConfigError, fmt::format("unknown config key '{}'", name));
		throw Error(Errc::ConfigError, fmt::format("unknown config key '{}.{}'", section, name));
	}
	return *hit;
}

}  // namespace

SystemParams parse_config(std::string_view text)
{
	namespace pt = boost::property_tree;
	pt::ptree tree;
	std::istringstream in{std::string(text)};
	try
	{
		pt::read_ini(in, tree);
	}
	catch (const pt::ini_parser_error & e)
	{
		throw Error(Errc::ConfigError, e.what());
	}

	SystemParams params;
	for (const auto & [section, body] : tree)
	{
		if (body.empty())
			throw Error(
				Errc::ConfigError, fmt::format("config key '{}' must live inside a section", section));
		for (const auto & [name, value] : body)
			find_key(section, name).set(params, value.data());
	}
	return params;
}

SystemParams load_config(const std::filesystem::path & path)
{
	std::ifstream in(path);
	if (!in)
		throw Error(Errc::ConfigError, "cannot open config file " + path.string());
	std::ostringstream buf;
	buf << in.rdbuf();
	return parse_config(buf.str());
}

void apply_override(SystemParams & params, std::string_view assignment)
{
	const auto eq = assignment.find('=');
	if (eq == std::string_view::npos)
		throw Error(
			Errc::ConfigError, fmt::format("override '{}' is not of the form key=value", assignment));
	const std::string_view lhs = trim(assignment.substr(0, eq));
	const std::string_view value = trim(assignment.substr(eq + 1));
	const auto dot = lhs.find('.');
	if (dot == std::string_view::npos)
		find_key({}, lhs).set(params, value);
	else
		find_key(lhs.substr(0, dot), lhs.substr(dot + 1)).set(params, value);
}

std::string to_ini(const SystemParams & params, std::string_view line_prefix)
{
	std::string out;
	std::string_view section;
	for (const Key & k : keys())
	{
		if (k.section != section)
		{
			section = k.section;
			out += fmt::format("{}[{}]\n", line_prefix, section);
		}
		out += fmt::format("{}{} = {}\n", line_prefix, k.name, k.get(params));
	}
	return out;
}

}  // namespace fran
