#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace fran
{

enum class AccessMode
{
	D2D,
	FAP,
};

constexpr const char * to_string(AccessMode mode)
{
	return mode == AccessMode::D2D ? "D2D" : "FAP";
}

enum class RateSource
{
	Analytic,
	MonteCarlo,
};

/// Every scalar of a scenario. Powers are linear watts and bandwidths hertz;
/// the config reader converts from dBm / MHz. Member defaults are the pinned
/// defaults used by the experiments.
struct SystemParams
{
	// [cache]
	std::int64_t n_contents = 1000;
	double zipf_exponent = 0.8;
	std::int64_t cache_size_d2d = 80;
	std::int64_t cache_size_fap = 300;

	// [network]
	double d2d_range = 30.0;
	double maxrate_search_radius = 30.0;
	double tx_power_d2d = 0.019952623149688795;  // 13 dBm
	double tx_power_fap = 0.19952623149688797;   // 23 dBm
	double bandwidth_d2d = 300e6;
	double bandwidth_fap = 100e6;
	double density_require_users = 6e-5;
	double density_tx_users = 5e-5;
	double density_faps = 3e-5;
	double density_gateways = 2e-6;
	double pathloss_exponent = 4.0;
	double sir_threshold_d2d = 1.0;
	double sir_threshold_fap = 1.0;
	double region_radius = 1000.0;
	double d2d_link_distance = 15.0;

	// [delay]
	double proc_delay_d2d = 1e-3;
	double proc_delay_fap = 2e-3;
	double fronthaul_k = 1.0;
	double fronthaul_a = 0.5e-3;
	double fronthaul_mu = 0.5e-3;
	double fronthaul_packet_b = 1.0;

	// [game]
	double price_d2d = 1e-7;
	double price_fap = 1e-7;
	double cost_c1 = 2.0;
	double cost_c2 = 1.0;
	double cost_c3 = 0.1;
	double cost_c4 = 0.01;
	double learning_rate = 0.5;
	double step_size = 0.05;
	double tolerance = 1e-9;
	std::int64_t max_iters = 10000;
	double switch_probability = 0.5;
	RateSource rate_source = RateSource::Analytic;
	std::int64_t mc_rate_trials = 20000;

	// [simulation]
	double guard_factor = 3.0;
	bool far_field_mean = true;
	bool thin_fap_interferers = false;
	bool printed_d2d_rate_exponent = false;

	bool operator==(const SystemParams &) const = default;
};

/// A SystemParams that passed validate(), plus the cache quantities every
/// module needs. Immutable; safe to share across threads.
class ValidatedParams
{
public:
	const SystemParams & params() const noexcept { return params_; }
	const SystemParams * operator->() const noexcept { return &params_; }

	/// p_c^D, probability a D2D transmitter holds the requested file.
	double hit_d2d() const noexcept { return hit_d2d_; }
	/// p_c^F
	double hit_fap() const noexcept { return hit_fap_; }
	/// probability a requester has a content-holding transmitter within d2d_range
	double d2d_availability() const noexcept { return d2d_avail_; }

	bool operator==(const ValidatedParams &) const = default;

private:
	friend ValidatedParams validate(const SystemParams &);
	ValidatedParams() = default;

	SystemParams params_;
	double hit_d2d_ = 0.0;
	double hit_fap_ = 0.0;
	double d2d_avail_ = 0.0;
};

struct GroupSizes
{
	std::int64_t n_require = 0;
	std::int64_t n_potential_d2d = 0;
	std::int64_t n_potential_fap = 0;

	bool operator==(const GroupSizes &) const = default;
};

/// Throws ConstraintViolation naming the first violated field.
ValidatedParams validate(const SystemParams & params);

/// Expected requester count on the region disc split by D2D availability,
/// both rounded half-up.
GroupSizes group_sizes(const ValidatedParams & params, double p_d2d_avail);

/// Group sizes at the scenario's own D2D availability.
GroupSizes group_sizes(const ValidatedParams & params);

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

// Config file: INI with sections [network] [cache] [delay] [game] [simulation].
// Unknown sections or keys raise Error(Errc::ConfigError).

SystemParams load_config(const std::filesystem::path & path);
SystemParams parse_config(std::string_view text);

/// Applies one `key=value` or `section.key=value` override in config units.
void apply_override(SystemParams & params, std::string_view assignment);

/// Resolved config in INI form; every line gets `line_prefix` (e.g. "# ").
std::string to_ini(const SystemParams & params, std::string_view line_prefix = "");

}  // namespace fran
