#include "fran/content.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "fran/error.hpp"

namespace fran
{

PopularityProfile zipf(std::int64_t n, double sigma)
{
	if (n < 1)
		throw Error(Errc::EmptyLibrary, "zipf: library size must be >= 1, got " + std::to_string(n));

	PopularityProfile profile;
	profile.probs.resize(static_cast<std::size_t>(n));
	for (std::int64_t i = 0; i < n; ++i)
		profile.probs[static_cast<std::size_t>(i)] = std::pow(static_cast<double>(i + 1), -sigma);

	// Summing smallest-first keeps the normaliser accurate for long tails.
	const double norm = std::accumulate(profile.probs.rbegin(), profile.probs.rend(), 0.0);
	for (double & p : profile.probs)
		p /= norm;
	return profile;
}

double cache_hit_prob(const PopularityProfile & profile, std::int64_t cache_size)
{
	if (cache_size < 0 || static_cast<std::size_t>(cache_size) > profile.size())
		throw Error(
			Errc::CacheExceedsLibrary,
			"cache size " + std::to_string(cache_size) + " exceeds library of " +
				std::to_string(profile.size()));
	if (static_cast<std::size_t>(cache_size) == profile.size())
		return 1.0;
	const auto end = profile.probs.begin() + cache_size;
	return std::min(1.0, std::accumulate(profile.probs.begin(), end, 0.0));
}

double d2d_availability(double p_c_d2d, double lambda_tu, double range_l)
{
	if (std::isinf(range_l) && p_c_d2d > 0.0 && lambda_tu > 0.0)
		return 1.0;
	return -std::expm1(-M_PI * lambda_tu * p_c_d2d * range_l * range_l);
}

namespace
{
double gamma_shape(const SystemParams & p)
{
	return p.density_faps / p.density_gateways * p.fronthaul_k;
}

double gamma_scale(const SystemParams & p)
{
	return p.fronthaul_a + p.fronthaul_packet_b * p.fronthaul_mu;
}
}  // namespace

double mean_fronthaul_delay(const ValidatedParams & params)
{
	if (params->density_gateways == 0.0)
		throw Error(Errc::DivisionByZeroGateway, "mean_fronthaul_delay: gateway density is zero");
	return gamma_shape(params.params()) * gamma_scale(params.params());
}

double sample_fronthaul_delay(const ValidatedParams & params, std::mt19937_64 & rng)
{
	const double shape = gamma_shape(params.params());
	if (shape == 0.0)
		return 0.0;
	std::gamma_distribution<double> gamma(shape, gamma_scale(params.params()));
	return gamma(rng);
}

DelayProfile total_delays(const ValidatedParams & params, const PopularityProfile & profile)
{
	const double hit_d = cache_hit_prob(profile, params->cache_size_d2d);
	const double hit_f = cache_hit_prob(profile, params->cache_size_fap);
	DelayProfile delays;
	delays.mean_fronthaul = mean_fronthaul_delay(params);
	delays.phi_d = hit_d * params->proc_delay_d2d;
	delays.phi_f = hit_f * params->proc_delay_fap + (1.0 - hit_f) * delays.mean_fronthaul;
	return delays;
}

DelayProfile total_delays(const ValidatedParams & params)
{
	return total_delays(params, zipf(params->n_contents, params->zipf_exponent));
}

}  // namespace fran
