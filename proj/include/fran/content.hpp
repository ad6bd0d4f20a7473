#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "fran/scenario.hpp"

namespace fran
{

/// Zipf request probabilities, rank 1 first.
struct PopularityProfile
{
	std::vector<double> probs;

	std::size_t size() const noexcept { return probs.size(); }
};

struct DelayProfile
{
	double phi_d = 0.0;
	double phi_f = 0.0;
	double mean_fronthaul = 0.0;
};

PopularityProfile zipf(std::int64_t n, double sigma);

/// Mass of the `cache_size` most popular files (most-popular-first placement).
double cache_hit_prob(const PopularityProfile & profile, std::int64_t cache_size);

/// 1 - exp(-pi * lambda_tu * p_c * L^2): at least one content-holding
/// transmitter within `range_l` of a requester.
double d2d_availability(double p_c_d2d, double lambda_tu, double range_l);

/// Mean of the Gamma fronthaul delay, (lambda_f/lambda_g) k (a + b mu).
double mean_fronthaul_delay(const ValidatedParams & params);

/// One Gamma(shape = (lambda_f/lambda_g) k, scale = a + b mu) draw.
double sample_fronthaul_delay(const ValidatedParams & params, std::mt19937_64 & rng);

DelayProfile total_delays(const ValidatedParams & params, const PopularityProfile & profile);
DelayProfile total_delays(const ValidatedParams & params);

}  // namespace fran
