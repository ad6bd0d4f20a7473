#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "fran/rng.hpp"
#include "fran/scenario.hpp"

namespace fran
{

/// Column-wise 2-D points in metres.
using Points = Eigen::Matrix2Xd;

/// One draw of the network around a typical requester at the origin.
///
/// F-APs and D2D transmitters cover the simulation disc (guard_factor times
/// the region radius) so the typical user sees an interference field close
/// to the infinite plane; requesters and gateways cover the region disc.
/// Each F-AP and transmitter carries an Exp(1) fading mark for its link to
/// the typical user; transmitters also carry a Bernoulli(p_c^D) cache mark.
struct NetworkRealization
{
	Points faps;
	Eigen::VectorXd fap_fading;
	Points tx_users;
	std::vector<std::uint8_t> tx_cached;
	Eigen::VectorXd tx_fading;
	Points require_users;
	Points gateways;
	Eigen::Vector2d typical_user = Eigen::Vector2d::Zero();
	double sim_radius = 0.0;
	double region_radius = 0.0;
	std::uint64_t rng_seed = 0;
};

enum class Detail
{
	InterferenceOnly,  // F-APs and transmitters only
	Full,              // plus requesters and gateways
};

struct SirSample
{
	double sir = 0.0;  // +inf when the realization has no interferer
	double serving_distance = 0.0;
	AccessMode mode = AccessMode::D2D;
	Eigen::Vector2d serving_position = Eigen::Vector2d::Zero();
};

struct SirPair
{
	SirSample d2d;
	SirSample fap;
};

/// Homogeneous PPP of `density` on the disc of `radius` centred at the origin.
Points sample_ppp(double density, double radius, Rng & rng);

NetworkRealization sample_network(
	const ValidatedParams & params, std::uint64_t seed, Detail detail = Detail::Full);

/// Every point and the typical user rotated about the origin.
NetworkRealization rotated(const NetworkRealization & net, double angle);

/// Mean interference from a PPP outside `radius` (Campbell), unit fading mean.
double far_field_interference(double density, double power, double radius, double alpha);

/// D2D link at d2d_link_distance in a uniform direction; interferers are the
/// content-marked transmitters and every F-AP.
SirSample sir_d2d(const NetworkRealization & net, const ValidatedParams & params, Rng & rng);

/// Nearest F-AP serves; the other F-APs and every transmitter (or only the
/// content-marked ones when thin_fap_interferers) interfere.
SirSample sir_fap(const NetworkRealization & net, const ValidatedParams & params, Rng & rng);

/// Both modes of one realization; shares the interferer sums.
SirPair sir_pair(const NetworkRealization & net, const ValidatedParams & params, Rng & rng);

// ---------------------------------------------------------------------------
// Monte Carlo estimators

struct SirBatch
{
	std::vector<double> d2d;
	std::vector<double> fap;
	std::vector<double> fap_serving_distance;
	std::size_t discarded = 0;  // zero-interference realizations resampled
};

struct Estimate
{
	double value = 0.0;
	double std_error = 0.0;
	std::size_t trials = 0;
	std::size_t discarded = 0;
};

/// `trials` independent interference fields around the origin, drawn from
/// distances alone (the same law as sir_pair on a sampled realization).
/// Trial i draws from stream_seed(seed, i)
/// so the result does not depend on `threads` (0 = hardware concurrency).
SirBatch sample_sir_batch(
	const ValidatedParams & params, std::size_t trials, std::uint64_t seed, unsigned threads = 0);

const std::vector<double> & samples(const SirBatch & batch, AccessMode mode);

/// Fraction of samples with SIR >= threshold, binomial standard error.
Estimate coverage_estimate(const std::vector<double> & sir, double threshold);

/// Mean of ln(1+SIR) 1{SIR >= threshold}: the truncated-mean quantity the
/// high-SIR rate formulas approximate. Throws ZeroCoveredSamples.
Estimate ergodic_rate_estimate(const std::vector<double> & sir, double threshold);

Estimate mc_coverage(
	const ValidatedParams & params, AccessMode mode, double threshold, std::size_t trials,
	std::uint64_t seed);

Estimate mc_ergodic_rate(
	const ValidatedParams & params, AccessMode mode, double threshold, std::size_t trials,
	std::uint64_t seed);

/// x,y,class,cached rows (class in fap, tx_user, require_user, gateway).
void write_realization_csv(std::ostream & out, const NetworkRealization & net);

}  // namespace fran
