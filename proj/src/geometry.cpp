#include "fran/geometry.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <numbers>
#include <ostream>
#include <thread>

#include "fran/error.hpp"

namespace fran
{

namespace
{

constexpr double pi = std::numbers::pi;

Eigen::VectorXd exp_marks(Eigen::Index n, Rng & rng)
{
	std::exponential_distribution<double> exp1(1.0);
	Eigen::VectorXd marks(n);
	for (Eigen::Index i = 0; i < n; ++i)
		marks[i] = exp1(rng);
	return marks;
}

// d^-alpha from a squared distance; the common exponents skip std::pow.
double path_gain(double dist_sq, double alpha)
{
	if (alpha == 4.0)
		return 1.0 / (dist_sq * dist_sq);
	if (alpha == 3.0)
		return 1.0 / (dist_sq * std::sqrt(dist_sq));
	if (alpha == 5.0)
		return 1.0 / (dist_sq * dist_sq * std::sqrt(dist_sq));
	return std::pow(dist_sq, -0.5 * alpha);
}

// Path-loss weighted interference sums seen at the origin.
struct FieldSums
{
	double tx_cached = 0.0;
	double tx_all = 0.0;
	double fap_all = 0.0;
	double fap_others = 0.0;
	Eigen::Index nearest_fap = -1;
	double nearest_sq = std::numeric_limits<double>::infinity();
};

FieldSums field_sums(const NetworkRealization & net, double alpha)
{
	FieldSums s;
	const Eigen::VectorXd tx_sq = (net.tx_users.colwise() - net.typical_user).colwise().squaredNorm();
	for (Eigen::Index i = 0; i < tx_sq.size(); ++i)
	{
		const double w = net.tx_fading[i] * path_gain(tx_sq[i], alpha);
		s.tx_all += w;
		if (net.tx_cached[static_cast<std::size_t>(i)])
			s.tx_cached += w;
	}

	const Eigen::VectorXd fap_sq = (net.faps.colwise() - net.typical_user).colwise().squaredNorm();
	if (fap_sq.size() > 0)
		s.nearest_sq = fap_sq.minCoeff(&s.nearest_fap);
	for (Eigen::Index j = 0; j < fap_sq.size(); ++j)
	{
		const double w = net.fap_fading[j] * path_gain(fap_sq[j], alpha);
		s.fap_all += w;
		if (j != s.nearest_fap)
			s.fap_others += w;
	}
	return s;
}

double ratio(double signal, double interference)
{
	return interference > 0.0 ? signal / interference : std::numeric_limits<double>::infinity();
}

double d2d_interference(const FieldSums & s, double sim_radius, const ValidatedParams & vp)
{
	const SystemParams & p = vp.params();
	double interference = p.tx_power_d2d * s.tx_cached + p.tx_power_fap * s.fap_all;
	if (p.far_field_mean)
		interference +=
			far_field_interference(vp.hit_d2d() * p.density_tx_users, p.tx_power_d2d, sim_radius, p.pathloss_exponent) +
			far_field_interference(p.density_faps, p.tx_power_fap, sim_radius, p.pathloss_exponent);
	return interference;
}

double fap_interference(const FieldSums & s, double sim_radius, const ValidatedParams & vp)
{
	const SystemParams & p = vp.params();
	const double tx_sum = p.thin_fap_interferers ? s.tx_cached : s.tx_all;
	double interference = p.tx_power_d2d * tx_sum + p.tx_power_fap * s.fap_others;
	if (p.far_field_mean)
	{
		const double tx_density =
			p.thin_fap_interferers ? vp.hit_d2d() * p.density_tx_users : p.density_tx_users;
		interference +=
			far_field_interference(tx_density, p.tx_power_d2d, sim_radius, p.pathloss_exponent) +
			far_field_interference(p.density_faps, p.tx_power_fap, sim_radius, p.pathloss_exponent);
	}
	return interference;
}

double d2d_signal(const ValidatedParams & vp, double fading)
{
	const SystemParams & p = vp.params();
	return p.tx_power_d2d * fading * std::pow(p.d2d_link_distance, -p.pathloss_exponent);
}

double fap_signal(const ValidatedParams & vp, double nearest_sq, double fading)
{
	const SystemParams & p = vp.params();
	return p.tx_power_fap * fading * path_gain(nearest_sq, p.pathloss_exponent);
}

SirSample d2d_from(const FieldSums & s, const NetworkRealization & net, const ValidatedParams & vp, Rng & rng)
{
	std::exponential_distribution<double> exp1(1.0);
	std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
	const double theta = angle(rng);
	const double h = exp1(rng);

	const double d = vp->d2d_link_distance;
	SirSample out;
	out.mode = AccessMode::D2D;
	out.serving_distance = d;
	out.serving_position = net.typical_user + d * Eigen::Vector2d(std::cos(theta), std::sin(theta));
	out.sir = ratio(d2d_signal(vp, h), d2d_interference(s, net.sim_radius, vp));
	return out;
}

SirSample fap_from(const FieldSums & s, const NetworkRealization & net, const ValidatedParams & vp, Rng & rng)
{
	if (s.nearest_fap < 0)
		throw Error(Errc::NoFapInRegion, "sir_fap: realization holds no F-AP");
	std::exponential_distribution<double> exp1(1.0);
	const double h = exp1(rng);

	SirSample out;
	out.mode = AccessMode::FAP;
	out.serving_position = net.faps.col(s.nearest_fap);
	out.serving_distance = std::sqrt(s.nearest_sq);
	out.sir = ratio(fap_signal(vp, s.nearest_sq, h), fap_interference(s, net.sim_radius, vp));
	return out;
}

// Fading-weighted path-gain sum of a PPP on the disc as seen from its centre.
// Only distances matter, so r^2 is drawn uniform on (0, R^2]. With `nearest`
// set, the closest point is kept out of the sum and reported instead.
double radial_sum(
	double density, double radius, double alpha, Rng & rng, double * nearest_sq = nullptr)
{
	if (!(density > 0.0))
		return 0.0;
	const double r2_max = radius * radius;
	std::poisson_distribution<long> count(density * pi * r2_max);
	std::uniform_real_distribution<double> unit(0.0, 1.0);
	std::exponential_distribution<double> exp1(1.0);

	const long n = count(rng);
	double sum = 0.0;
	double held = 0.0;
	double best = std::numeric_limits<double>::infinity();
	for (long i = 0; i < n; ++i)
	{
		const double r2 = r2_max * (1.0 - unit(rng));
		const double w = exp1(rng) * path_gain(r2, alpha);
		if (nearest_sq != nullptr && r2 < best)
		{
			sum += held;
			held = w;
			best = r2;
		}
		else
			sum += w;
	}
	if (nearest_sq != nullptr)
		*nearest_sq = best;
	return sum;
}

// One trial of the batch estimator. Content marks split the transmitters into
// two independent PPPs of density p_c and 1 - p_c times the total.
bool radial_trial(const ValidatedParams & vp, Rng & rng, double & sir_d, double & sir_f, double & fap_dist)
{
	const SystemParams & p = vp.params();
	const double alpha = p.pathloss_exponent;
	const double radius = p.guard_factor * p.region_radius;

	FieldSums s;
	s.fap_others = radial_sum(p.density_faps, radius, alpha, rng, &s.nearest_sq);
	s.tx_cached = radial_sum(vp.hit_d2d() * p.density_tx_users, radius, alpha, rng);
	s.tx_all = s.tx_cached + radial_sum((1.0 - vp.hit_d2d()) * p.density_tx_users, radius, alpha, rng);
	if (std::isinf(s.nearest_sq))
		return false;
	s.nearest_fap = 0;

	// The serving F-AP still interferes with the D2D link, through its own mark.
	std::exponential_distribution<double> exp1(1.0);
	s.fap_all = s.fap_others + exp1(rng) * path_gain(s.nearest_sq, alpha);

	sir_d = ratio(d2d_signal(vp, exp1(rng)), d2d_interference(s, radius, vp));
	sir_f = ratio(fap_signal(vp, s.nearest_sq, exp1(rng)), fap_interference(s, radius, vp));
	fap_dist = std::sqrt(s.nearest_sq);
	return std::isfinite(sir_d) && std::isfinite(sir_f);
}

}  // namespace

Points sample_ppp(double density, double radius, Rng & rng)
{
	if (!(density > 0.0) || !(radius > 0.0))
		return Points(2, 0);
	std::poisson_distribution<long> count(density * pi * radius * radius);
	const long n = count(rng);

	// Rejection from the bounding square keeps positions uniform on the disc.
	std::uniform_real_distribution<double> coord(-radius, radius);
	const double r2 = radius * radius;
	Points pts(2, n);
	for (long i = 0; i < n;)
	{
		const double x = coord(rng);
		const double y = coord(rng);
		if (x * x + y * y > r2)
			continue;
		pts(0, i) = x;
		pts(1, i) = y;
		++i;
	}
	return pts;
}

NetworkRealization sample_network(const ValidatedParams & vp, std::uint64_t seed, Detail detail)
{
	const SystemParams & p = vp.params();
	Rng rng(seed);
	NetworkRealization net;
	net.rng_seed = seed;
	net.region_radius = p.region_radius;
	net.sim_radius = p.guard_factor * p.region_radius;

	net.faps = sample_ppp(p.density_faps, net.sim_radius, rng);
	net.fap_fading = exp_marks(net.faps.cols(), rng);

	net.tx_users = sample_ppp(p.density_tx_users, net.sim_radius, rng);
	std::bernoulli_distribution cached(vp.hit_d2d());
	net.tx_cached.resize(static_cast<std::size_t>(net.tx_users.cols()));
	for (auto & c : net.tx_cached)
		c = cached(rng) ? 1 : 0;
	net.tx_fading = exp_marks(net.tx_users.cols(), rng);

	if (detail == Detail::Full)
	{
		net.require_users = sample_ppp(p.density_require_users, p.region_radius, rng);
		net.gateways = sample_ppp(p.density_gateways, p.region_radius, rng);
	}
	else
	{
		net.require_users = Points(2, 0);
		net.gateways = Points(2, 0);
	}
	return net;
}

NetworkRealization rotated(const NetworkRealization & net, double angle)
{
	const Eigen::Matrix2d rot = Eigen::Rotation2Dd(angle).toRotationMatrix();
	NetworkRealization out = net;
	out.faps = rot * net.faps;
	out.tx_users = rot * net.tx_users;
	out.require_users = rot * net.require_users;
	out.gateways = rot * net.gateways;
	out.typical_user = rot * net.typical_user;
	return out;
}

double far_field_interference(double density, double power, double radius, double alpha)
{
	return 2.0 * pi * density * power * std::pow(radius, 2.0 - alpha) / (alpha - 2.0);
}

SirSample sir_d2d(const NetworkRealization & net, const ValidatedParams & params, Rng & rng)
{
	return d2d_from(field_sums(net, params->pathloss_exponent), net, params, rng);
}

SirSample sir_fap(const NetworkRealization & net, const ValidatedParams & params, Rng & rng)
{
	return fap_from(field_sums(net, params->pathloss_exponent), net, params, rng);
}

SirPair sir_pair(const NetworkRealization & net, const ValidatedParams & params, Rng & rng)
{
	const FieldSums sums = field_sums(net, params->pathloss_exponent);
	SirPair pair;
	pair.d2d = d2d_from(sums, net, params, rng);
	pair.fap = fap_from(sums, net, params, rng);
	return pair;
}

// ---------------------------------------------------------------------------

SirBatch sample_sir_batch(
	const ValidatedParams & params, std::size_t trials, std::uint64_t seed, unsigned threads)
{
	SirBatch batch;
	batch.d2d.resize(trials);
	batch.fap.resize(trials);
	batch.fap_serving_distance.resize(trials);

	if (threads == 0)
		threads = std::max(1u, std::thread::hardware_concurrency());
	threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(trials, 1)));

	std::vector<std::size_t> discards(threads, 0);
	const auto work = [&](unsigned worker) {
		const std::size_t begin = trials * worker / threads;
		const std::size_t end = trials * (worker + 1) / threads;
		for (std::size_t i = begin; i < end; ++i)
		{
			Rng rng = make_stream(seed, i);
			for (;;)
			{
				if (radial_trial(params, rng, batch.d2d[i], batch.fap[i], batch.fap_serving_distance[i]))
					break;
				++discards[worker];
			}
		}
	};

	if (threads == 1)
		work(0);
	else
	{
		std::vector<std::jthread> pool;
		pool.reserve(threads);
		for (unsigned w = 0; w < threads; ++w)
			pool.emplace_back(work, w);
	}
	for (std::size_t d : discards)
		batch.discarded += d;
	return batch;
}

const std::vector<double> & samples(const SirBatch & batch, AccessMode mode)
{
	return mode == AccessMode::D2D ? batch.d2d : batch.fap;
}

Estimate coverage_estimate(const std::vector<double> & sir, double threshold)
{
	const auto n = sir.size();
	const auto hits = std::count_if(sir.begin(), sir.end(), [&](double s) { return s >= threshold; });
	Estimate e;
	e.trials = n;
	if (n == 0)
		return e;
	e.value = static_cast<double>(hits) / static_cast<double>(n);
	e.std_error = std::sqrt(e.value * (1.0 - e.value) / static_cast<double>(n));
	return e;
}

Estimate ergodic_rate_estimate(const std::vector<double> & sir, double threshold)
{
	double sum = 0.0;
	double sum_sq = 0.0;
	std::size_t covered = 0;
	for (double s : sir)
	{
		if (!(s >= threshold))
			continue;
		const double y = std::log1p(s);
		sum += y;
		sum_sq += y * y;
		++covered;
	}
	if (covered == 0)
		throw Error(
			Errc::ZeroCoveredSamples,
			fmt::format("no sample out of {} reached threshold {}", sir.size(), threshold));

	const double n = static_cast<double>(sir.size());
	Estimate e;
	e.trials = sir.size();
	e.value = sum / n;
	const double var = std::max(0.0, sum_sq / n - e.value * e.value);
	e.std_error = std::sqrt(var / n);
	return e;
}

Estimate mc_coverage(
	const ValidatedParams & params, AccessMode mode, double threshold, std::size_t trials,
	std::uint64_t seed)
{
	const SirBatch batch = sample_sir_batch(params, trials, seed);
	Estimate e = coverage_estimate(samples(batch, mode), threshold);
	e.discarded = batch.discarded;
	return e;
}

Estimate mc_ergodic_rate(
	const ValidatedParams & params, AccessMode mode, double threshold, std::size_t trials,
	std::uint64_t seed)
{
	const SirBatch batch = sample_sir_batch(params, trials, seed);
	Estimate e = ergodic_rate_estimate(samples(batch, mode), threshold);
	e.discarded = batch.discarded;
	return e;
}

void write_realization_csv(std::ostream & out, const NetworkRealization & net)
{
	out << "x,y,class,cached\n";
	const auto rows = [&](const Points & pts, const char * cls, const std::vector<std::uint8_t> * marks) {
		for (Eigen::Index i = 0; i < pts.cols(); ++i)
		{
			const int cached = marks != nullptr ? (*marks)[static_cast<std::size_t>(i)] : 0;
			out << fmt::format("{},{},{},{}\n", pts(0, i), pts(1, i), cls, cached);
		}
	};
	rows(net.faps, "fap", nullptr);
	rows(net.tx_users, "tx_user", &net.tx_cached);
	rows(net.require_users, "require_user", nullptr);
	rows(net.gateways, "gateway", nullptr);
}

}  // namespace fran
