#include "fran/analytics.hpp"

#include <cmath>
#include <fmt/format.h>
#include <iostream>
#include <limits>
#include <numbers>

#include "fran/error.hpp"
#include "fran/quadrature.hpp"

namespace fran
{

namespace
{

constexpr double pi = std::numbers::pi;

void require_domain(bool ok, const char * what)
{
	if (!ok)
		throw Error(Errc::OutOfDomain, what);
}

double clamp_rate(double rate, const char * mode, double threshold)
{
	if (rate >= 0.0)
		return rate;
	std::clog << fmt::format(
		"warning: {} ergodic rate {} clamped to 0 at threshold {} (below the high-SIR regime)\n",
		mode, rate, threshold);
	return 0.0;
}

// E1(z) for z > 0.
double expint_e1(double z)
{
	constexpr double euler = std::numbers::egamma;
	constexpr double eps = 1e-16;
	if (z < 1.0)
	{
		// -gamma - ln z + sum_{k>=1} (-1)^{k+1} z^k / (k k!)
		double sum = 0.0;
		double term = 1.0;
		for (int k = 1; k < 200; ++k)
		{
			term *= -z / k;
			const double add = -term / k;
			sum += add;
			if (std::abs(add) < eps * std::abs(sum))
				break;
		}
		return -euler - std::log(z) + sum;
	}

	// Modified Lentz on the continued fraction e^-z / (z + 1 - 1/(z + 3 - 4/(z + 5 - ...)))
	constexpr double tiny = 1e-300;
	double b = z + 1.0;
	double c = 1.0 / tiny;
	double d = 1.0 / b;
	double h = d;
	for (int i = 1; i < 1000; ++i)
	{
		const double an = -static_cast<double>(i) * i;
		b += 2.0;
		d = 1.0 / (an * d + b);
		c = b + an / c;
		const double delta = c * d;
		h *= delta;
		if (std::abs(delta - 1.0) < eps)
			break;
	}
	return h * std::exp(-z);
}

double d2d_beta(const Tiers & t, double power_exponent)
{
	return t.density_d2d_interferers +
		std::pow(t.power_fap / t.power_d2d, power_exponent) * t.density_fap;
}

}  // namespace

Tiers tiers(const ValidatedParams & params)
{
	const SystemParams & p = params.params();
	Tiers t;
	t.alpha = p.pathloss_exponent;
	t.power_d2d = p.tx_power_d2d;
	t.power_fap = p.tx_power_fap;
	t.density_d2d_interferers = params.hit_d2d() * p.density_tx_users;
	t.density_tx_fap_mode =
		p.thin_fap_interferers ? params.hit_d2d() * p.density_tx_users : p.density_tx_users;
	t.density_fap = p.density_faps;
	t.printed_d2d_rate_exponent = p.printed_d2d_rate_exponent;
	return t;
}

double c_alpha(double alpha)
{
	if (!(alpha > 2.0))
		throw Error(
			Errc::DivergentInterference,
			fmt::format("c_alpha: path-loss exponent must exceed 2, got {}", alpha));
	return 2.0 * pi / (alpha * std::sin(2.0 * pi / alpha));
}

double exp_integral_ei(double x)
{
	if (!(x < 0.0))
		throw Error(Errc::OutOfDomain, fmt::format("exp_integral_ei: argument must be < 0, got {}", x));
	if (std::isinf(x))
		return 0.0;
	return -expint_e1(-x);
}

double rho_integral(double t, double alpha)
{
	require_domain(t > 0.0, "rho_integral: threshold must be > 0");
	require_domain(alpha > 2.0, "rho_integral: path-loss exponent must exceed 2");

	// Split the v range at 1. Above it, u = 1/v then u = w^k with
	// k = 2/(alpha-2) leaves a bounded integrand on w in [0, 1]; below it the
	// integrand is already bounded. Both pieces stay on [0, 1] however large T is.
	const quad::Options opts{1e-14, 1e-13, 4000};
	const double k = 2.0 / (alpha - 2.0);
	const double power = alpha / (alpha - 2.0);
	const auto upper_part = [power](double w) { return 1.0 / (1.0 + std::pow(w, power)); };
	const auto lower_part = [alpha](double v) { return 1.0 / (1.0 + std::pow(v, 0.5 * alpha)); };

	const double scale = std::pow(t, 2.0 / alpha);
	if (t <= 1.0)
		return scale * k * quad::integrate(upper_part, 0.0, std::pow(t, (alpha - 2.0) / alpha), opts).value;
	return scale * (k * quad::integrate(upper_part, 0.0, 1.0, opts).value +
		quad::integrate(lower_part, 1.0 / scale, 1.0, opts).value);
}

double coverage_d2d(const Tiers & t, double t_d, double dist)
{
	require_domain(t_d > 0.0, "coverage_d2d: threshold must be > 0");
	require_domain(dist > 0.0, "coverage_d2d: link distance must be > 0");
	const double exponent = pi * dist * dist * d2d_beta(t, 2.0 / t.alpha) * c_alpha(t.alpha) *
		std::pow(t_d, 2.0 / t.alpha);
	return std::exp(-exponent);
}

double ergodic_rate_d2d(const Tiers & t, double t_d, double dist)
{
	require_domain(t_d > 0.0, "ergodic_rate_d2d: threshold must be > 0");
	require_domain(dist > 0.0, "ergodic_rate_d2d: link distance must be > 0");
	const double beta = d2d_beta(t, t.printed_d2d_rate_exponent ? 2.0 : 2.0 / t.alpha);
	const double arg = -std::pow(t_d, 2.0 / t.alpha) * pi * dist * dist * beta * c_alpha(t.alpha);
	const double rate =
		std::log(t_d) * coverage_d2d(t, t_d, dist) - 0.5 * t.alpha * exp_integral_ei(arg);
	return clamp_rate(rate, "D2D", t_d);
}

double coverage_fap(const Tiers & t, double t_f)
{
	require_domain(t_f > 0.0, "coverage_fap: threshold must be > 0");
	const double inter_tier = t.density_tx_fap_mode / t.density_fap * c_alpha(t.alpha) *
		std::pow(t.power_d2d * t_f / t.power_fap, 2.0 / t.alpha);
	return 1.0 / (1.0 + rho_integral(t_f, t.alpha) + inter_tier);
}

double ergodic_rate_fap(const Tiers & t, double t_f)
{
	require_domain(t_f > 0.0, "ergodic_rate_fap: threshold must be > 0");
	const double log_t = std::log(t_f);
	const auto tail = [&](double theta) {
		// coverage underflows long before exp(theta) overflows matters
		if (theta > 700.0)
			return 0.0;
		return coverage_fap(t, std::exp(theta));
	};
	const quad::Result r = quad::integrate_to_infinity(tail, log_t, {1e-12, 1e-8, 2000});
	return clamp_rate(r.value + log_t * coverage_fap(t, t_f), "F-AP", t_f);
}

double lemma1_rate_fap(const Tiers & t, double t_f)
{
	if (t.alpha != 4.0)
		throw Error(
			Errc::WrongExponentForLemma,
			fmt::format("lemma1_rate_fap: closed form needs alpha = 4, got {}", t.alpha));
	if (!(t_f >= 1.0))
		throw Error(
			Errc::ApproximationDomain,
			fmt::format("lemma1_rate_fap: closed form needs threshold >= 1, got {}", t_f));
	const double load = 1.0 + t.density_tx_fap_mode / t.density_fap * std::sqrt(t.power_d2d / t.power_fap);
	return 2.0 * (2.0 + std::log(t_f)) / (pi * std::sqrt(t_f) * load);
}

double coverage_d2d(const ValidatedParams & params, double t_d, double dist)
{
	return coverage_d2d(tiers(params), t_d, dist);
}

double ergodic_rate_d2d(const ValidatedParams & params, double t_d, double dist)
{
	return ergodic_rate_d2d(tiers(params), t_d, dist);
}

double coverage_fap(const ValidatedParams & params, double t_f)
{
	return coverage_fap(tiers(params), t_f);
}

double ergodic_rate_fap(const ValidatedParams & params, double t_f)
{
	return ergodic_rate_fap(tiers(params), t_f);
}

double lemma1_rate_fap(const ValidatedParams & params, double t_f)
{
	return lemma1_rate_fap(tiers(params), t_f);
}

ModeStats analytic_d2d(const ValidatedParams & params)
{
	const Tiers t = tiers(params);
	return {
		coverage_d2d(t, params->sir_threshold_d2d, params->d2d_link_distance),
		ergodic_rate_d2d(t, params->sir_threshold_d2d, params->d2d_link_distance),
		Method::ClosedForm};
}

ModeStats analytic_fap(const ValidatedParams & params)
{
	const Tiers t = tiers(params);
	return {
		coverage_fap(t, params->sir_threshold_fap), ergodic_rate_fap(t, params->sir_threshold_fap),
		Method::Quadrature};
}

}  // namespace fran
