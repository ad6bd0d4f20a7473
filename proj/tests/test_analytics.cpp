#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fran/analytics.hpp"
#include "fran/error.hpp"
#include "oracles.hpp"

using namespace fran;
using std::numbers::pi;

namespace
{

// P_f/P_d = 10, p_c lambda_tu = 2.5e-5, lambda_tu/lambda_f = 5/3.
Tiers reference_tiers()
{
	Tiers t;
	t.alpha = 4.0;
	t.power_d2d = 0.1;
	t.power_fap = 1.0;
	t.density_d2d_interferers = 2.5e-5;
	t.density_tx_fap_mode = 5e-5;
	t.density_fap = 3e-5;
	return t;
}

Errc code_of(auto && f)
{
	try
	{
		f();
	}
	catch (const Error & e)
	{
		return e.code();
	}
	return Errc::DegenerateGame;
}

}  // namespace

TEST_CASE("C(alpha)")
{
	CHECK(c_alpha(4.0) == doctest::Approx(pi / 2).epsilon(1e-15));
	CHECK(c_alpha(3.0) == doctest::Approx(2.0 * pi / (3.0 * std::sin(2.0 * pi / 3.0))).epsilon(1e-15));
	CHECK(c_alpha(3.0) == doctest::Approx(2.4184).epsilon(1e-4));
	CHECK(c_alpha(2.001) > 1e3);
	CHECK(code_of([] { c_alpha(2.0); }) == Errc::DivergentInterference);
	CHECK(code_of([] { c_alpha(1.5); }) == Errc::DivergentInterference);
}

TEST_CASE("exponential integral")
{
	SUBCASE("reference values")
	{
		// mpmath.ei at 50 digits
		CHECK(exp_integral_ei(-1.0) == doctest::Approx(-0.21938393439552).epsilon(1e-13));
		CHECK(exp_integral_ei(-0.059147) == doctest::Approx(-2.30879752070551).epsilon(1e-13));
		CHECK(exp_integral_ei(-0.1326) == doctest::Approx(-1.57153321939718).epsilon(1e-13));
		CHECK(std::abs(exp_integral_ei(-1e-8)) > 17.0);
	}
	SUBCASE("against the standard library and a direct quadrature")
	{
		for (double x : {-1e-6, -1e-3, -0.05, -0.5, -0.999, -1.0, -1.001, -2.0, -7.5, -30.0, -200.0})
		{
			CAPTURE(x);
			const double got = exp_integral_ei(x);
			CHECK(std::abs(got - std::expint(x)) <= 1e-12 * std::max(1.0, std::abs(got)) + 1e-300);
			if (x > -50.0)
				CHECK(got == doctest::Approx(oracle::ei_negative(x)).epsilon(1e-9));
		}
	}
	SUBCASE("derivative is e^x / x")
	{
		for (double x : {-0.1, -1.0, -5.0})
		{
			const double h = 1e-5 * std::abs(x);
			const double fd = (exp_integral_ei(x + h) - exp_integral_ei(x - h)) / (2 * h);
			const double exact = std::exp(x) / x;
			CHECK(std::abs(fd - exact) <= 1e-6 * std::abs(exact));
		}
	}
	SUBCASE("domain")
	{
		CHECK(code_of([] { exp_integral_ei(0.0); }) == Errc::OutOfDomain);
		CHECK(code_of([] { exp_integral_ei(0.5); }) == Errc::OutOfDomain);
		CHECK(exp_integral_ei(-INFINITY) == 0.0);
	}
}

TEST_CASE("rho integral")
{
	CHECK(rho_integral(1.0, 4.0) == doctest::Approx(pi / 4).epsilon(1e-14));
	CHECK(rho_integral(4.0, 4.0) == doctest::Approx(2.0 * std::atan(2.0)).epsilon(1e-14));
	CHECK(rho_integral(1e-10, 4.0) < 1e-9);

	for (double t : {0.01, 0.1, 0.5, 1.0, 4.0, 25.0, 60.0, 100.0})
		CHECK(std::abs(rho_integral(t, 4.0) - std::sqrt(t) * std::atan(std::sqrt(t))) <= 1e-9);

	SUBCASE("other exponents against a direct quadrature of the defining integral")
	{
		// v = e^u on [T^{-2/a}, V], then the series tail sum_j (-1)^j V^{1-(j+1)a/2} / ((j+1)a/2 - 1)
		for (double alpha : {2.5, 3.0, 5.0})
			for (double t : {0.3, 1.0, 10.0, 1e6})
			{
				const double lo = std::pow(t, -2.0 / alpha);
				const double big = 1e12;
				const auto g = [&](double u) { return std::exp(u) / (1.0 + std::exp(0.5 * alpha * u)); };
				double tail = 0.0;
				for (int j = 0; j < 4; ++j)
				{
					const double e = (j + 1) * 0.5 * alpha - 1.0;
					tail += (j % 2 == 0 ? 1.0 : -1.0) * std::pow(big, -e) / e;
				}
				const double expect = std::pow(t, 2.0 / alpha) * (oracle::simpson(g, std::log(lo), std::log(big), 400000) + tail);
				CAPTURE(alpha);
				CAPTURE(t);
				CHECK(rho_integral(t, alpha) == doctest::Approx(expect).epsilon(1e-9));
			}
	}

	SUBCASE("huge thresholds")
	{
		for (double t : {1e10, 1e40, 1e200})
			CHECK(rho_integral(t, 4.0) == doctest::Approx(std::sqrt(t) * std::atan(std::sqrt(t))).epsilon(1e-12));
	}
}

TEST_CASE("D2D coverage and rate")
{
	const Tiers t = reference_tiers();
	// pi * 100 * (2.5e-5 + sqrt(10) * 3e-5) * pi / 2
	const double exponent = pi * 100.0 * (2.5e-5 + std::sqrt(10.0) * 3e-5) * pi / 2;
	CHECK(exponent == doctest::Approx(0.05915).epsilon(1e-3));

	CHECK(coverage_d2d(t, 1.0, 10.0) == doctest::Approx(std::exp(-exponent)).epsilon(1e-14));
	CHECK(coverage_d2d(t, 1.0, 10.0) == doctest::Approx(0.9426).epsilon(1e-4));
	CHECK(coverage_d2d(t, 1e-12, 10.0) == doctest::Approx(1.0).epsilon(1e-6));
	CHECK(coverage_d2d(t, 1.0, 1e5) == 0.0);

	CHECK(ergodic_rate_d2d(t, 1.0, 10.0) == doctest::Approx(-2.0 * std::expint(-exponent)).epsilon(1e-12));
	CHECK(ergodic_rate_d2d(t, 1.0, 10.0) == doctest::Approx(4.618).epsilon(1e-3));

	SUBCASE("monotone in distance and threshold")
	{
		double prev = INFINITY;
		for (double d : {5.0, 10.0, 20.0, 40.0})
		{
			CHECK(ergodic_rate_d2d(t, 1.0, d) < prev);
			prev = ergodic_rate_d2d(t, 1.0, d);
		}
		prev = INFINITY;
		for (double td = 1.0; td <= 20.0; td += 0.5)
		{
			CHECK(ergodic_rate_d2d(t, td, 15.0) < prev);
			prev = ergodic_rate_d2d(t, td, 15.0);
		}
		prev = 1.0 + 1e-12;
		for (double td : {0.01, 0.1, 1.0, 4.0, 10.0, 100.0})
		{
			const double c = coverage_d2d(t, td, 15.0);
			CHECK(c < prev);
			CHECK(c > 0.0);
			prev = c;
		}
	}

	SUBCASE("printed exponent variant")
	{
		Tiers printed = t;
		printed.printed_d2d_rate_exponent = true;
		const double beta = 2.5e-5 + 100.0 * 3e-5;
		CHECK(ergodic_rate_d2d(printed, 1.0, 10.0) ==
			doctest::Approx(-2.0 * std::expint(-pi * 100.0 * beta * pi / 2)).epsilon(1e-12));
	}

	SUBCASE("low thresholds clamp at zero")
	{
		Tiers crowded = t;
		crowded.density_fap = 1e-2;
		CHECK(ergodic_rate_d2d(crowded, 0.01, 40.0) >= 0.0);
	}
}

TEST_CASE("F-AP coverage")
{
	const Tiers t = reference_tiers();
	// 1 / (1 + pi/4 + (5/3) (pi/2) sqrt(0.1))
	const double expect = 1.0 / (1.0 + pi / 4 + 5.0 / 3.0 * pi / 2 * std::sqrt(0.1));
	CHECK(coverage_fap(t, 1.0) == doctest::Approx(expect).epsilon(1e-13));
	CHECK(coverage_fap(t, 1.0) == doctest::Approx(0.3827).epsilon(1e-4));
	CHECK(coverage_fap(t, 1e-12) == doctest::Approx(1.0).epsilon(1e-5));

	Tiers no_tx = t;
	no_tx.density_tx_fap_mode = 0.0;
	for (double tf : {0.5, 1.0, 7.0})
		CHECK(coverage_fap(no_tx, tf) == doctest::Approx(1.0 / (1.0 + rho_integral(tf, 4.0))).epsilon(1e-14));

	double prev = 1.0 + 1e-12;
	for (double tf : {0.01, 0.1, 1.0, 4.0, 10.0, 100.0})
	{
		const double c = coverage_fap(t, tf);
		CHECK(c < prev);
		CHECK(c > 0.0);
		prev = c;
	}
}

TEST_CASE("F-AP rate")
{
	const Tiers t = reference_tiers();

	SUBCASE("closed form")
	{
		CHECK(lemma1_rate_fap(t, 1.0) == doctest::Approx(4.0 / (pi * (1.0 + 5.0 / 3.0 * std::sqrt(0.1)))).epsilon(1e-14));
		CHECK(lemma1_rate_fap(t, 1.0) == doctest::Approx(0.8338).epsilon(1e-4));
		const double e2 = std::exp(2.0);
		CHECK(lemma1_rate_fap(t, e2) / lemma1_rate_fap(t, 1.0) == doctest::Approx(2.0 / std::exp(1.0)).epsilon(1e-14));

		Tiers no_tx = t;
		no_tx.density_tx_fap_mode = 0.0;
		CHECK(lemma1_rate_fap(no_tx, 9.0) == doctest::Approx(2.0 * (2.0 + std::log(9.0)) / (pi * 3.0)).epsilon(1e-14));

		Tiers three = t;
		three.alpha = 3.0;
		CHECK(code_of([&] { lemma1_rate_fap(three, 2.0); }) == Errc::WrongExponentForLemma);
		CHECK(code_of([&] { lemma1_rate_fap(t, 0.5); }) == Errc::ApproximationDomain);
	}

	SUBCASE("quadrature against an independent tail integral")
	{
		for (double tf : {1.0, 2.0, 10.0})
		{
			// theta in [ln T, ln T + 60] is ample: coverage ~ e^{-theta/2}
			const auto g = [&](double theta) { return coverage_fap(t, std::exp(theta)); };
			const double tail = oracle::simpson(g, std::log(tf), std::log(tf) + 80.0, 40000);
			const double expect = tail + std::log(tf) * coverage_fap(t, tf);
			CHECK(ergodic_rate_fap(t, tf) == doctest::Approx(expect).epsilon(1e-6));
		}
	}

	SUBCASE("approximation gap")
	{
		CHECK(ergodic_rate_fap(t, 2.0) == doctest::Approx(lemma1_rate_fap(t, 2.0)).epsilon(0.05));
		Tiers no_tx = t;
		no_tx.density_tx_fap_mode = 0.0;
		const double expect = 2.0 * (2.0 + std::log(4.0)) / (pi * 2.0);
		CHECK(expect == doctest::Approx(1.078).epsilon(1e-3));
		CHECK(ergodic_rate_fap(no_tx, 4.0) == doctest::Approx(expect).epsilon(0.05));
	}

	SUBCASE("monotone in threshold")
	{
		double prev = INFINITY;
		for (double tf = 1.0; tf <= 20.0; tf += 0.5)
		{
			const double r = ergodic_rate_fap(t, tf);
			CHECK(r < prev);
			CHECK(r >= 0.0);
			prev = r;
		}
	}
}

TEST_CASE("scenario-level evaluation")
{
	const ValidatedParams v = validate(SystemParams{});
	const ModeStats d = analytic_d2d(v);
	const ModeStats f = analytic_fap(v);
	CHECK(d.coverage == doctest::Approx(0.8758).epsilon(1e-4));
	CHECK(f.coverage == doctest::Approx(0.3827).epsilon(1e-4));
	CHECK(d.ergodic_rate == doctest::Approx(3.1435).epsilon(1e-4));
	CHECK(f.ergodic_rate == doctest::Approx(0.8136).epsilon(1e-4));
	CHECK(lemma1_rate_fap(v, 1.0) == doctest::Approx(0.8338).epsilon(1e-4));
	CHECK(d.method == Method::ClosedForm);
	CHECK(f.method == Method::Quadrature);
}
