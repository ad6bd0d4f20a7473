#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "fran/error.hpp"
#include "fran/game.hpp"

using namespace fran;

namespace
{

const ValidatedParams & defaults()
{
	static const ValidatedParams v = validate(SystemParams{});
	return v;
}

PayoffInputs flat_inputs()
{
	PayoffInputs in;
	in.rate_d2d = in.rate_fap = 2.0;
	in.phi_d = in.phi_f = 1e-3;
	in.price_d2d = in.price_fap = 1.0;
	in.bandwidth_d2d = in.bandwidth_fap = 10.0;
	return in;
}

double central_difference(const auto & f, double x, double h)
{
	return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace

TEST_CASE("default inputs")
{
	const PayoffInputs in = make_payoff_inputs(defaults());
	CHECK(in.rate_d2d == doctest::Approx(3.1435).epsilon(1e-4));
	CHECK(in.rate_fap == doctest::Approx(0.8136).epsilon(1e-4));
	CHECK(in.phi_d == doctest::Approx(4.905e-4).epsilon(1e-3));
	CHECK(in.phi_f == doctest::Approx(5.577e-3).epsilon(1e-3));
	CHECK(in.bandwidth_d2d == 300e6);
	CHECK(in.c4 == defaults()->cost_c4);

	SystemParams p;
	p.rate_source = RateSource::MonteCarlo;
	p.mc_rate_trials = 5000;
	const PayoffInputs mc = make_payoff_inputs(validate(p), 3);
	CHECK(mc.rate_d2d == doctest::Approx(in.rate_d2d).epsilon(0.1));
	CHECK(mc.rate_fap == doctest::Approx(in.rate_fap).epsilon(0.15));
	CHECK(make_payoff_inputs(validate(p), 3).rate_fap == mc.rate_fap);
}

TEST_CASE("congestion cost")
{
	PayoffInputs in;
	in.c1 = 1.0;
	in.c2 = 0.01;
	in.c3 = 2.0;
	in.c4 = 0.0;
	CHECK(cost_coefficients(100.0, 5.0, in).q_d == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-15));
	CHECK(cost_coefficients(100.0, 5.0, in).q_f == 0.0);

	const PopulationState all_fap{1.0, {20, 10, 10}};
	in.c2 = 3.0;
	CHECK(cost_coefficients(all_fap, in).q_d == 0.0);

	in.c2 = 8.0;
	try
	{
		cost_coefficients(100.0, 5.0, in);
		FAIL("expected CostOverflow");
	}
	catch (const Error & e)
	{
		CHECK(e.code() == Errc::CostOverflow);
		CHECK(std::string(e.what()).find("800") != std::string::npos);
	}
}

TEST_CASE("payoffs")
{
	SUBCASE("bandwidth share")
	{
		PayoffInputs in = flat_inputs();
		const PopulationState s{0.5, {15, 10, 5}};
		CHECK(payoffs(s, in).fap == doctest::Approx(2.0).epsilon(1e-15));
	}
	SUBCASE("symmetric modes tie")
	{
		const PopulationState s{0.5, {10, 10, 0}};
		const Payoffs pay = payoffs(s, flat_inputs());
		CHECK(pay.d2d == pay.fap);
	}
	SUBCASE("identical rates and no cost: shares decide")
	{
		const PayoffInputs in = flat_inputs();
		const PopulationState s{0.25, {28, 8, 20}};
		const Payoffs pay = payoffs(s, in);
		CHECK(pay.d2d == doctest::Approx(20.0 / 6.0).epsilon(1e-15));
		CHECK(pay.fap == doctest::Approx(20.0 / 22.0).epsilon(1e-15));
	}
	SUBCASE("an unused mode keeps only its cost")
	{
		PayoffInputs in = flat_inputs();
		in.c3 = 1.0;
		in.c4 = 0.1;
		const Payoffs pay = payoffs(PopulationState{1.0, {12, 10, 2}}, in);
		CHECK(pay.d2d == 0.0);
		CHECK(std::isfinite(pay.fap));
	}
	SUBCASE("moving users to the F-AP lowers its payoff and raises D2D's")
	{
		const PayoffInputs in = make_payoff_inputs(defaults());
		const GroupSizes g = group_sizes(defaults());
		Payoffs prev = payoffs(PopulationState{0.05, g}, in);
		for (double x = 0.1; x < 0.96; x += 0.05)
		{
			const Payoffs pay = payoffs(PopulationState{x, g}, in);
			CHECK(pay.fap < prev.fap);
			CHECK(pay.d2d > prev.d2d);
			prev = pay;
		}
	}
}

TEST_CASE("payoff gap slope matches finite differences")
{
	const PayoffInputs in = make_payoff_inputs(defaults());
	const GroupSizes g = group_sizes(defaults());
	const auto gap = [&](double x) { return payoff_gap(x, g, in); };
	for (double x = 0.1; x < 0.95; x += 0.1)
	{
		CAPTURE(x);
		const double fd = central_difference(gap, x, 1e-6);
		CHECK(payoff_gap_slope(x, g, in) == doctest::Approx(fd).epsilon(1e-6));
	}
}

TEST_CASE("replicator step")
{
	const PayoffInputs in = make_payoff_inputs(defaults());
	const GroupSizes g = group_sizes(defaults());

	CHECK(replicator_step({0.0, g}, in, 0.5, 0.05).x_fap == 0.0);
	CHECK(replicator_step({1.0, g}, in, 0.5, 0.05).x_fap == 1.0);

	const PopulationState s{0.6, g};
	const Payoffs pay = payoffs(s, in);
	CHECK(replicator_step(s, in, 0.5, 0.05).x_fap ==
		doctest::Approx(0.6 + 0.05 * 0.5 * 0.6 * 0.4 * (pay.fap - pay.d2d)).epsilon(1e-15));

	// equal payoffs: no movement
	const PopulationState tie{0.5, {10, 10, 0}};
	CHECK(replicator_step(tie, flat_inputs(), 0.5, 0.05).x_fap == 0.5);

	SUBCASE("proportions stay complementary")
	{
		std::mt19937_64 rng(9);
		std::uniform_real_distribution<double> unit(0.0, 1.0);
		for (int i = 0; i < 2000; ++i)
		{
			const PopulationState next = replicator_step({unit(rng), g}, in, 0.5, 0.05);
			CHECK(next.x_fap >= 0.0);
			CHECK(next.x_fap <= 1.0);
			CHECK(next.x_fap + next.x_d2d() == 1.0);
		}
	}

	SUBCASE("boundaries are fixed for any inputs")
	{
		PayoffInputs wild = flat_inputs();
		wild.rate_fap = 1e6;
		CHECK(replicator_step({0.0, g}, wild, 3.0, 1.0).x_fap == 0.0);
		wild.rate_fap = 0.0;
		CHECK(replicator_step({1.0, g}, wild, 3.0, 1.0).x_fap == 1.0);
	}
}

TEST_CASE("equilibrium and stability certificate")
{
	const PayoffInputs in = make_payoff_inputs(defaults());
	const GroupSizes g = group_sizes(defaults());
	const Equilibrium eq = equilibrium(g, in, 0.5);

	CHECK_FALSE(eq.boundary);
	CHECK(eq.x_star == doctest::Approx(0.2888).epsilon(1e-3));
	CHECK(std::abs(payoff_gap(eq.x_star, g, in)) < 1e-9);
	CHECK(eq.certificate.stable);
	CHECK(eq.certificate.derivative < 0.0);
	CHECK(eq.certificate.x_star == eq.x_star);

	const auto f = [&](double x) { return replicator_rhs(x, g, in, 0.5); };
	const double fd = central_difference(f, eq.x_star, 1e-6);
	CHECK(std::abs(eq.certificate.derivative - fd) <= 1e-6 * std::abs(fd));

	for (double x = 0.1; x < 0.95; x += 0.1)
	{
		CAPTURE(x);
		CHECK(0.5 * x * (1.0 - x) * payoff_gap_slope(x, g, in) < 0.0);
		CHECK(replicator_jacobian(x, g, in, 0.5) == doctest::Approx(central_difference(f, x, 1e-6)).epsilon(1e-6));
	}

	SUBCASE("boundary equilibria")
	{
		PayoffInputs fap_heavy = in;
		fap_heavy.price_d2d = 0.0;
		const Equilibrium all_fap = equilibrium(g, fap_heavy, 0.5);
		CHECK(all_fap.boundary);
		CHECK(all_fap.x_star == 1.0);

		PayoffInputs d2d_heavy = in;
		d2d_heavy.rate_fap = 0.0;
		d2d_heavy.c1 = 1e-9;
		const Equilibrium all_d2d = equilibrium(g, d2d_heavy, 0.5);
		CHECK(all_d2d.boundary);
		CHECK(all_d2d.x_star == 0.0);
	}

	SUBCASE("flat game")
	{
		try
		{
			equilibrium(g, PayoffInputs{}, 0.5);
			FAIL("expected DegenerateGame");
		}
		catch (const Error & e)
		{
			CHECK(e.code() == Errc::DegenerateGame);
		}
	}
}

TEST_CASE("replicator evolution")
{
	const PayoffInputs in = make_payoff_inputs(defaults());
	const GroupSizes g = group_sizes(defaults());
	const EvolveOptions opts = evolve_options(defaults());
	const Equilibrium eq = equilibrium(g, in, opts.learning_rate);

	for (double x0 : {0.1, 0.5, 0.9})
	{
		CAPTURE(x0);
		const EvolutionTrace t = evolve_replicator({x0, g}, in, opts);
		REQUIRE(t.converged());
		CHECK(t.mode == EvolutionMode::Replicator);
		CHECK(std::abs(t.final_row().x_fap - eq.x_star) <= opts.tol);
		CHECK(t.rows.front().x_fap == x0);
		CHECK(t.final_row().payoff_fap == doctest::Approx(t.final_row().avg_payoff).epsilon(1e-6));
		CHECK(t.final_row().payoff_d2d == doctest::Approx(t.final_row().avg_payoff).epsilon(1e-6));
		for (const TraceRow & r : t.rows)
			CHECK(std::abs(r.avg_payoff - (r.x_fap * r.payoff_fap + (1.0 - r.x_fap) * r.payoff_d2d)) <= 1e-12);
	}

	SUBCASE("starting at the equilibrium")
	{
		const EvolutionTrace t = evolve_replicator({eq.x_star, g}, in, opts);
		CHECK(t.converged_at == 0);
		CHECK(t.rows.size() == 1);
	}
	SUBCASE("iteration budget")
	{
		EvolveOptions short_run = opts;
		short_run.max_iters = 3;
		const EvolutionTrace t = evolve_replicator({0.9, g}, in, short_run);
		CHECK_FALSE(t.converged());
		CHECK(t.rows.size() == 4);
	}
	SUBCASE("payoff gap eventually shrinks monotonically at small steps")
	{
		EvolveOptions fine = opts;
		fine.dt = 0.01;
		for (double x0 : {0.05, 0.5, 0.95})
		{
			const EvolutionTrace t = evolve_replicator({x0, g}, in, fine);
			REQUIRE(t.converged());
			std::size_t violations = 0;
			for (std::size_t i = t.rows.size() / 4; i + 1 < t.rows.size(); ++i)
				if (std::abs(payoff_gap(t.rows[i + 1].x_fap, g, in)) > std::abs(payoff_gap(t.rows[i].x_fap, g, in)))
					++violations;
			CHECK(violations == 0);
		}
	}
}

TEST_CASE("agent evolution")
{
	const PayoffInputs in = make_payoff_inputs(defaults());
	const GroupSizes g = group_sizes(defaults());
	const EvolveOptions opts = evolve_options(defaults());
	const double x_star = equilibrium(g, in, opts.learning_rate).x_star;
	const double n = static_cast<double>(g.n_potential_d2d);

	for (std::uint64_t seed = 0; seed < 30; ++seed)
		for (double x0 : {0.1, 0.5, 0.9})
		{
			Rng rng = make_stream(seed, 0);
			const auto start = static_cast<std::int64_t>(std::floor(x0 * n + 0.5));
			const EvolutionTrace t = evolve_agents(start, g, in, opts, rng);
			CAPTURE(seed);
			CAPTURE(x0);
			REQUIRE(t.converged());
			CHECK(*t.converged_at < 15);
			CHECK(t.mode == EvolutionMode::AgentBased);
			CHECK(std::abs(t.final_row().x_fap - x_star) <= 1.0 / n + opts.tol);
			for (const TraceRow & r : t.rows)
			{
				CHECK(std::abs(r.x_fap * n - std::round(r.x_fap * n)) < 1e-9);
				CHECK(std::abs(r.avg_payoff - (r.x_fap * r.payoff_fap + (1.0 - r.x_fap) * r.payoff_d2d)) <= 1e-12);
			}
		}

	SUBCASE("same seed, same trace")
	{
		Rng a = make_stream(5, 1), b = make_stream(5, 1);
		const EvolutionTrace ta = evolve_agents(6, g, in, opts, a);
		const EvolutionTrace tb = evolve_agents(6, g, in, opts, b);
		REQUIRE(ta.rows.size() == tb.rows.size());
		for (std::size_t i = 0; i < ta.rows.size(); ++i)
			CHECK(ta.rows[i].x_fap == tb.rows[i].x_fap);
	}

	SUBCASE("a settled population does not move")
	{
		Rng rng(1);
		const EvolutionTrace settled = evolve_agents(4, g, in, opts, rng);
		CHECK(settled.converged_at == 0);
	}

	SUBCASE("needs players")
	{
		Rng rng(1);
		CHECK_THROWS_AS(evolve_agents(0, GroupSizes{10, 0, 10}, in, opts, rng), Error);
	}
}

TEST_CASE("trace CSV")
{
	EvolutionTrace t;
	t.rows.push_back({0, 0.5, 1.0, 2.0, 1.5});
	t.rows.push_back({1, 0.25, -1.0, 3.0, 0.0});
	std::ostringstream out;
	write_trace_csv(out, t);
	CHECK(out.str() == "iter,x_fap,pi_d2d,pi_fap,avg_payoff\n0,0.5,1,2,1.5\n1,0.25,-1,3,0\n");
}
