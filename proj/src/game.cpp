#include "fran/game.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numeric>
#include <ostream>

#include "fran/analytics.hpp"
#include "fran/content.hpp"
#include "fran/error.hpp"
#include "fran/geometry.hpp"

namespace fran
{

namespace
{

constexpr double max_exponent = 700.0;
constexpr double boundary_eps = 1e-6;

double congestion(double c, double rate, double users, const char * which)
{
	const double arg = rate * users;
	if (arg > max_exponent)
		throw Error(
			Errc::CostOverflow,
			fmt::format("{}: exponent {} * {} = {} exceeds {}", which, rate, users, arg, max_exponent));
	return c * std::expm1(arg);
}

double users_d2d(const PopulationState & s)
{
	return static_cast<double>(s.groups.n_potential_d2d) * s.x_d2d();
}

double users_fap(const PopulationState & s)
{
	return static_cast<double>(s.groups.n_potential_fap) +
		static_cast<double>(s.groups.n_potential_d2d) * s.x_fap;
}

}  // namespace

PayoffInputs make_payoff_inputs(const ValidatedParams & params, std::uint64_t seed)
{
	const SystemParams & p = params.params();
	PayoffInputs in;
	if (p.rate_source == RateSource::Analytic)
	{
		in.rate_d2d = ergodic_rate_d2d(params, p.sir_threshold_d2d, p.d2d_link_distance);
		in.rate_fap = ergodic_rate_fap(params, p.sir_threshold_fap);
	}
	else
	{
		const SirBatch batch =
			sample_sir_batch(params, static_cast<std::size_t>(p.mc_rate_trials), seed);
		in.rate_d2d = ergodic_rate_estimate(batch.d2d, p.sir_threshold_d2d).value;
		in.rate_fap = ergodic_rate_estimate(batch.fap, p.sir_threshold_fap).value;
	}
	const DelayProfile delays = total_delays(params);
	in.phi_d = delays.phi_d;
	in.phi_f = delays.phi_f;
	in.price_d2d = p.price_d2d;
	in.price_fap = p.price_fap;
	in.bandwidth_d2d = p.bandwidth_d2d;
	in.bandwidth_fap = p.bandwidth_fap;
	in.c1 = p.cost_c1;
	in.c2 = p.cost_c2;
	in.c3 = p.cost_c3;
	in.c4 = p.cost_c4;
	return in;
}

CostCoefficients cost_coefficients(double n_d2d, double n_fap, const PayoffInputs & in)
{
	return {congestion(in.c1, in.c2, n_d2d, "q_d"), congestion(in.c3, in.c4, n_fap, "q_f")};
}

CostCoefficients cost_coefficients(const PopulationState & state, const PayoffInputs & in)
{
	return cost_coefficients(users_d2d(state), users_fap(state), in);
}

Payoffs payoffs(double n_d2d, double n_fap, const PayoffInputs & in)
{
	const CostCoefficients q = cost_coefficients(n_d2d, n_fap, in);
	const double share_d = n_d2d > 0.0 ? in.price_d2d * in.bandwidth_d2d * in.rate_d2d / n_d2d : 0.0;
	const double share_f = n_fap > 0.0 ? in.price_fap * in.bandwidth_fap * in.rate_fap / n_fap : 0.0;
	return {share_d - q.q_d * in.phi_d, share_f - q.q_f * in.phi_f};
}

Payoffs payoffs(const PopulationState & state, const PayoffInputs & in)
{
	return payoffs(users_d2d(state), users_fap(state), in);
}

double average_payoff(const PopulationState & state, const Payoffs & pay)
{
	return state.x_fap * pay.fap + state.x_d2d() * pay.d2d;
}

double payoff_gap(double x_fap, const GroupSizes & groups, const PayoffInputs & in)
{
	const Payoffs pay = payoffs(PopulationState{x_fap, groups}, in);
	return pay.fap - pay.d2d;
}

double payoff_gap_slope(double x_fap, const GroupSizes & groups, const PayoffInputs & in)
{
	const PopulationState s{x_fap, groups};
	const double nd = static_cast<double>(groups.n_potential_d2d);
	const double n_d = users_d2d(s);
	const double n_f = users_fap(s);

	// d pi_f / dx = -N^D p_f B_f C_f / n_f^2 - c3 c4 N^D phi_f e^{c4 n_f}
	double dpi_f = -in.c3 * in.c4 * nd * in.phi_f * std::exp(in.c4 * n_f);
	if (n_f > 0.0)
		dpi_f -= nd * in.price_fap * in.bandwidth_fap * in.rate_fap / (n_f * n_f);

	// d pi_d / dx = N^D p_d B_d C_d / n_d^2 + c1 c2 N^D phi_d e^{c2 n_d}
	double dpi_d = in.c1 * in.c2 * nd * in.phi_d * std::exp(in.c2 * n_d);
	if (n_d > 0.0)
		dpi_d += nd * in.price_d2d * in.bandwidth_d2d * in.rate_d2d / (n_d * n_d);

	return dpi_f - dpi_d;
}

double replicator_rhs(double x_fap, const GroupSizes & groups, const PayoffInputs & in, double learning_rate)
{
	return learning_rate * x_fap * (1.0 - x_fap) * payoff_gap(x_fap, groups, in);
}

double replicator_jacobian(
	double x_fap, const GroupSizes & groups, const PayoffInputs & in, double learning_rate)
{
	const double curvature = x_fap * (1.0 - x_fap) * payoff_gap_slope(x_fap, groups, in);
	const double drift = (1.0 - 2.0 * x_fap) * payoff_gap(x_fap, groups, in);
	return learning_rate * (curvature + drift);
}

PopulationState replicator_step(
	const PopulationState & state, const PayoffInputs & in, double learning_rate, double dt)
{
	const Payoffs pay = payoffs(state, in);
	const double x = state.x_fap;
	PopulationState next = state;
	next.x_fap = std::clamp(x + dt * learning_rate * x * (1.0 - x) * (pay.fap - pay.d2d), 0.0, 1.0);
	return next;
}

EvolveOptions evolve_options(const ValidatedParams & params)
{
	return {
		params->learning_rate, params->step_size, params->tolerance, params->max_iters,
		params->switch_probability};
}

namespace
{

TraceRow row_at(std::int64_t iter, const PopulationState & s, const PayoffInputs & in)
{
	const Payoffs pay = payoffs(s, in);
	return {iter, s.x_fap, pay.d2d, pay.fap, average_payoff(s, pay)};
}

}  // namespace

EvolutionTrace evolve_replicator(
	const PopulationState & initial, const PayoffInputs & in, const EvolveOptions & opts)
{
	if (!(opts.dt > 0.0) || !(opts.tol > 0.0))
		throw Error(Errc::OutOfDomain, "evolve_replicator: dt and tol must be > 0");

	EvolutionTrace trace;
	trace.mode = EvolutionMode::Replicator;
	PopulationState state = initial;
	state.x_fap = std::clamp(state.x_fap, 0.0, 1.0);
	trace.rows.push_back(row_at(0, state, in));
	for (std::int64_t k = 0; k < opts.max_iters; ++k)
	{
		const PopulationState next = replicator_step(state, in, opts.learning_rate, opts.dt);
		if (std::abs(next.x_fap - state.x_fap) < opts.tol)
		{
			trace.converged_at = k;
			break;
		}
		state = next;
		trace.rows.push_back(row_at(k + 1, state, in));
	}
	return trace;
}

EvolutionTrace evolve_agents(
	std::int64_t initial_fap, const GroupSizes & groups, const PayoffInputs & in,
	const EvolveOptions & opts, Rng & rng)
{
	const std::int64_t agents = groups.n_potential_d2d;
	if (agents < 1)
		throw Error(Errc::OutOfDomain, "evolve_agents: needs at least one potential D2D user");

	// true = F-AP mode. Which agents start where is random; only counts matter
	// for payoffs, the visiting order then decides who moves.
	std::vector<char> in_fap(static_cast<std::size_t>(agents), 0);
	std::fill_n(in_fap.begin(), std::clamp<std::int64_t>(initial_fap, 0, agents), 1);
	std::shuffle(in_fap.begin(), in_fap.end(), rng);

	std::int64_t n_fap_group = std::count(in_fap.begin(), in_fap.end(), 1);
	const auto nf_total = [&] { return static_cast<double>(groups.n_potential_fap + n_fap_group); };
	const auto nd_total = [&] { return static_cast<double>(agents - n_fap_group); };
	const auto state = [&] {
		return PopulationState{static_cast<double>(n_fap_group) / static_cast<double>(agents), groups};
	};

	EvolutionTrace trace;
	trace.mode = EvolutionMode::AgentBased;
	trace.rows.push_back(row_at(0, state(), in));

	std::bernoulli_distribution coin(opts.switch_probability);
	std::vector<std::size_t> order(static_cast<std::size_t>(agents));
	std::iota(order.begin(), order.end(), std::size_t{0});

	for (std::int64_t k = 0; k < opts.max_iters; ++k)
	{
		std::shuffle(order.begin(), order.end(), rng);
		bool anyone_eligible = false;
		for (std::size_t a : order)
		{
			const Payoffs now = payoffs(nd_total(), nf_total(), in);
			const double avg = average_payoff(state(), now);
			bool eligible = false;
			if (in_fap[a])
				eligible = now.fap < avg && payoffs(nd_total() + 1.0, nf_total() - 1.0, in).d2d > now.fap;
			else
				eligible = now.d2d < avg && payoffs(nd_total() - 1.0, nf_total() + 1.0, in).fap > now.d2d;
			if (!eligible)
				continue;
			anyone_eligible = true;
			if (coin(rng))
			{
				n_fap_group += in_fap[a] ? -1 : 1;
				in_fap[a] = !in_fap[a];
			}
		}
		if (!anyone_eligible)
		{
			trace.converged_at = k;
			break;
		}
		trace.rows.push_back(row_at(k + 1, state(), in));
	}
	return trace;
}

Equilibrium equilibrium(const GroupSizes & groups, const PayoffInputs & in, double learning_rate)
{
	const auto g = [&](double x) { return payoff_gap(x, groups, in); };
	double lo = boundary_eps;
	double hi = 1.0 - boundary_eps;
	const double g_lo = g(lo);
	const double g_hi = g(hi);
	if (g_lo == 0.0 && g_hi == 0.0 && g(0.5) == 0.0)
		throw Error(Errc::DegenerateGame, "equilibrium: payoff gap vanishes on (0, 1)");

	Equilibrium eq;
	if (g_lo <= 0.0)
	{
		eq.x_star = 0.0;
		eq.boundary = true;
	}
	else if (g_hi >= 0.0)
	{
		eq.x_star = 1.0;
		eq.boundary = true;
	}
	else
	{
		for (int i = 0; i < 200; ++i)
		{
			const double mid = 0.5 * (lo + hi);
			if (mid <= lo || mid >= hi)
				break;
			(g(mid) > 0.0 ? lo : hi) = mid;
		}
		eq.x_star = 0.5 * (lo + hi);
	}

	eq.certificate.x_star = eq.x_star;
	eq.certificate.derivative = replicator_jacobian(eq.x_star, groups, in, learning_rate);
	eq.certificate.stable = eq.certificate.derivative < 0.0;
	return eq;
}

void write_trace_csv(std::ostream & out, const EvolutionTrace & trace)
{
	out << "iter,x_fap,pi_d2d,pi_fap,avg_payoff\n";
	for (const TraceRow & r : trace.rows)
		out << fmt::format("{},{},{},{},{}\n", r.iter, r.x_fap, r.payoff_d2d, r.payoff_fap, r.avg_payoff);
}

}  // namespace fran
