#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "fran/rng.hpp"
#include "fran/scenario.hpp"

namespace fran
{

/// Share of potential-D2D users in F-AP mode; the D2D share is 1 - x_fap.
struct PopulationState
{
	double x_fap = 0.0;
	GroupSizes groups;

	double x_d2d() const noexcept { return 1.0 - x_fap; }
};

/// Everything the payoff function reads besides the population state.
struct PayoffInputs
{
	double rate_d2d = 0.0;  // utility C_d, nats/s/Hz
	double rate_fap = 0.0;  // utility C_f
	double phi_d = 0.0;     // total delay per mode, seconds
	double phi_f = 0.0;
	double price_d2d = 0.0;
	double price_fap = 0.0;
	double bandwidth_d2d = 0.0;
	double bandwidth_fap = 0.0;
	double c1 = 0.0;
	double c2 = 0.0;
	double c3 = 0.0;
	double c4 = 0.0;
};

/// Inputs at the scenario's thresholds; rates come from the closed forms or,
/// with rate_source = montecarlo, from mc_rate_trials SIR samples under `seed`.
PayoffInputs make_payoff_inputs(const ValidatedParams & params, std::uint64_t seed = 1);

struct CostCoefficients
{
	double q_d = 0.0;
	double q_f = 0.0;
};

struct Payoffs
{
	double d2d = 0.0;
	double fap = 0.0;
};

/// Congestion prices q_d = c1(e^{c2 n_d} - 1), q_f = c3(e^{c4 n_f} - 1) for
/// user counts n_d (D2D mode) and n_f (F-AP mode, both groups).
CostCoefficients cost_coefficients(double n_d2d, double n_fap, const PayoffInputs & in);
CostCoefficients cost_coefficients(const PopulationState & state, const PayoffInputs & in);

/// Per-user payoff of each mode at the given user counts. A mode nobody uses
/// has no bandwidth share; its payoff reduces to the delay cost term.
Payoffs payoffs(double n_d2d, double n_fap, const PayoffInputs & in);
Payoffs payoffs(const PopulationState & state, const PayoffInputs & in);

/// Group-average payoff x_f pi_f + x_d pi_d.
double average_payoff(const PopulationState & state, const Payoffs & pay);

/// g(x) = pi_fap(x) - pi_d2d(x).
double payoff_gap(double x_fap, const GroupSizes & groups, const PayoffInputs & in);

/// dg/dx from the closed-form payoff derivatives.
double payoff_gap_slope(double x_fap, const GroupSizes & groups, const PayoffInputs & in);

/// Replicator right-hand side f(x) = rate x (1-x) g(x) and its derivative.
double replicator_rhs(double x_fap, const GroupSizes & groups, const PayoffInputs & in, double learning_rate);
double replicator_jacobian(
	double x_fap, const GroupSizes & groups, const PayoffInputs & in, double learning_rate);

/// One forward-Euler step of the replicator dynamics, clamped to [0, 1].
PopulationState replicator_step(
	const PopulationState & state, const PayoffInputs & in, double learning_rate, double dt);

enum class EvolutionMode
{
	Replicator,
	AgentBased,
};

struct TraceRow
{
	std::int64_t iter = 0;
	double x_fap = 0.0;
	double payoff_d2d = 0.0;
	double payoff_fap = 0.0;
	double avg_payoff = 0.0;
};

struct EvolutionTrace
{
	std::vector<TraceRow> rows;
	std::optional<std::int64_t> converged_at;
	EvolutionMode mode = EvolutionMode::Replicator;

	bool converged() const noexcept { return converged_at.has_value(); }
	const TraceRow & final_row() const { return rows.back(); }
};

struct EvolveOptions
{
	double learning_rate = 0.5;
	double dt = 0.05;
	double tol = 1e-9;
	std::int64_t max_iters = 10000;
	double switch_probability = 0.5;
};

EvolveOptions evolve_options(const ValidatedParams & params);

/// Iterates replicator_step until |x' - x| < tol. converged_at is the index
/// of the first state whose step moves less than tol; unset on max_iters.
EvolutionTrace evolve_replicator(
	const PopulationState & initial, const PayoffInputs & in, const EvolveOptions & opts);

/// Discrete Evolution Algorithm over n_potential_d2d agents, `initial_fap`
/// of them starting in F-AP mode. Each iteration visits the agents in random
/// order; an agent whose payoff is below the group average switches, with
/// probability switch_probability, when the other mode would pay more after
/// its own move. Converged once no agent qualifies.
EvolutionTrace evolve_agents(
	std::int64_t initial_fap, const GroupSizes & groups, const PayoffInputs & in,
	const EvolveOptions & opts, Rng & rng);

struct StabilityCertificate
{
	double x_star = 0.0;
	double derivative = 0.0;  // df/dx at x_star
	bool stable = false;
};

struct Equilibrium
{
	double x_star = 0.0;
	bool boundary = false;
	StabilityCertificate certificate;
};

/// Root of g on [eps, 1-eps] by bisection (g is strictly decreasing); a
/// boundary point when g keeps one sign. Throws DegenerateGame if g == 0.
Equilibrium equilibrium(const GroupSizes & groups, const PayoffInputs & in, double learning_rate);

/// iter,x_fap,pi_d2d,pi_fap,avg_payoff
void write_trace_csv(std::ostream & out, const EvolutionTrace & trace);

}  // namespace fran
