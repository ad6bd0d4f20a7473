#include "fran/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <ostream>

#include "fran/analytics.hpp"
#include "fran/error.hpp"

namespace fran
{

AssignmentResult max_rate_assign(const NetworkRealization & net, const ValidatedParams & params)
{
	if (net.faps.cols() == 0)
		throw Error(Errc::NoFapInRegion, "max_rate_assign: realization holds no F-AP");

	const SystemParams & p = params.params();
	const Tiers t = tiers(params);
	// The F-AP rate formula carries no link distance, so every F-AP ties.
	const double best_fap = ergodic_rate_fap(t, p.sir_threshold_fap);
	const double search_sq = p.maxrate_search_radius * p.maxrate_search_radius;
	const double range_sq = p.d2d_range * p.d2d_range;

	AssignmentResult out;
	out.users.reserve(static_cast<std::size_t>(net.require_users.cols()));
	for (Eigen::Index u = 0; u < net.require_users.cols(); ++u)
	{
		UserAssignment a;
		a.user_id = u;
		a.position = net.require_users.col(u);
		a.best_fap = best_fap;

		const Eigen::VectorXd dist_sq = (net.tx_users.colwise() - a.position).colwise().squaredNorm();
		for (Eigen::Index i = 0; i < dist_sq.size(); ++i)
		{
			if (!net.tx_cached[static_cast<std::size_t>(i)])
				continue;
			if (dist_sq[i] <= range_sq)
				a.potential_d2d = true;
			if (dist_sq[i] > search_sq || dist_sq[i] <= 0.0)
				continue;
			const double rate = ergodic_rate_d2d(t, p.sir_threshold_d2d, std::sqrt(dist_sq[i]));
			a.best_d2d = std::max(a.best_d2d, rate);
		}

		a.mode = a.best_d2d > a.best_fap ? AccessMode::D2D : AccessMode::FAP;
		a.rate = a.mode == AccessMode::D2D ? a.best_d2d : a.best_fap;

		++(a.mode == AccessMode::D2D ? out.n_d2d : out.n_fap);
		if (a.potential_d2d)
		{
			++out.n_potential;
			if (a.mode == AccessMode::FAP)
				++out.n_potential_in_fap;
		}
		out.users.push_back(a);
	}
	return out;
}

BaselineOutcome baseline_payoff(
	const AssignmentResult & assignment, const GroupSizes & groups, const PayoffInputs & in)
{
	BaselineOutcome out;
	out.x_fap = assignment.n_potential > 0
		? static_cast<double>(assignment.n_potential_in_fap) / static_cast<double>(assignment.n_potential)
		: 1.0;
	const PopulationState state{out.x_fap, groups};
	out.payoffs = payoffs(state, in);
	out.avg_payoff = average_payoff(state, out.payoffs);
	return out;
}

void write_assignment_csv(std::ostream & out, const AssignmentResult & assignment)
{
	out << "user_id,x,y,mode,rate\n";
	for (const UserAssignment & a : assignment.users)
		out << fmt::format(
			"{},{},{},{},{}\n", a.user_id, a.position.x(), a.position.y(), to_string(a.mode), a.rate);
}

}  // namespace fran
