#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "fran/game.hpp"
#include "fran/geometry.hpp"
#include "fran/scenario.hpp"

namespace fran
{

struct UserAssignment
{
	std::int64_t user_id = 0;
	Eigen::Vector2d position = Eigen::Vector2d::Zero();
	AccessMode mode = AccessMode::FAP;
	double rate = 0.0;        // best rate of the chosen mode
	double best_d2d = 0.0;    // R_d^max, 0 without a candidate
	double best_fap = 0.0;    // R_f^max
	bool potential_d2d = false;  // content-holding transmitter within d2d_range
};

struct AssignmentResult
{
	std::vector<UserAssignment> users;
	std::int64_t n_d2d = 0;
	std::int64_t n_fap = 0;
	std::int64_t n_potential = 0;
	std::int64_t n_potential_in_fap = 0;
};

/// Max-rate rule: each requester takes D2D iff its best content-holding
/// transmitter within maxrate_search_radius beats the best F-AP rate
/// (strictly; ties go to F-AP). Rates are the analytic conditional rates at
/// the candidate's distance.
AssignmentResult max_rate_assign(const NetworkRealization & net, const ValidatedParams & params);

struct BaselineOutcome
{
	double x_fap = 0.0;
	Payoffs payoffs;
	double avg_payoff = 0.0;
};

/// Group-average payoff of the potential-D2D group at the F-AP share implied
/// by the assignment (share among realized potential-D2D users).
BaselineOutcome baseline_payoff(
	const AssignmentResult & assignment, const GroupSizes & groups, const PayoffInputs & in);

/// user_id,x,y,mode,rate
void write_assignment_csv(std::ostream & out, const AssignmentResult & assignment);

}  // namespace fran
