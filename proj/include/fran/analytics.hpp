#pragma once

#include "fran/scenario.hpp"

namespace fran
{

enum class Method
{
	ClosedForm,
	Quadrature,
	MonteCarlo,
};

struct ModeStats
{
	double coverage = 0.0;
	double ergodic_rate = 0.0;  // nats/s/Hz
	Method method = Method::ClosedForm;
};

/// The physical-layer slice of a scenario that the closed forms read.
struct Tiers
{
	double alpha = 4.0;
	double power_d2d = 1.0;
	double power_fap = 1.0;
	double density_d2d_interferers = 0.0;  // content-marked transmitters, p_c^D * lambda_tu
	double density_tx_fap_mode = 0.0;      // transmitters interfering on the F-AP link
	double density_fap = 0.0;
	bool printed_d2d_rate_exponent = false;
};

Tiers tiers(const ValidatedParams & params);

/// 2 pi csc(2 pi / alpha) / alpha; pole at alpha = 2.
double c_alpha(double alpha);

/// Ei(x) = -int_{-x}^inf e^-t / t dt for x < 0.
double exp_integral_ei(double x);

/// rho(T, alpha) = int_{T^{-2/alpha}}^inf T^{2/alpha} / (1 + v^{alpha/2}) dv.
double rho_integral(double t, double alpha);

// Coverage Pr(SIR >= T) and high-SIR ergodic rates for both access modes.
// Rates are approximations (ln(1+SIR) replaced by ln SIR) and are clamped
// at zero with a warning on std::clog when a threshold below 1 drives them
// negative.

double coverage_d2d(const Tiers & tiers, double t_d, double dist);
double ergodic_rate_d2d(const Tiers & tiers, double t_d, double dist);
double coverage_fap(const Tiers & tiers, double t_f);
double ergodic_rate_fap(const Tiers & tiers, double t_f);

/// Closed-form F-AP rate for alpha = 4, t_f >= 1 (arctan(A) ~ A step).
double lemma1_rate_fap(const Tiers & tiers, double t_f);

double coverage_d2d(const ValidatedParams & params, double t_d, double dist);
double ergodic_rate_d2d(const ValidatedParams & params, double t_d, double dist);
double coverage_fap(const ValidatedParams & params, double t_f);
double ergodic_rate_fap(const ValidatedParams & params, double t_f);
double lemma1_rate_fap(const ValidatedParams & params, double t_f);

/// Both quantities at the scenario's own thresholds and link distance.
ModeStats analytic_d2d(const ValidatedParams & params);
ModeStats analytic_fap(const ValidatedParams & params);

}  // namespace fran
