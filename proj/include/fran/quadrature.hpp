#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

namespace fran::quad
{

struct Options
{
	double abs_tol = 1e-12;
	double rel_tol = 1e-10;
	std::size_t max_intervals = 2000;
};

struct Result
{
	double value = 0.0;
	double error = 0.0;
	std::size_t intervals = 0;
	bool converged = false;
};

namespace detail
{

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
inline constexpr std::array<double, 8> xgk = {
	0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
	0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
	0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
	0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> wgk = {
	0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
	0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
	0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
	0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> wg = {
	0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
	0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment
{
	double a;
	double b;
	double value;
	double error;

	bool operator<(const Segment & other) const { return error < other.error; }
};

template <class F>
Segment gk15(const F & f, double a, double b)
{
	const double centre = 0.5 * (a + b);
	const double half = 0.5 * (b - a);
	const double fc = f(centre);
	double kronrod = fc * wgk[7];
	double gauss = fc * wg[3];
	for (std::size_t j = 0; j < 7; ++j)
	{
		const double dx = half * xgk[j];
		const double pair = f(centre - dx) + f(centre + dx);
		kronrod += wgk[j] * pair;
		// odd Kronrod nodes coincide with the 7-point Gauss nodes
		if (j % 2 == 1)
			gauss += wg[j / 2] * pair;
	}
	return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod on [a, b]: the segment with the largest
/// error estimate is bisected until the summed estimate meets the tolerance.
template <class F>
Result integrate(const F & f, double a, double b, const Options & opts = {})
{
	if (a == b)
		return {0.0, 0.0, 0, true};
	if (b < a)
	{
		Result r = integrate(f, b, a, opts);
		r.value = -r.value;
		return r;
	}

	std::priority_queue<detail::Segment> segments;
	detail::Segment first = detail::gk15(f, a, b);
	double total = first.value;
	double error = first.error;
	segments.push(first);

	while (error > std::max(opts.abs_tol, opts.rel_tol * std::abs(total)) &&
		   segments.size() < opts.max_intervals)
	{
		const detail::Segment worst = segments.top();
		const double mid = 0.5 * (worst.a + worst.b);
		if (mid <= worst.a || mid >= worst.b)
			break;
		segments.pop();
		const detail::Segment left = detail::gk15(f, worst.a, mid);
		const detail::Segment right = detail::gk15(f, mid, worst.b);
		total += left.value + right.value - worst.value;
		error += left.error + right.error - worst.error;
		segments.push(left);
		segments.push(right);
	}

	// Re-sum to shed the drift accumulated by the incremental updates.
	double value = 0.0;
	double err = 0.0;
	const std::size_t count = segments.size();
	while (!segments.empty())
	{
		value += segments.top().value;
		err += segments.top().error;
		segments.pop();
	}
	return {value, err, count, err <= std::max(opts.abs_tol, opts.rel_tol * std::abs(value))};
}

/// Integral over [a, inf) through x = a + t/(1-t), t in [0, 1).
template <class F>
Result integrate_to_infinity(const F & f, double a, const Options & opts = {})
{
	const auto mapped = [&](double t) {
		if (t >= 1.0)
			return 0.0;
		const double s = 1.0 - t;
		const double y = f(a + t / s) / (s * s);
		return std::isfinite(y) ? y : 0.0;
	};
	return integrate(mapped, 0.0, 1.0, opts);
}

}  // namespace fran::quad
