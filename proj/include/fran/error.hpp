#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fran
{

enum class Errc
{
	ConstraintViolation,
	ConfigError,
	EmptyLibrary,
	CacheExceedsLibrary,
	DivisionByZeroGateway,
	NoFapInRegion,
	ZeroCoveredSamples,
	DivergentInterference,
	OutOfDomain,
	WrongExponentForLemma,
	ApproximationDomain,
	CostOverflow,
	DegenerateGame,
};

std::string_view to_string(Errc code);

/// Base error for every failure raised by the library. `code()` is stable and
/// is what the CLI reports in its machine-readable error summary.
class Error : public std::runtime_error
{
public:
	Error(Errc code, const std::string & what) : std::runtime_error(what), code_(code) {}

	Errc code() const noexcept { return code_; }

private:
	Errc code_;
};

class ConstraintViolation : public Error
{
public:
	ConstraintViolation(std::string field, std::string reason)
		: Error(Errc::ConstraintViolation, field + ": " + reason),
		  field_(std::move(field)),
		  reason_(std::move(reason))
	{
	}

	const std::string & field() const noexcept { return field_; }
	const std::string & reason() const noexcept { return reason_; }

private:
	std::string field_;
	std::string reason_;
};

}  // namespace fran
