#pragma once

#include <stdexcept>
#include <string>

namespace utilrisk {

// Base class for all engine errors so callers can catch one type.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Probabilities not strictly positive or not summing to one.
struct ProbabilityError : Error { using Error::Error; };

// Market admits a nonnegative, somewhere-positive portfolio payoff.
struct ArbitrageError : Error { using Error::Error; };

// Return columns are linearly dependent.
struct RedundancyError : Error { using Error::Error; };

// Sampling retries exhausted without producing a valid market.
struct GenerationError : Error { using Error::Error; };

// Vector lengths disagree (payoff vs probabilities vs scenario count).
struct LengthMismatch : Error { using Error::Error; };

// Parameter or argument outside the admissible domain.
struct DomainError : Error { using Error::Error; };

// Root bracketing failed within the expansion bound.
struct NoRoot : Error { using Error::Error; };

// Bracket expansion never trapped a minimum.
struct UnboundedBelow : Error { using Error::Error; };

// Operation restricted to low dimension was called above it.
struct DimensionError : Error { using Error::Error; };

// Share vector violates the budget identity.
struct BudgetError : Error { using Error::Error; };

// Caller violated a documented precondition.
struct PreconditionError : Error { using Error::Error; };

// Even the riskless portfolio violates the constraint.
struct InfeasibleError : Error { using Error::Error; };

// Malformed specification text (command-line grammar, not a value problem).
struct ParseError : Error { using Error::Error; };

} // namespace utilrisk
