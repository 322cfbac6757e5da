#pragma once

#include <stdexcept>
#include <string>

namespace qrobust {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Generic precondition violation not covered by a more specific condition.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

// --- linear algebra kernel ---
class NotHermitian : public Error {
public:
  using Error::Error;
};
class NotSymmetric : public Error {
public:
  using Error::Error;
};
class NoConvergence : public Error {
public:
  using Error::Error;
};
class DegenerateGroundState : public Error {
public:
  using Error::Error;
};
class DimensionMismatch : public Error {
public:
  using Error::Error;
};

// --- spin systems ---
class SiteOutOfRange : public Error {
public:
  using Error::Error;
};
class ChainTooShort : public Error {
public:
  using Error::Error;
};
class InvalidAmplitudes : public Error {
public:
  using Error::Error;
};

// --- derivatives ---
class StepTooSmall : public Error {
public:
  using Error::Error;
};

// --- uncertainty sampling ---
class TooManySamples : public Error {
public:
  using Error::Error;
};
class EmptySampleSet : public Error {
public:
  using Error::Error;
};

// --- convex subproblem ---
class InfeasibleBounds : public Error {
public:
  using Error::Error;
};
class Unbounded : public Error {
public:
  using Error::Error;
};
class NumericalFailure : public Error {
public:
  using Error::Error;
};

// --- optimizers ---
class InfeasibleStart : public Error {
public:
  using Error::Error;
};

// --- configuration / CLI ---
class ConfigInvalid : public Error {
public:
  using Error::Error;
};

}  // namespace qrobust
