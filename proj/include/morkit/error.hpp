// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MORKIT_ERROR_HPP
#define MORKIT_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace morkit
{

// Broad classes of failure. The CLI maps each class to its own exit status.
enum class ErrorClass
{
  Config,
  Solve,
  Numerical,
  Precondition,
  Format,
  Io,
};

class Error : public std::runtime_error
{
public:
  Error(ErrorClass cls, const std::string &what) : std::runtime_error(what), cls_(cls) {}
  ErrorClass error_class() const noexcept { return cls_; }

private:
  ErrorClass cls_;
};

#define MORKIT_DEFINE_ERROR(Name, Class)                                                   \
  class Name : public Error                                                                \
  {                                                                                        \
  public:                                                                                  \
    explicit Name(const std::string &what) : Error(ErrorClass::Class, #Name ": " + what) {} \
  }

MORKIT_DEFINE_ERROR(ConfigError, Config);
MORKIT_DEFINE_ERROR(SolveFailure, Solve);
MORKIT_DEFINE_ERROR(NotSPD, Numerical);
MORKIT_DEFINE_ERROR(DegenerateVector, Numerical);
MORKIT_DEFINE_ERROR(InfeasibleConstraints, Numerical);
MORKIT_DEFINE_ERROR(NonCoercive, Numerical);
MORKIT_DEFINE_ERROR(Diverged, Numerical);
MORKIT_DEFINE_ERROR(NoConvergence, Numerical);
MORKIT_DEFINE_ERROR(SamplingDegenerate, Numerical);
MORKIT_DEFINE_ERROR(TooFewPoints, Numerical);
MORKIT_DEFINE_ERROR(InsufficientData, Numerical);
MORKIT_DEFINE_ERROR(DimensionMismatch, Precondition);
MORKIT_DEFINE_ERROR(NotSymmetric, Precondition);
MORKIT_DEFINE_ERROR(StaleState, Precondition);
MORKIT_DEFINE_ERROR(MeshTooCoarse, Precondition);
MORKIT_DEFINE_ERROR(PreconditionViolation, Precondition);
MORKIT_DEFINE_ERROR(FormatError, Format);
MORKIT_DEFINE_ERROR(IoError, Io);

#undef MORKIT_DEFINE_ERROR

// Requested dimension exceeds the numerical rank of the data.
class RankDeficient : public Error
{
public:
  RankDeficient(const std::string &what, std::ptrdiff_t observed_rank)
    : Error(ErrorClass::Numerical,
            "RankDeficient: " + what + " (observed rank " + std::to_string(observed_rank) + ")"),
      observed_rank_(observed_rank)
  {
  }
  std::ptrdiff_t observed_rank() const noexcept { return observed_rank_; }

private:
  std::ptrdiff_t observed_rank_;
};

// Some sample points fall outside the admissible parameter box.
class DomainViolation : public Error
{
public:
  DomainViolation(const std::string &what, std::vector<std::size_t> offending)
    : Error(ErrorClass::Precondition, "DomainViolation: " + what), offending_(std::move(offending))
  {
  }
  const std::vector<std::size_t> &offending() const noexcept { return offending_; }

private:
  std::vector<std::size_t> offending_;
};

}  // namespace morkit

#endif  // MORKIT_ERROR_HPP
