#pragma once

#include <stdexcept>
#include <string>

namespace adha {

/// Base class of every error raised by the library.
///
/// `DataError` subclasses describe bad inputs (malformed files, infeasible
/// data); `InternalError` marks a broken invariant inside the library. The CLI
/// maps them to distinct exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class InternalError : public Error {
 public:
  using Error::Error;
};

#define ADHA_DEFINE_ERROR(Name, Base)                         \
  class Name : public Base {                                  \
   public:                                                    \
    explicit Name(const std::string& what) : Base(what) {}    \
  }

// geometry
ADHA_DEFINE_ERROR(UnboundedPolytope, DataError);
ADHA_DEFINE_ERROR(EmptyPolytope, DataError);
ADHA_DEFINE_ERROR(EmptyInput, DataError);
ADHA_DEFINE_ERROR(DimensionMismatch, DataError);
// dynamics
ADHA_DEFINE_ERROR(NonFiniteInput, DataError);
// trajectory
ADHA_DEFINE_ERROR(OutOfDomain, DataError);
// segmentation
ADHA_DEFINE_ERROR(TooFewSamples, DataError);
ADHA_DEFINE_ERROR(NoFeasiblePiece, DataError);
// membership / automaton
ADHA_DEFINE_ERROR(PathLengthMismatch, DataError);
ADHA_DEFINE_ERROR(InjectivityViolation, DataError);
ADHA_DEFINE_ERROR(UnknownLocation, DataError);
// simulation
ADHA_DEFINE_ERROR(EmptyInvariant, DataError);
// synthesis
ADHA_DEFINE_ERROR(NoActivatedNode, InternalError);

#undef ADHA_DEFINE_ERROR

}  // namespace adha
