#pragma once

#include <stdexcept>
#include <string>

namespace focuseval {

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define FOCUSEVAL_DEFINE_ERROR(Name)   \
  class Name : public Error {          \
   public:                             \
    using Error::Error;                \
  };

FOCUSEVAL_DEFINE_ERROR(InvalidArgument)
FOCUSEVAL_DEFINE_ERROR(PlacementExhausted)
FOCUSEVAL_DEFINE_ERROR(UnknownObject)
FOCUSEVAL_DEFINE_ERROR(InstantiationExhausted)
FOCUSEVAL_DEFINE_ERROR(NonUniqueAnchor)
FOCUSEVAL_DEFINE_ERROR(InvalidProgram)
FOCUSEVAL_DEFINE_ERROR(FormatError)
FOCUSEVAL_DEFINE_ERROR(ValueError)
FOCUSEVAL_DEFINE_ERROR(NoSignal)
FOCUSEVAL_DEFINE_ERROR(DimensionMismatch)
FOCUSEVAL_DEFINE_ERROR(UndefinedAuc)
FOCUSEVAL_DEFINE_ERROR(EmptyTruth)

#undef FOCUSEVAL_DEFINE_ERROR

}  // namespace focuseval

namespace focuseval {

/// Missing or unreadable files on disk.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace focuseval
