#pragma once

#include <stdexcept>
#include <string>

namespace qce {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define QCE_DEFINE_ERROR(Name)                       \
  class Name : public Error {                        \
   public:                                           \
    explicit Name(const std::string& what)           \
        : Error(std::string(#Name ": ") + what) {}   \
  }

QCE_DEFINE_ERROR(NotFundamental);
QCE_DEFINE_ERROR(NotInvertible);
QCE_DEFINE_ERROR(InvalidHint);
QCE_DEFINE_ERROR(DomainError);
QCE_DEFINE_ERROR(LevelMismatch);
QCE_DEFINE_ERROR(UnsupportedCase);
QCE_DEFINE_ERROR(NotPrime);
QCE_DEFINE_ERROR(DividesDiscriminant);
QCE_DEFINE_ERROR(NonConvergence);
QCE_DEFINE_ERROR(UnsupportedPrime);
QCE_DEFINE_ERROR(UnsupportedRamification);

#undef QCE_DEFINE_ERROR

}  // namespace qce
