#pragma once

#include <stdexcept>
#include <string>

namespace imcf {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define IMCF_DEFINE_ERROR(Name)                  \
  class Name : public Error {                    \
   public:                                       \
    using Error::Error;                          \
  }

IMCF_DEFINE_ERROR(DomainError);      // coordinate outside the profile domain
IMCF_DEFINE_ERROR(ProfileError);     // warp function not admissible (lambda <= 0, lambda' <= 0)
IMCF_DEFINE_ERROR(GeometryError);    // degenerate induced metric
IMCF_DEFINE_ERROR(CurvatureError);   // H <= 0 somewhere
IMCF_DEFINE_ERROR(StabilityError);   // time step violates the CFL guard
IMCF_DEFINE_ERROR(ArgumentError);
IMCF_DEFINE_ERROR(FitError);
IMCF_DEFINE_ERROR(ParamError);
IMCF_DEFINE_ERROR(LapseError);
IMCF_DEFINE_ERROR(ShapeError);
IMCF_DEFINE_ERROR(WindowError);
IMCF_DEFINE_ERROR(ParseError);
IMCF_DEFINE_ERROR(ValidationError);
IMCF_DEFINE_ERROR(IoError);

#undef IMCF_DEFINE_ERROR

}  // namespace imcf
