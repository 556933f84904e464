#ifndef CARTO_ERRORS_HPP
#define CARTO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace carto
{

// Base class for every error raised by the library. Each subclass names
// one failure mode so callers can catch precisely what they can handle.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

#define CARTO_DEFINE_ERROR(name)                                             \
  class name : public Error                                                  \
  {                                                                          \
  public:                                                                    \
    explicit name(const std::string &what) : Error(#name ": " + what) {}     \
  }

CARTO_DEFINE_ERROR(StructureMismatch);
CARTO_DEFINE_ERROR(DegenerateGeometry);
CARTO_DEFINE_ERROR(NonPositiveValue);
CARTO_DEFINE_ERROR(GridTooCoarse);
CARTO_DEFINE_ERROR(NoConvergence);
CARTO_DEFINE_ERROR(LeftCanvas);
CARTO_DEFINE_ERROR(DegenerateProjection);
CARTO_DEFINE_ERROR(OutsideCanvas);
CARTO_DEFINE_ERROR(RegionMismatch);
CARTO_DEFINE_ERROR(ParseError);
CARTO_DEFINE_ERROR(IdMismatch);
CARTO_DEFINE_ERROR(IoError);

#undef CARTO_DEFINE_ERROR

}  // namespace carto

#endif
