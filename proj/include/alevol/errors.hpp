#pragma once

#include <stdexcept>
#include <string>

namespace alevol {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define ALEVOL_DEFINE_ERROR(Name)                                                  \
    class Name : public Error {                                                    \
    public:                                                                        \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {}       \
    };

ALEVOL_DEFINE_ERROR(NonHomogeneous)
ALEVOL_DEFINE_ERROR(RankMismatch)
ALEVOL_DEFINE_ERROR(AmbientMismatch)
ALEVOL_DEFINE_ERROR(NotInKernel)
ALEVOL_DEFINE_ERROR(NotOrientationReversing)
ALEVOL_DEFINE_ERROR(InvalidRank)
ALEVOL_DEFINE_ERROR(DimensionMismatch)
ALEVOL_DEFINE_ERROR(RadiusTooSmall)
ALEVOL_DEFINE_ERROR(OutOfDomain)
ALEVOL_DEFINE_ERROR(NoBracket)
ALEVOL_DEFINE_ERROR(GridTooSmall)
ALEVOL_DEFINE_ERROR(MetricNotPositive)
ALEVOL_DEFINE_ERROR(ParseError)

#undef ALEVOL_DEFINE_ERROR

} // namespace alevol
