#ifndef QUANTOPOS_ERRORS_HPP
#define QUANTOPOS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace quantopos {

// Base class for every domain error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define QUANTOPOS_DEFINE_ERROR(NAME)                \
    struct NAME : Error {                           \
        using Error::Error;                         \
    }

QUANTOPOS_DEFINE_ERROR(NonHermitian);
QUANTOPOS_DEFINE_ERROR(DimensionMismatch);
QUANTOPOS_DEFINE_ERROR(NonCommutativeResult);
QUANTOPOS_DEFINE_ERROR(NonCommutingGenerators);
QUANTOPOS_DEFINE_ERROR(UnknownLabel);
QUANTOPOS_DEFINE_ERROR(TooManyObservables);
QUANTOPOS_DEFINE_ERROR(NonCommutativePreimage);
QUANTOPOS_DEFINE_ERROR(FlatEscapesPoset);
QUANTOPOS_DEFINE_ERROR(SearchSpaceTooLarge);
QUANTOPOS_DEFINE_ERROR(ShapeMismatch);
QUANTOPOS_DEFINE_ERROR(UnknownObject);
QUANTOPOS_DEFINE_ERROR(InvalidSieve);
QUANTOPOS_DEFINE_ERROR(NotASubobject);
QUANTOPOS_DEFINE_ERROR(MalformedDiagram);
QUANTOPOS_DEFINE_ERROR(ProperCategoryMissing);
QUANTOPOS_DEFINE_ERROR(ParseError);
QUANTOPOS_DEFINE_ERROR(UnknownArtifact);

// Raised when two routes that are provably equivalent disagree; always a bug.
QUANTOPOS_DEFINE_ERROR(InternalCheckError);

#undef QUANTOPOS_DEFINE_ERROR

}  // namespace quantopos

#endif
