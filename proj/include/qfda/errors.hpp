#pragma once

#include <stdexcept>
#include <string>

namespace qfda {

// Base for every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define QFDA_DEFINE_ERROR(Name)                                                \
    class Name : public Error {                                                \
    public:                                                                    \
        using Error::Error;                                                    \
    };

QFDA_DEFINE_ERROR(FormatError)       // malformed file header or payload
QFDA_DEFINE_ERROR(ConsistencyError)  // inputs disagree in shape, count or labels
QFDA_DEFINE_ERROR(SizeError)         // image too small for one 8x8 block
QFDA_DEFINE_ERROR(SplitError)        // class too small to split
QFDA_DEFINE_ERROR(DataError)         // empty or degenerate data
QFDA_DEFINE_ERROR(IndexError)        // index out of range
QFDA_DEFINE_ERROR(ValueError)        // non-finite or invalid scalar argument
QFDA_DEFINE_ERROR(NumericError)      // factorization or division failure
QFDA_DEFINE_ERROR(DimensionError)    // requested dimension exceeds what exists
QFDA_DEFINE_ERROR(FileError)         // I/O failure
QFDA_DEFINE_ERROR(OptimizationError) // every cost evaluation failed
QFDA_DEFINE_ERROR(ConfigError)       // bad config key or value

#undef QFDA_DEFINE_ERROR

}  // namespace qfda
