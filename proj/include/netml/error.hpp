#pragma once

#include <stdexcept>
#include <string>

namespace netml {

// Root of the library's error taxonomy. CLI exit codes map onto the two
// broad subtrees: ConfigError -> 1, DataError -> 2, anything else -> 3.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct DataError : Error {
    using Error::Error;
};

// ingest
struct MissingFile : DataError {
    using DataError::DataError;
};
struct MalformedRow : DataError {
    using DataError::DataError;
};
struct UnknownAttackName : DataError {
    using DataError::DataError;
};
struct MissingLabel : DataError {
    using DataError::DataError;
};

// preprocess
struct UnseenCategory : DataError {
    using DataError::DataError;
};
struct EmptyTrainingSet : DataError {
    using DataError::DataError;
};
struct TooFewRows : DataError {
    using DataError::DataError;
};
struct SplitUnavailable : DataError {
    using DataError::DataError;
};

// feature selection / shapes
struct LengthMismatch : Error {
    using Error::Error;
};
struct DimensionMismatch : Error {
    using Error::Error;
};
struct SizeOutOfRange : ConfigError {
    using ConfigError::ConfigError;
};

// classifiers
struct EmptyClass : DataError {
    using DataError::DataError;
};
struct KTooLarge : ConfigError {
    using ConfigError::ConfigError;
};
struct TrainingSetTooLarge : ConfigError {
    using ConfigError::ConfigError;
};
struct DegenerateCovariance : DataError {
    using DataError::DataError;
};

// metrics
struct LabelOutOfRange : Error {
    using Error::Error;
};
struct EmptyMatrix : Error {
    using Error::Error;
};

// neural
struct NonFiniteLoss : Error {
    using Error::Error;
};

// persistence / reports
struct VersionMismatch : Error {
    using Error::Error;
};
struct CorruptFile : Error {
    using Error::Error;
};
struct IoFailure : Error {
    using Error::Error;
};

// experiment runner
struct CellTimeout : Error {
    using Error::Error;
};

}  // namespace netml
