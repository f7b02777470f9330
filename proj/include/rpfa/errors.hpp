#pragma once

#include <stdexcept>

namespace rpfa {

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A mapped CSV column is missing or the column mapping is unusable.
struct SchemaError : Error { using Error::Error; };
/// A row could not be parsed; the message cites the data row number.
struct ParseError : Error { using Error::Error; };
/// Records are mutually inconsistent (duplicates, bad outcome values).
struct ValidationError : Error { using Error::Error; };
/// A group of attempts has no usable ordering.
struct OrderingError : Error { using Error::Error; };
/// An argument is outside its documented range.
struct ParameterError : Error { using Error::Error; };
/// An index (e.g. opportunity t) is out of range for its sequence.
struct IndexError : Error { using Error::Error; };
/// A spec and the data it is applied to disagree (e.g. decay mismatch).
struct ConfigError : Error { using Error::Error; };
/// Matrix/vector dimensions do not line up.
struct ShapeError : Error { using Error::Error; };
/// Prediction was requested for a student or KC the model has never seen.
struct UnknownEntityError : Error { using Error::Error; };
/// Reading or writing a file failed.
struct IoError : Error { using Error::Error; };
/// An operation that needs data received none.
struct EmptyInputError : Error { using Error::Error; };

}  // namespace rpfa
