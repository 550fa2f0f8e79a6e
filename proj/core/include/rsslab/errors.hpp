#pragma once

#include <stdexcept>
#include <string>

namespace rsslab {

/// Base class for all rsslab errors. CLI maps these to exit code 2.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ValidationError : public Error {
public:
    using Error::Error;
};

/// Homography fit design matrix is rank-deficient beyond tolerance.
class DegenerateConfiguration : public Error {
public:
    using Error::Error;
};

/// Homogeneous w-component below epsilon when applying a homography.
class NumericalInstability : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

class CorruptArtifact : public Error {
public:
    using Error::Error;
};

/// Position and RSS streams have no common time range.
class EmptyOverlap : public Error {
public:
    using Error::Error;
};

/// A stream is constant; correlation undefined.
class DegenerateVariance : public Error {
public:
    using Error::Error;
};

class UnknownRecording : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

class LengthMismatch : public Error {
public:
    using Error::Error;
};

/// Training produced a non-finite loss.
class Diverged : public Error {
public:
    explicit Diverged(const std::string& what, int epoch) : Error(what), epoch(epoch) {}
    int epoch;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace rsslab
