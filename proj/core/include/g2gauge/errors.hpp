#pragma once

#include <stdexcept>
#include <string>

namespace g2gauge {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A polynomial variable was left unassigned during evaluation.
class MissingAssignment : public Error {
public:
    using Error::Error;
};

// Differentiation was requested with respect to a declared parameter.
class NotACoordinate : public Error {
public:
    using Error::Error;
};

class DegreeMismatch : public Error {
public:
    using Error::Error;
};

// A built-in self-check of transcribed constant data failed.
class ConstructionFailure : public Error {
public:
    using Error::Error;
};

class NotInSpan : public Error {
public:
    using Error::Error;
};

class WrongNullity : public Error {
public:
    using Error::Error;
};

class NonRealCoefficient : public Error {
public:
    using Error::Error;
};

class NotInG2 : public Error {
public:
    using Error::Error;
};

// A computed table row differs from the stored reference closed form.
class MismatchWithReference : public Error {
public:
    using Error::Error;
};

class DegenerateSample : public Error {
public:
    using Error::Error;
};

class GradingMismatch : public Error {
public:
    using Error::Error;
};

class UnsupportedPattern : public Error {
public:
    using Error::Error;
};

class RuleFailure : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class InvalidGaugeData : public Error {
public:
    using Error::Error;
};

class UnknownSymbol : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, int line, int column)
        : Error(what + " (line " + std::to_string(line) + ", column " +
                std::to_string(column) + ")"),
          line_(line),
          column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

}  // namespace g2gauge
