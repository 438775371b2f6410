#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace hessbound {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An endpoint was NaN/infinite, or lo > hi.
class InvalidInterval : public Error {
public:
    using Error::Error;
};

/// phi is not defined (or not twice differentiable) on the whole box.
class DomainViolation : public Error {
public:
    DomainViolation(std::string op, std::string detail, std::optional<std::size_t> line = std::nullopt)
        : Error(format(op, detail, line)), op_(std::move(op)), detail_(std::move(detail)), line_(line) {}

    const std::string& op() const noexcept { return op_; }
    std::optional<std::size_t> line() const noexcept { return line_; }

    /// Same violation, tagged with the (1-based) codelist line it occurred on.
    DomainViolation at_line(std::size_t line) const { return DomainViolation(op_, detail_, line); }

private:
    static std::string format(const std::string& op, const std::string& detail, std::optional<std::size_t> line) {
        std::string s = "domain violation in " + op + ": " + detail;
        if (line) s += " (line " + std::to_string(*line) + ")";
        return s;
    }

    std::string op_;
    std::string detail_;
    std::optional<std::size_t> line_;
};

class EmptySlice : public Error {
public:
    EmptySlice() : Error("operation on an empty slice") {}
};

class LengthMismatch : public Error {
public:
    using Error::Error;
};

class SyntaxError : public Error {
public:
    SyntaxError(std::size_t position, const std::string& message)
        : Error("syntax error at " + std::to_string(position) + ": " + message), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class UnknownVariable : public Error {
public:
    explicit UnknownVariable(const std::string& name) : Error("unknown variable '" + name + "'"), name_(name) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class ConstantExpression : public Error {
public:
    ConstantExpression() : Error("expression does not depend on any variable") {}
};

class MalformedCodelist : public Error {
public:
    MalformedCodelist(std::size_t line, const std::string& reason)
        : Error("malformed codelist at line " + std::to_string(line) + ": " + reason), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class RuleDispatchGap : public Error {
public:
    explicit RuleDispatchGap(std::size_t line) : Error("no bound rule matches line " + std::to_string(line)) {}
};

class NotSymmetric : public Error {
public:
    using Error::Error;
};

class DimensionTooLarge : public Error {
public:
    using Error::Error;
};

class InconsistentInputs : public Error {
public:
    using Error::Error;
};

class PointOutsideBox : public Error {
public:
    using Error::Error;
};

} // namespace hessbound
