#pragma once

#include <stdexcept>
#include <string>

namespace multispec {

// Exit-code contract shared with the CLI: 0 pass, 2 parse error,
// 3 structural precondition, 4 parameter precondition, 5 numerical failure.
class Error : public std::runtime_error {
public:
    Error(const std::string& msg, int exit_code)
        : std::runtime_error(msg), exit_code_(exit_code) {}
    int exit_code() const noexcept { return exit_code_; }

private:
    int exit_code_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line)
        : Error("parse error at line " + std::to_string(line) + ": " + msg, 2),
          line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

class StructuralError : public Error {
public:
    explicit StructuralError(const std::string& msg) : Error(msg, 3) {}
};

class NotConnected : public StructuralError {
public:
    explicit NotConnected(const std::string& msg = "graph is not connected")
        : StructuralError(msg) {}
};

class ParamError : public Error {
public:
    explicit ParamError(const std::string& msg) : Error(msg, 4) {}
};

class InvalidOperator : public ParamError {
public:
    explicit InvalidOperator(const std::string& msg) : ParamError(msg) {}
};
class InvalidTime : public ParamError {
public:
    explicit InvalidTime(const std::string& msg) : ParamError(msg) {}
};
class DimMismatch : public ParamError {
public:
    explicit DimMismatch(const std::string& msg) : ParamError(msg) {}
};
class InvalidWindow : public ParamError {
public:
    explicit InvalidWindow(const std::string& msg) : ParamError(msg) {}
};
class InvalidIndex : public ParamError {
public:
    explicit InvalidIndex(const std::string& msg) : ParamError(msg) {}
};
class InvalidParams : public ParamError {
public:
    explicit InvalidParams(const std::string& msg) : ParamError(msg) {}
};
class InvalidPartition : public ParamError {
public:
    explicit InvalidPartition(const std::string& msg) : ParamError(msg) {}
};
class InvalidGenus : public ParamError {
public:
    explicit InvalidGenus(const std::string& msg) : ParamError(msg) {}
};
class InvalidOrder : public ParamError {
public:
    explicit InvalidOrder(const std::string& msg) : ParamError(msg) {}
};
class TooLargeForExact : public ParamError {
public:
    explicit TooLargeForExact(const std::string& msg) : ParamError(msg) {}
};
class Unsupported : public ParamError {
public:
    explicit Unsupported(const std::string& msg) : ParamError(msg) {}
};
class PreconditionFailed : public ParamError {
public:
    explicit PreconditionFailed(const std::string& msg) : ParamError(msg) {}
};

class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& msg) : Error(msg, 5) {}
};

class NotPositive : public NumericalError {
public:
    explicit NotPositive(const std::string& msg) : NumericalError(msg) {}
};

class QuadratureError : public NumericalError {
public:
    QuadratureError(const std::string& msg, double achieved_tol)
        : NumericalError(msg + " (achieved tolerance " + std::to_string(achieved_tol) + ")"),
          achieved_tol_(achieved_tol) {}
    double achieved_tol() const noexcept { return achieved_tol_; }

private:
    double achieved_tol_;
};

}  // namespace multispec
