#pragma once

#include <stdexcept>
#include <string>

namespace polyagg {

// All library failures derive from Error and carry a stable machine-readable
// code plus a human-readable witness of what went wrong where.
struct Error : std::runtime_error {
    std::string code;
    std::string witness;

    Error(std::string code_, const std::string& msg, std::string witness_ = {})
        : std::runtime_error(code_ + ": " + msg + (witness_.empty() ? "" : " [" + witness_ + "]")),
          code(std::move(code_)),
          witness(std::move(witness_)) {}
};

struct SizeBlowup : Error {
    explicit SizeBlowup(const std::string& msg, const std::string& w = {})
        : Error("SizeBlowup", msg, w) {}
};

struct LawViolation : Error {
    explicit LawViolation(const std::string& msg, const std::string& w = {})
        : Error("LawViolation", msg, w) {}
};

struct NotEtale : Error {
    explicit NotEtale(const std::string& msg, const std::string& w = {})
        : Error("NotEtale", msg, w) {}
};

struct WrongShape : Error {
    explicit WrongShape(const std::string& msg, const std::string& w = {})
        : Error("WrongShape", msg, w) {}
};

struct NotDualizable : Error {
    explicit NotDualizable(const std::string& msg, const std::string& w = {})
        : Error("NotDualizable", msg, w) {}
};

struct RowTooLarge : Error {
    explicit RowTooLarge(const std::string& msg, const std::string& w = {})
        : Error("RowTooLarge", msg, w) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& msg, const std::string& w = {})
        : Error("ParseError", msg, w) {}
};

struct TypeMismatch : Error {
    explicit TypeMismatch(const std::string& msg, const std::string& w = {})
        : Error("TypeMismatch", msg, w) {}
};

struct UnknownSuite : Error {
    explicit UnknownSuite(const std::string& msg, const std::string& w = {})
        : Error("UnknownSuite", msg, w) {}
};

} // namespace polyagg
