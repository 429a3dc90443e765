#ifndef EDUSEG_ERRORS_HPP
#define EDUSEG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace eduseg {

// Base for all toolkit errors. The CLI maps any of these to a nonzero exit.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed external input (bracketed trees, corpus records).
class FormatError : public Error {
public:
    explicit FormatError(const std::string& msg) : Error(msg) {}
};

// Structurally valid input that violates a domain invariant.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// EDU text does not match the token stream.
class AlignmentError : public Error {
public:
    explicit AlignmentError(const std::string& msg) : Error(msg) {}
};

// Token or label position out of range.
class IndexError : public Error {
public:
    explicit IndexError(const std::string& msg) : Error(msg) {}
};

// Node handle not belonging to the queried tree.
class MembershipError : public Error {
public:
    explicit MembershipError(const std::string& msg) : Error(msg) {}
};

// Invalid argument combination at an API boundary.
class ArgumentError : public Error {
public:
    explicit ArgumentError(const std::string& msg) : Error(msg) {}
};

// Operation not permitted in the object's current state.
class StateError : public Error {
public:
    explicit StateError(const std::string& msg) : Error(msg) {}
};

// Feature id exceeds the weight table.
class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& msg) : Error(msg) {}
};

// Corrupt or inconsistent model container.
class ModelError : public Error {
public:
    explicit ModelError(const std::string& msg) : Error(msg) {}
};

}  // namespace eduseg

#endif
