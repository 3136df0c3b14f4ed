// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stgraph Authors

#pragma once

#include <stdexcept>
#include <string>

namespace stg {

// Mirrors stg_status in the C API; the numeric values are part of the ABI.
enum class ErrorCode : int {
    invalid_argument = 1,
    not_found = 2,
    schema = 3,
    io = 4,
    parse = 5,
    state = 6,
    internal = 99,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class NotFoundError : public Error {
public:
    explicit NotFoundError(const std::string& message) : Error(ErrorCode::not_found, message) {}
};

class SchemaError : public Error {
public:
    explicit SchemaError(const std::string& message) : Error(ErrorCode::schema, message) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& message) : Error(ErrorCode::io, message) {}
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& message) : Error(ErrorCode::parse, message) {}
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& message)
        : Error(ErrorCode::invalid_argument, message) {}
};

}  // namespace stg
