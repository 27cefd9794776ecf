// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dpumodel Authors

#pragma once

#include <stdexcept>
#include <string>

namespace dpu {

/// Domain error: invalid configuration, shape mismatch, unsupported operator.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Input file could not be parsed. `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
   public:
    ParseError(const std::string& what, int line)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line),
          detail_(what) {}
    int line() const { return line_; }
    /// Message without the line prefix.
    const std::string& detail() const { return detail_; }

   private:
    int line_;
    std::string detail_;
};

/// A wide accumulator exceeded its hardware width.
class OverflowError : public Error {
   public:
    using Error::Error;
};

}  // namespace dpu
