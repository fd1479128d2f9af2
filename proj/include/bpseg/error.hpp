// Copyright 2026 the bpseg authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BPSEG_ERROR_HPP
#define BPSEG_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bpseg {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Mismatched lengths or dimensions.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Zero-norm, non-finite or otherwise unusable vectors and texts.
class InvalidInputError : public Error {
public:
    using Error::Error;
};

/// Malformed input files. `line` is 1-based, 0 when not tied to a line.
class FormatError : public Error {
public:
    explicit FormatError(const std::string& what, std::size_t line = 0)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Invalid parameters (k out of range, negative lambda, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Non-finite intermediate values during inference.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Pk / WindowDiff requested on a labeling they are not defined for.
class MetricInapplicableError : public Error {
public:
    using Error::Error;
};

}  // namespace bpseg

#endif  // BPSEG_ERROR_HPP
