// Copyright 2026-present the hashcube authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hashcube {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input violates an operation's precondition (shapes, dimensions, ranges).
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// Input vector dimension differs from the model's.
class DimensionMismatch : public InvalidInput {
public:
    DimensionMismatch(std::size_t expected, std::size_t actual)
            : InvalidInput("dimension mismatch: expected " +
                           std::to_string(expected) + ", got " +
                           std::to_string(actual)),
              expected(expected),
              actual(actual) {}

    std::size_t expected;
    std::size_t actual;
};

/// Ball enumeration requested above its cap; use the multi-index path.
class RadiusTooLarge : public InvalidInput {
public:
    RadiusTooLarge(int radius, int cap)
            : InvalidInput("radius " + std::to_string(radius) +
                           " exceeds ball enumeration cap " +
                           std::to_string(cap) +
                           "; use multi-index lookup (query_radius)"),
              radius(radius),
              cap(cap) {}

    int radius;
    int cap;
};

class DuplicateKey : public Error {
public:
    explicit DuplicateKey(const std::string& key)
            : Error("duplicate key: " + key), key(key) {}

    std::string key;
};

class UnknownLabel : public Error {
public:
    explicit UnknownLabel(const std::string& label)
            : Error("unknown label: " + label), label(label) {}

    std::string label;
};

class NotFound : public Error {
public:
    using Error::Error;
};

class TrainingDiverged : public Error {
public:
    explicit TrainingDiverged(std::size_t step)
            : Error("training diverged: non-finite loss at step " +
                    std::to_string(step)),
              step(step) {}

    std::size_t step;
};

struct FieldError {
    std::string field;
    std::string message;
};

/// Malformed request; carries one entry per offending field.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<FieldError> fields)
            : Error(format(fields)), fields(std::move(fields)) {}

    ValidationError(std::string field, std::string message)
            : ValidationError(
                      std::vector<FieldError>{{std::move(field), std::move(message)}}) {}

    std::vector<FieldError> fields;

private:
    static std::string format(const std::vector<FieldError>& fields) {
        std::string out = "validation failed";
        for (const auto& f : fields) {
            out += "; " + f.field + ": " + f.message;
        }
        return out;
    }
};

/// Text input that could not be parsed; `location` is e.g. "manifest.jsonl:12".
class ParseError : public Error {
public:
    ParseError(std::string location, const std::string& message)
            : Error(location + ": " + message), location(std::move(location)) {}

    std::string location;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace hashcube
