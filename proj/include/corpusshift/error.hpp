/*
 * Copyright 2026 The corpusshift Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace corpusshift {

enum class ErrorCode {
    EmptyInput,
    InvalidEncoding,
    FormatError,
    UnknownCategory,
    DuplicatePattern,
    CycleDetected,
    LanguageMismatch,
    LabelMismatch,
    EmptySample,
    SampleTooSmall,
    DegenerateSample,
    DanglingReference,
    DoubleAssignment,
    NonMonotonic,
    Unassigned,
    EmptyDocument,
    InvalidArgument,
    IoError,
};

constexpr std::string_view error_code_name(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InvalidEncoding: return "InvalidEncoding";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::UnknownCategory: return "UnknownCategory";
    case ErrorCode::DuplicatePattern: return "DuplicatePattern";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::LanguageMismatch: return "LanguageMismatch";
    case ErrorCode::LabelMismatch: return "LabelMismatch";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::SampleTooSmall: return "SampleTooSmall";
    case ErrorCode::DegenerateSample: return "DegenerateSample";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::DoubleAssignment: return "DoubleAssignment";
    case ErrorCode::NonMonotonic: return "NonMonotonic";
    case ErrorCode::Unassigned: return "Unassigned";
    case ErrorCode::EmptyDocument: return "EmptyDocument";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

/// Every failure raised by the library. `line()` is 1-based and 0 when the
/// error is not tied to a line of some input text.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::size_t line = 0)
        : std::runtime_error(format(code, message, line)), code_(code), line_(line) {}

    ErrorCode code() const noexcept { return code_; }
    std::size_t line() const noexcept { return line_; }

    /// Same error with a source name (usually a file path) prefixed.
    Error with_source(std::string_view source) const {
        Error copy = *this;
        static_cast<std::runtime_error&>(copy) =
            std::runtime_error(std::string(source) + ": " + what());
        return copy;
    }

private:
    static std::string format(ErrorCode code, const std::string& message, std::size_t line) {
        std::string out(error_code_name(code));
        if (line > 0) {
            out += " at line " + std::to_string(line);
        }
        out += ": ";
        out += message;
        return out;
    }

    ErrorCode code_;
    std::size_t line_;
};

} // namespace corpusshift
