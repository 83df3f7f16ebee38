#pragma once

#include <stdexcept>
#include <string>

namespace mvclust {

/// Coarse error category. The CLI maps each category onto its exit code.
enum class ErrorCategory {
    Data = 2,    // malformed or inconsistent input data
    Config = 3,  // invalid parameters or flags
    Io = 4,      // filesystem failures
    Numeric = 5, // a solver reached a state it cannot continue from
};

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

/// Every way a dataset can be rejected during ingestion or validation.
enum class DataErrorKind {
    MissingFile,
    RaggedRows,
    NonNumeric,
    RowCountMismatch,
    NonFinite,
    EmptyDataset,
    EmptyView,
    BadLabels,
    BadManifest,
};

const char* to_string(DataErrorKind kind) noexcept;

class DataError : public Error {
public:
    DataError(DataErrorKind kind, const std::string& what)
        : Error(ErrorCategory::Data, std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    DataErrorKind kind() const noexcept { return kind_; }

private:
    DataErrorKind kind_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorCategory::Config, what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorCategory::Io, what) {}
};

} // namespace mvclust
