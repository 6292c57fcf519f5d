#pragma once

#include <stdexcept>
#include <string>

namespace molehill {

/// Base class for all molehill errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Data and validation failures (bad files, empty inputs, contract violations).
/// The CLI maps these to exit code 2.
class DataError : public Error {
public:
    using Error::Error;
};

/// LLM transport failures (HTTP status, timeout). CLI exit code 3.
class TransportError : public Error {
public:
    explicit TransportError(const std::string& what, int status = 0, bool timed_out = false)
        : Error(what), status_(status), timed_out_(timed_out) {}
    int status() const { return status_; }
    bool timed_out() const { return timed_out_; }

private:
    int status_ = 0;
    bool timed_out_ = false;
};

class UnknownChartError : public DataError {
public:
    explicit UnknownChartError(const std::string& chart_id)
        : DataError("unknown chart id: " + chart_id) {}
};

class MalformedRecordError : public DataError {
public:
    MalformedRecordError(std::size_t line, const std::string& detail)
        : DataError("malformed record at line " + std::to_string(line) + ": " + detail),
          line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class UnknownWordError : public DataError {
public:
    explicit UnknownWordError(const std::string& word)
        : DataError("word not in lexicon (strict mode): " + word) {}
};

class EmptyDatasetError : public DataError {
public:
    EmptyDatasetError() : DataError("dataset contains no annotation records") {}
};

class WordAbsentError : public DataError {
public:
    explicit WordAbsentError(const std::string& word)
        : DataError("word not present in dataset: " + word) {}
};

class SingleWordError : public DataError {
public:
    explicit SingleWordError(const std::string& detail)
        : DataError("need at least two clusterable words: " + detail) {}
};

class NoPairsError : public DataError {
public:
    NoPairsError() : DataError("no adjective-verb pair shares a segment") {}
};

class BadWindowError : public DataError {
public:
    explicit BadWindowError(const std::string& detail)
        : DataError("bad smoothing window: " + detail) {}
};

class KernelTooLongError : public DataError {
public:
    KernelTooLongError(std::size_t kernel_len, std::size_t signal_len)
        : DataError("kernel length " + std::to_string(kernel_len) +
                    " exceeds signal length " + std::to_string(signal_len)) {}
};

class SignalTooShortError : public DataError {
public:
    explicit SignalTooShortError(const std::string& detail)
        : DataError("signal too short: " + detail) {}
};

class NoKernelsError : public DataError {
public:
    NoKernelsError() : DataError("no kernels to match against") {}
};

class EmptyTableError : public DataError {
public:
    EmptyTableError() : DataError("pair slope table is empty") {}
};

class InvalidContextError : public DataError {
public:
    explicit InvalidContextError(const std::string& detail)
        : DataError("invalid feature context: " + detail) {}
};

class NoJsonFoundError : public DataError {
public:
    NoJsonFoundError() : DataError("no top-level JSON array found in reply body") {}
};

class SchemaMismatchError : public DataError {
public:
    explicit SchemaMismatchError(const std::string& detail)
        : DataError("resource list schema mismatch: " + detail) {}
};

class SpecTooSmallError : public DataError {
public:
    explicit SpecTooSmallError(const std::string& detail)
        : DataError("render spec too small: " + detail) {}
};

}  // namespace molehill
