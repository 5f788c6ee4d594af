#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace womgraph {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class MalformedRecord : public Error {
public:
    MalformedRecord(std::size_t line_no, const std::string &what)
        : Error("line " + std::to_string(line_no) + ": malformed record: " + what),
          line_no_(line_no) {}

    std::size_t line_no() const { return line_no_; }

private:
    std::size_t line_no_;
};

class DanglingReference : public Error {
public:
    DanglingReference(std::size_t line_no, std::string record, std::string missing_id)
        : Error("line " + std::to_string(line_no) + ": " + record + " references unknown id '" +
                missing_id + "'"),
          line_no_(line_no), record_(std::move(record)), missing_id_(std::move(missing_id)) {}

    std::size_t line_no() const { return line_no_; }
    const std::string &record() const { return record_; }
    const std::string &missing_id() const { return missing_id_; }

private:
    std::size_t line_no_;
    std::string record_;
    std::string missing_id_;
};

class DuplicateContentId : public Error {
public:
    DuplicateContentId(std::size_t line_no, std::string id)
        : Error("line " + std::to_string(line_no) + ": duplicate content id '" + id + "'"),
          line_no_(line_no), id_(std::move(id)) {}

    std::size_t line_no() const { return line_no_; }
    const std::string &id() const { return id_; }

private:
    std::size_t line_no_;
    std::string id_;
};

class EmptyCorpus : public Error {
public:
    EmptyCorpus() : Error("corpus contains no nonempty document") {}
};

class NegativeRelevance : public Error {
public:
    explicit NegativeRelevance(double value)
        : Error("relevance must be non-negative, got " + std::to_string(value)) {}
};

class UnsupportedFormat : public Error {
public:
    explicit UnsupportedFormat(const std::string &name)
        : Error("unsupported format '" + name + "'") {}
};

class ZeroVector : public Error {
public:
    ZeroVector() : Error("graph has no edges; centrality vector is identically zero") {}
};

class UnknownUser : public Error {
public:
    explicit UnknownUser(const std::string &id) : Error("unknown user '" + id + "'") {}
};

class ZeroVariance : public Error {
public:
    ZeroVariance() : Error("correlation undefined: a series has zero variance") {}
};

class LengthMismatch : public Error {
public:
    LengthMismatch(std::size_t a, std::size_t b)
        : Error("series lengths differ or are too short: " + std::to_string(a) + " vs " +
                std::to_string(b)) {}
};

class NoRelevantUsers : public Error {
public:
    NoRelevantUsers() : Error("labels contain no relevant user") {}
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class InvalidParams : public Error {
public:
    using Error::Error;
};

} // namespace womgraph
