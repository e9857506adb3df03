#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cellstress {

// Base class for everything this library throws on bad data or bad usage.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class MalformedRowError : public Error {
public:
    MalformedRowError(std::size_t line, const std::string& reason)
        : Error("malformed row at line " + std::to_string(line) + ": " + reason),
          line_(line), reason_(reason) {}
    std::size_t line() const { return line_; }
    const std::string& reason() const { return reason_; }

private:
    std::size_t line_;
    std::string reason_;
};

class UnknownCellError : public Error {
public:
    explicit UnknownCellError(const std::string& cell_id)
        : Error("unknown cell: " + cell_id), cell_id_(cell_id) {}
    const std::string& cell_id() const { return cell_id_; }

private:
    std::string cell_id_;
};

class UnknownClientError : public Error {
public:
    explicit UnknownClientError(const std::string& client_id)
        : Error("unknown client: " + client_id), client_id_(client_id) {}
    const std::string& client_id() const { return client_id_; }

private:
    std::string client_id_;
};

class EmptyDatasetError : public Error {
public:
    EmptyDatasetError() : Error("dataset contains no events") {}
};

class UngroupedClientError : public Error {
public:
    explicit UngroupedClientError(const std::string& client_id)
        : Error("client has events but no group: " + client_id), client_id_(client_id) {}
    const std::string& client_id() const { return client_id_; }

private:
    std::string client_id_;
};

class UnknownSegmentError : public Error {
public:
    explicit UnknownSegmentError(const std::string& segment)
        : Error("unknown segment: " + segment) {}
};

class EmptySegmentError : public Error {
public:
    explicit EmptySegmentError(const std::string& segment)
        : Error("segment has no members, frequency undefined: " + segment) {}
};

class ZeroPopulationError : public Error {
public:
    ZeroPopulationError() : Error("total client count is zero") {}
};

class InsufficientClientsError : public Error {
public:
    explicit InsufficientClientsError(const std::string& msg) : Error(msg) {}
};

class NonTerminationError : public Error {
public:
    explicit NonTerminationError(const std::string& msg) : Error(msg) {}
};

class TooLargeError : public Error {
public:
    explicit TooLargeError(const std::string& msg) : Error(msg) {}
};

class EmptyInfrastructureError : public Error {
public:
    EmptyInfrastructureError() : Error("no antennas to assess") {}
};

class InvalidConfigError : public Error {
public:
    explicit InvalidConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace cellstress
