#pragma once

#include <stdexcept>
#include <string>

namespace reta {

// Base for all pipeline errors. Subclasses map to CLI exit codes:
// usage/config -> 1, data integrity/parse -> 2, transport -> 3.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class usage_error : public error {
public:
    using error::error;
};

class config_error : public error {
public:
    using error::error;
};

class parse_error : public error {
public:
    using error::error;
};

class integrity_error : public error {
public:
    using error::error;
};

class not_found_error : public error {
public:
    explicit not_found_error(const std::string& id)
        : error("not found: " + id), id_(id) {}
    const std::string& id() const { return id_; }

private:
    std::string id_;
};

class transport_error : public error {
public:
    transport_error(const std::string& what, int attempts = 1)
        : error(what), attempts_(attempts) {}
    int attempts() const { return attempts_; }

private:
    int attempts_;
};

// Emitted when the service answers 429/503 with a retry hint.
class rate_limit_error : public transport_error {
public:
    rate_limit_error(const std::string& what, double retry_after_s)
        : transport_error(what), retry_after_s_(retry_after_s) {}
    double retry_after_seconds() const { return retry_after_s_; }

private:
    double retry_after_s_;
};

class pipeline_error : public error {
public:
    pipeline_error(const std::string& what, std::string stage, std::string key)
        : error(what), stage_(std::move(stage)), key_(std::move(key)) {}
    const std::string& stage() const { return stage_; }
    const std::string& segment_key() const { return key_; }

private:
    std::string stage_;
    std::string key_;
};

}  // namespace reta
