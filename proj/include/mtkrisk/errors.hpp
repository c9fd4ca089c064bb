#pragma once

#include <stdexcept>
#include <string>

namespace mtk {

// Error taxonomy shared by the library and the CLI envelope.
// Exit-code mapping: ok=0, config=1, domain=2, numeric=3.
enum class Status { Ok = 0, ConfigError = 1, DomainError = 2, NumericError = 3 };

class Error : public std::runtime_error {
public:
    Error(Status s, const std::string& msg) : std::runtime_error(msg), status_(s) {}
    Status status() const noexcept { return status_; }

private:
    Status status_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(Status::ConfigError, msg) {}
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(Status::DomainError, msg) {}
};

class NumericError : public Error {
public:
    explicit NumericError(const std::string& msg) : Error(Status::NumericError, msg) {}
};

inline const char* status_name(Status s) {
    switch (s) {
        case Status::Ok: return "ok";
        case Status::ConfigError: return "config_error";
        case Status::DomainError: return "domain_error";
        case Status::NumericError: return "numeric_error";
    }
    return "unknown";
}

}  // namespace mtk
