#pragma once

#include <stdexcept>
#include <string>

namespace flexhome {

// Error categories map 1:1 onto the C API status codes and CLI exit codes.
enum class ErrorCategory {
    Config = 2,
    StaleInput = 3,
    Io = 4,
    SimFault = 5,
    TrainFault = 6,
    InvalidArg = 7,
    Internal = 8,
};

inline const char* error_category_name(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::Config: return "config";
        case ErrorCategory::StaleInput: return "stale-input";
        case ErrorCategory::Io: return "io";
        case ErrorCategory::SimFault: return "sim-fault";
        case ErrorCategory::TrainFault: return "train-fault";
        case ErrorCategory::InvalidArg: return "invalid-arg";
        case ErrorCategory::Internal: return "internal";
    }
    return "internal";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& message)
        : std::runtime_error(message), category_(category) {}

    ErrorCategory category() const { return category_; }

private:
    ErrorCategory category_;
};

[[noreturn]] inline void throw_config(const std::string& msg) { throw Error(ErrorCategory::Config, msg); }
[[noreturn]] inline void throw_stale(const std::string& msg) { throw Error(ErrorCategory::StaleInput, msg); }
[[noreturn]] inline void throw_io(const std::string& msg) { throw Error(ErrorCategory::Io, msg); }
[[noreturn]] inline void throw_sim_fault(const std::string& msg) { throw Error(ErrorCategory::SimFault, msg); }
[[noreturn]] inline void throw_train_fault(const std::string& msg) { throw Error(ErrorCategory::TrainFault, msg); }
[[noreturn]] inline void throw_invalid(const std::string& msg) { throw Error(ErrorCategory::InvalidArg, msg); }

}  // namespace flexhome
