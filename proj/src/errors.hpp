#pragma once
#include <stdexcept>
#include <string>

namespace fishmpc {

// Status codes shared with the C API and the CLI exit codes.
enum class Status : int { ok = 0, invalid = 1, config = 2, solver = 3, io = 4 };

struct Error : std::runtime_error {
    Status status;
    Error(Status s, const std::string& msg) : std::runtime_error(msg), status(s) {}
};

[[noreturn]] inline void throw_invalid(const std::string& m) { throw Error(Status::invalid, m); }
[[noreturn]] inline void throw_config(const std::string& m) { throw Error(Status::config, m); }
[[noreturn]] inline void throw_solver(const std::string& m) { throw Error(Status::solver, m); }
[[noreturn]] inline void throw_io(const std::string& m) { throw Error(Status::io, m); }

} // namespace fishmpc
