#ifndef FILMFLOW_UTIL_HPP
#define FILMFLOW_UTIL_HPP

#include <cstdarg>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace filmflow {

/// Linear or nonlinear solver failure (breakdown, non-convergence, singular factor).
class SolveError : public std::runtime_error {
public:
    explicit SolveError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A monitored invariant left its tolerance band.
class InvariantBreach : public std::runtime_error {
public:
    explicit InvariantBreach(const std::string& msg) : std::runtime_error(msg) {}
};

/// Configuration / input validation failure.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class LogLevel { Quiet = 0, Warn = 1, Info = 2, Debug = 3 };

/// Log level comes from the FILMFLOW_LOG environment variable only.
LogLevel log_level();
void log_msg(LogLevel level, const char* fmt, ...);

inline void log_warn(const char* fmt, ...) {
    if (log_level() < LogLevel::Warn) return;
    va_list args;
    va_start(args, fmt);
    std::fprintf(stderr, "[filmflow:warn] ");
    std::vfprintf(stderr, fmt, args);
    std::fprintf(stderr, "\n");
    va_end(args);
}

inline void log_info(const char* fmt, ...) {
    if (log_level() < LogLevel::Info) return;
    va_list args;
    va_start(args, fmt);
    std::fprintf(stderr, "[filmflow] ");
    std::vfprintf(stderr, fmt, args);
    std::fprintf(stderr, "\n");
    va_end(args);
}

std::string format_g17(double v);

}  // namespace filmflow

#endif
