#include "filmflow/util.hpp"

#include <cstdlib>
#include <cstring>

namespace filmflow {

LogLevel log_level() {
    static LogLevel level = [] {
        const char* env = std::getenv("FILMFLOW_LOG");
        if (!env) return LogLevel::Warn;
        if (std::strcmp(env, "quiet") == 0) return LogLevel::Quiet;
        if (std::strcmp(env, "info") == 0) return LogLevel::Info;
        if (std::strcmp(env, "debug") == 0) return LogLevel::Debug;
        return LogLevel::Warn;
    }();
    return level;
}

void log_msg(LogLevel level, const char* fmt, ...) {
    if (log_level() < level) return;
    va_list args;
    va_start(args, fmt);
    std::fprintf(stderr, "[filmflow] ");
    std::vfprintf(stderr, fmt, args);
    std::fprintf(stderr, "\n");
    va_end(args);
}

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace filmflow
