#include "hydrosim/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace hydrosim {

namespace {

LogLevel parse_level() {
    const char* env = std::getenv("HYDROSIM_LOG");
    if (!env) return LogLevel::Warn;
    std::string s(env);
    if (s == "error") return LogLevel::Error;
    if (s == "warn") return LogLevel::Warn;
    if (s == "info") return LogLevel::Info;
    if (s == "debug") return LogLevel::Debug;
    return LogLevel::Warn;
}

const char* level_tag(LogLevel l) {
    switch (l) {
        case LogLevel::Error: return "error";
        case LogLevel::Warn: return "warn";
        case LogLevel::Info: return "info";
        default: return "debug";
    }
}

std::mutex g_log_mutex;

} // namespace

LogLevel log_level() {
    static const LogLevel level = parse_level();
    return level;
}

void log(LogLevel level, const std::string& msg) {
    if (static_cast<int>(level) > static_cast<int>(log_level())) return;
    std::lock_guard<std::mutex> lock(g_log_mutex);
    std::cerr << "hydrosim [" << level_tag(level) << "] " << msg << "\n";
}

} // namespace hydrosim
