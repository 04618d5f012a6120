#ifndef HYDROSIM_LOG_HPP
#define HYDROSIM_LOG_HPP

#include <string>

namespace hydrosim {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

/// Current level, initialized once from the HYDROSIM_LOG environment
/// variable (error|warn|info|debug); defaults to warn.
LogLevel log_level();

void log(LogLevel level, const std::string& msg);

inline void log_error(const std::string& msg) { log(LogLevel::Error, msg); }
inline void log_warn(const std::string& msg) { log(LogLevel::Warn, msg); }
inline void log_info(const std::string& msg) { log(LogLevel::Info, msg); }
inline void log_debug(const std::string& msg) { log(LogLevel::Debug, msg); }

} // namespace hydrosim

#endif
