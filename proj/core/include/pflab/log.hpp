#pragma once

#include <string_view>

#include "pflab/config.hpp"

namespace pflab::log {

void set_level(LogLevel level);
LogLevel level();
void write(LogLevel level, std::string_view message);

inline void error(std::string_view m) { write(LogLevel::error, m); }
inline void warn(std::string_view m) { write(LogLevel::warn, m); }
inline void info(std::string_view m) { write(LogLevel::info, m); }
inline void debug(std::string_view m) { write(LogLevel::debug, m); }

}  // namespace pflab::log
