#include "pflab/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace pflab::log {

namespace {
std::atomic<int> g_level{static_cast<int>(LogLevel::info)};
std::mutex g_mutex;
}  // namespace

void set_level(LogLevel level) { g_level = static_cast<int>(level); }

LogLevel level() { return static_cast<LogLevel>(g_level.load()); }

void write(LogLevel lvl, std::string_view message) {
  if (static_cast<int>(lvl) > g_level.load()) return;
  std::lock_guard lock(g_mutex);
  std::cerr << "[" << to_string(lvl) << "] " << message << '\n';
}

}  // namespace pflab::log
