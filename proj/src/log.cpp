#include "neurocactus/log.hpp"

#include <cstdlib>
#include <iostream>

namespace neurocactus {

LogLevel log_level() {
  static LogLevel level = [] {
    const char* env = std::getenv("NEUROCACTUS_LOG");
    if (!env) return LogLevel::Error;
    std::string s(env);
    if (s == "debug") return LogLevel::Debug;
    if (s == "info") return LogLevel::Info;
    return LogLevel::Error;
  }();
  return level;
}

void log_error(const std::string& msg) { std::cerr << "[error] " << msg << "\n"; }

void log_info(const std::string& msg) {
  if (log_level() >= LogLevel::Info) std::cerr << "[info] " << msg << "\n";
}

void log_debug(const std::string& msg) {
  if (log_level() >= LogLevel::Debug) std::cerr << "[debug] " << msg << "\n";
}

}  // namespace neurocactus
