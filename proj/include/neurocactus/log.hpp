#pragma once

#include <string>

namespace neurocactus {

enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

// Level comes from NEUROCACTUS_LOG ({error,info,debug}); defaults to error.
LogLevel log_level();

void log_error(const std::string& msg);
void log_info(const std::string& msg);
void log_debug(const std::string& msg);

}  // namespace neurocactus
