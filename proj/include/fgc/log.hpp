#pragma once

#include <string_view>

namespace fgc::log {

enum class Level { error = 0, warn = 1, info = 2, debug = 3 };

/// Threshold is read once from the FGC_LOG environment variable
/// (error|warn|info|debug, default warn).
Level threshold();
void set_threshold(Level level);

void write(Level level, std::string_view message);
inline void warn(std::string_view m) { write(Level::warn, m); }
inline void info(std::string_view m) { write(Level::info, m); }
inline void debug(std::string_view m) { write(Level::debug, m); }

}  // namespace fgc::log
