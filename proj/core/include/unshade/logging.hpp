#pragma once

#include <string>

namespace unshade::log {

enum class Level { debug = 0, info = 1, warn = 2, error = 3 };

Level level();
void set_level(Level lv);
// Accepts "debug", "info", "warn", "error"; returns false on unknown name.
bool set_level(const std::string& name);

void write(Level lv, const char* fmt, ...) __attribute__((format(printf, 2, 3)));

}  // namespace unshade::log

#define LOG_DEBUG(...) ::unshade::log::write(::unshade::log::Level::debug, __VA_ARGS__)
#define LOG_INFO(...) ::unshade::log::write(::unshade::log::Level::info, __VA_ARGS__)
#define LOG_WARN(...) ::unshade::log::write(::unshade::log::Level::warn, __VA_ARGS__)
#define LOG_ERROR(...) ::unshade::log::write(::unshade::log::Level::error, __VA_ARGS__)
