#include "unshade/logging.hpp"

#include <cstdarg>
#include <cstdio>

namespace unshade::log {

namespace {
Level g_level = Level::info;

const char* tag(Level lv) {
  switch (lv) {
    case Level::debug: return "debug";
    case Level::info: return "info";
    case Level::warn: return "warn";
    case Level::error: return "error";
  }
  return "?";
}
}  // namespace

Level level() { return g_level; }

void set_level(Level lv) { g_level = lv; }

bool set_level(const std::string& name) {
  if (name == "debug") g_level = Level::debug;
  else if (name == "info") g_level = Level::info;
  else if (name == "warn") g_level = Level::warn;
  else if (name == "error") g_level = Level::error;
  else return false;
  return true;
}

void write(Level lv, const char* fmt, ...) {
  if (static_cast<int>(lv) < static_cast<int>(g_level)) return;
  std::fprintf(stderr, "[%s] ", tag(lv));
  va_list args;
  va_start(args, fmt);
  std::vfprintf(stderr, fmt, args);
  va_end(args);
  std::fputc('\n', stderr);
  std::fflush(stderr);
}

}  // namespace unshade::log
