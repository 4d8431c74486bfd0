#include "phasediff/warnings.hpp"

#include <cstdio>
#include <utility>

namespace phasediff {

namespace {
WarningHandler g_handler; // empty -> stderr
}

WarningHandler set_warning_handler(WarningHandler handler) {
  auto previous = std::move(g_handler);
  g_handler = std::move(handler);
  return previous;
}

void emit_warning(const std::string& message) {
  if (g_handler) {
    g_handler(message);
  } else {
    std::fprintf(stderr, "[phasediff] warning: %s\n", message.c_str());
  }
}

} // namespace phasediff
