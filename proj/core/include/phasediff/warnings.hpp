#ifndef PHASEDIFF_WARNINGS_HPP
#define PHASEDIFF_WARNINGS_HPP

#include <functional>
#include <string>

namespace phasediff {

using WarningHandler = std::function<void(const std::string&)>;

/// Install a handler for non-fatal diagnostics (boundary-decay violations
/// and the like). Passing an empty function restores the default, which
/// prints to stderr. Returns the previous handler.
WarningHandler set_warning_handler(WarningHandler handler);

void emit_warning(const std::string& message);

} // namespace phasediff

#endif
