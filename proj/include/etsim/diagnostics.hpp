#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace etsim {

using WarningHandler = std::function<void(std::string_view)>;

/// Installs a handler for non-fatal warnings and returns the previous one.
/// The default handler writes "warning: ..." to stderr.
WarningHandler set_warning_handler(WarningHandler handler);

void warn(std::string_view message);

}  // namespace etsim
