#pragma once

#include <functional>
#include <string>

namespace ivlab::log {

using Sink = std::function<void(const std::string&)>;

/// Thread-safe; default sink writes "warning: ..." lines to stderr.
void warn(const std::string& message);

/// Replaces the sink and returns the previous one. An empty sink restores stderr.
Sink set_sink(Sink sink);

}  // namespace ivlab::log
