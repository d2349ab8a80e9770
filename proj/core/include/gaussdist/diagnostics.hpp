#pragma once

#include <functional>
#include <string>

namespace gaussdist {

/// Sink for non-fatal numerical warnings (defaults to stderr).
using WarningSink = std::function<void(const std::string&)>;

void set_warning_sink(WarningSink sink);
void warn(const std::string& message);

}  // namespace gaussdist
