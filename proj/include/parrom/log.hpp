#ifndef PARROM_LOG_HPP
#define PARROM_LOG_HPP

#include <string>

namespace parrom {

/// Non-fatal diagnostics (ill-conditioned E, quadrature panel cap hit, ...).
/// Written to stderr unless disabled.
void warn(const std::string& message);
void set_warnings_enabled(bool enabled);
bool warnings_enabled();

}  // namespace parrom

#endif  // PARROM_LOG_HPP
