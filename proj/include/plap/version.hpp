#pragma once

#define PLAP_VERSION "0.1.0"

namespace plap {
inline const char* version() { return PLAP_VERSION; }
}  // namespace plap
