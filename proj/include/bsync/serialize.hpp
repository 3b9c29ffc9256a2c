#pragma once

#include <string>

#include "bsync/cycleslip.hpp"
#include "bsync/recovery.hpp"

namespace bsync {

// JSON with field names matching the type definitions, plus schema_version.
std::string to_json(const SlipReport& report);
std::string to_json(const SyncResult& result);

} // namespace bsync
