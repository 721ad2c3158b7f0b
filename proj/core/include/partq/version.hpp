#pragma once

namespace partq {

/// Version of the report/CSV schema emitted by the tools; bump on any
/// column or field change.
inline constexpr int kSchemaVersion = 1;

/// Library version, kept in sync with the build system.
inline constexpr const char* kVersionString = "0.1.0";

} // namespace partq
