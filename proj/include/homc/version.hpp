#pragma once

namespace homc {

inline constexpr const char* kVersion = "1.0.0";

// Schema tag embedded in every emitted report so a report alone identifies
// the layout it was written with.
inline constexpr const char* kReportSchema = "homc-report/1";

}  // namespace homc
