#pragma once

#include <iosfwd>

namespace mapscale::cli {

inline constexpr const char* kVersion = "1.0.0";

// 0 on success, 2 on usage errors, 1 on computation errors (error JSON on err)
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mapscale::cli
