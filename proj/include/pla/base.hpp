#pragma once

#include <stdexcept>
#include <string>

namespace pla {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// bad instance data, bad config file, misuse of a field
struct config_error : error {
    using error::error;
};

// structurally invalid tangle: genus != 0, shading conflict, bad placement
struct tangle_error : error {
    using error::error;
};

// an internal consistency check failed; signals a convention bug, aborts the build
struct check_error : error {
    using error::error;
};

struct parse_error : error {
    int line, col;
    parse_error(const std::string& msg, int line_, int col_)
        : error(msg + " (line " + std::to_string(line_) + ", col " + std::to_string(col_) + ")"),
          line(line_), col(col_) {}
};

} // namespace pla
