#ifndef BTTN_ACCEPTANCE_HPP
#define BTTN_ACCEPTANCE_HPP

#include <ostream>
#include <string>

namespace bttn::acceptance {

struct Options {
    std::string preset_dir;   // empty: default_preset_dir()
    std::string scratch_dir;  // empty: under the system temp directory
};

/// Runs the full acceptance suite, printing one pass/fail line per criterion.
/// Returns the number of failed criteria.
int run_all(std::ostream& out, const Options& opts = {});

}  // namespace bttn::acceptance

#endif
