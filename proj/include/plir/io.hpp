#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include "plir/finite_rep.hpp"
#include "plir/measure.hpp"

namespace plir {

/// Raised for unreadable, unparsable, or invariant-violating input files;
/// what() carries the file and the offending field.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Loads {"M", "N", "p"} and optionally {"x"} from a JSON file. x defaults
/// to zero when absent and require_x is false.
std::pair<FiniteSpace, FieldRV> load_space_and_rv(const std::string& path, bool require_x = true);

/// Loads {"M", "N", "p", "vertices": [[...], ...]} into a SupportSet over
/// its space.
std::pair<FiniteSpace, SupportSet> load_support_set(const std::string& path);

/// Writes content to "<path>.tmp" and renames into place, so a failed run
/// never leaves a partial file.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace plir
