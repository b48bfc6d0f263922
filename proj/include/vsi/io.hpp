#pragma once

#include <filesystem>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace vsi {

/// Shortest-round-trip decimal form of a double (17 significant digits).
std::string format_double(double v);

/// Writes through a temp file in the same directory, then renames onto the
/// target, so an interrupted run never leaves a partial file under the
/// declared name. Rethrows writer exceptions after removing the temp file.
void atomic_write_file(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& writer);

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace vsi
