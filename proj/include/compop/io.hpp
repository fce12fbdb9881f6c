#pragma once

#include <filesystem>
#include <string>

namespace compop {

/// Shortest-form-independent, locale-free rendering with 17 significant digits.
std::string num(double x);

/// Write via a temporary file in the same directory and rename over the target.
void atomic_write(const std::filesystem::path& path, const std::string& content);

}  // namespace compop
