#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace dk {

std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, std::string_view content);

// Files under `dir` with one of the given extensions, sorted by path so
// every scan order is reproducible.
std::vector<std::filesystem::path> list_files(const std::filesystem::path& dir,
                                              const std::vector<std::string>& extensions);

// Runs fn(0..n-1) on a small worker pool. Results must be written to
// pre-sized slots; the call returns after all indices complete.
void parallel_for(size_t n, unsigned jobs, const std::function<void(size_t)>& fn);

} // namespace dk
