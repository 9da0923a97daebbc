#pragma once

#include <filesystem>
#include <string>

namespace dk {

// Private temporary directory, removed on destruction. Each compile or
// run job owns one so parallel jobs never share files.
class ScratchDir {
public:
    explicit ScratchDir(const std::string& prefix = "dk");
    ~ScratchDir();

    ScratchDir(const ScratchDir&) = delete;
    ScratchDir& operator=(const ScratchDir&) = delete;
    ScratchDir(ScratchDir&& other) noexcept;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path file(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

} // namespace dk
