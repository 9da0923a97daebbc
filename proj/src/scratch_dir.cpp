#include "decompkit/support/scratch_dir.hpp"

#include <cstdlib>
#include <stdexcept>
#include <system_error>

namespace dk {

namespace fs = std::filesystem;

ScratchDir::ScratchDir(const std::string& prefix) {
    const char* base = std::getenv("TMPDIR");
    fs::path root = base && *base ? fs::path(base) : fs::temp_directory_path();
    std::string tpl = (root / (prefix + ".XXXXXX")).string();
    if (!mkdtemp(tpl.data())) {
        throw std::runtime_error("ScratchDir: mkdtemp failed under " + root.string());
    }
    path_ = tpl;
}

ScratchDir::ScratchDir(ScratchDir&& other) noexcept : path_(std::move(other.path_)) {
    other.path_.clear();
}

ScratchDir::~ScratchDir() {
    if (path_.empty()) return;
    std::error_code ec;
    fs::remove_all(path_, ec);  // best effort
}

} // namespace dk
