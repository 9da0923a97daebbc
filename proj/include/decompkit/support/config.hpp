#pragma once

#include <map>
#include <optional>
#include <string>

namespace dk {

// Flat key=value configuration. Lines starting with '#' are comments.
// Keys keep their given order irrelevant; lookups are by exact key.
class Config {
public:
    Config() = default;

    static Config from_file(const std::string& path);
    static Config from_string(const std::string& text);

    std::optional<std::string> get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
    int get_int(const std::string& key, int fallback) const;
    double get_double(const std::string& key, double fallback) const;

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

// Environment lookup with fallback.
std::string env_or(const char* name, const std::string& fallback);

} // namespace dk
