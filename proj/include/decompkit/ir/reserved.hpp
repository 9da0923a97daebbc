#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>

namespace dk::ir {

// Names from the C standard library and POSIX that obfuscation must keep
// when they show up in paired pseudocode. Each name optionally maps to the
// header that declares it (used by compile-check header synthesis).
class StandardWhitelist {
public:
    static const StandardWhitelist& bundled();
    static StandardWhitelist from_file(const std::string& path);

    bool contains(std::string_view name) const;
    // Header that declares `name`, e.g. "string.h" for memcpy; empty if unknown.
    std::string header_for(std::string_view name) const;

    void add(const std::string& name, const std::string& header = "");
    size_t size() const { return entries_.size(); }

private:
    std::map<std::string, std::string, std::less<>> entries_;
};

// The set of names that survive obfuscation: every C keyword and standard
// type unconditionally, plus whitelist names observed in the pseudocode.
class ReservedSet {
public:
    ReservedSet();  // base set only

    bool contains(std::string_view name) const;
    void insert(const std::string& name) { extra_.insert(name); }

    // Names added beyond the unconditional base, sorted.
    const std::set<std::string>& extras() const { return extra_; }

private:
    std::set<std::string> extra_;
};

// Scans pseudocode for identifiers, keeps those on the whitelist, and adds
// them to the unconditional base set. Empty pseudocode yields the base set.
ReservedSet extract_reserved(std::string_view pseudocode,
                             const StandardWhitelist& whitelist =
                                 StandardWhitelist::bundled());

} // namespace dk::ir
