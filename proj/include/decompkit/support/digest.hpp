#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace dk {

// SHA-256 of a byte string, returned as lowercase hex.
std::string sha256_hex(std::string_view data);

// First 16 hex chars of sha256_hex; enough for file keys and log lines.
std::string short_digest(std::string_view data);

// FNV-1a 64-bit. Used where a fast non-cryptographic hash is enough
// (token hashing, band bucketing).
constexpr uint64_t fnv1a64(std::string_view data) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// splitmix64 finalizer; decorrelates seeded hash streams.
constexpr uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

} // namespace dk
