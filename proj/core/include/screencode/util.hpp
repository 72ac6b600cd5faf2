#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace screencode::util {

std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string to_lower(std::string_view s);
std::string trim(std::string_view s);

// Fixed-precision decimal formatting (locale-independent, for stable file output).
std::string format_double(double v, int precision = 4);

std::string base64_encode(const unsigned char* data, size_t len);

// FNV-1a, used to derive deterministic per-item RNG streams from a corpus seed.
uint64_t fnv1a64(std::string_view s);
inline uint64_t mix_seed(uint64_t seed, uint64_t salt) {
    uint64_t h = seed ^ (salt + 0x9e3779b97f4a7c15ULL);
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    return h;
}

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

// Substitutes {{NAME}} placeholders; unknown placeholders are left in place.
std::string render_template(std::string_view tpl,
                            const std::vector<std::pair<std::string, std::string>>& vars);

// Runs fn(0..n-1) on up to `jobs` worker threads. Exceptions are rethrown on
// the calling thread after all workers finish. Callers index into pre-sized
// output buffers, so results are deterministic regardless of scheduling.
void parallel_for(size_t n, int jobs, const std::function<void(size_t)>& fn);

}  // namespace screencode::util
