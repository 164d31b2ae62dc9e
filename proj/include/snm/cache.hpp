#ifndef SNM_CACHE_HPP
#define SNM_CACHE_HPP

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>
#include <string_view>

#include "snm/errors.hpp"

namespace snm {

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// Content-addressed store: the key names the computation, the file name is
/// the hash of the key, and a sidecar holds the payload checksum. A payload
/// whose checksum does not match is treated as missing.
class Cache {
 public:
  explicit Cache(std::filesystem::path root) : root_(std::move(root)) {}

  /// $SNM_CACHE_DIR, else $XDG_CACHE_HOME/snm, else ~/.cache/snm, else ./.snm_cache.
  static Cache from_environment() {
    if (const char* d = std::getenv("SNM_CACHE_DIR"); d && *d) return Cache(d);
    if (const char* x = std::getenv("XDG_CACHE_HOME"); x && *x) return Cache(std::filesystem::path(x) / "snm");
    if (const char* h = std::getenv("HOME"); h && *h) return Cache(std::filesystem::path(h) / ".cache" / "snm");
    return Cache(".snm_cache");
  }

  const std::filesystem::path& root() const noexcept { return root_; }

  std::filesystem::path payload_path(std::string_view key) const { return root_ / (hex64(fnv1a64(key)) + ".bin"); }
  std::filesystem::path checksum_path(std::string_view key) const { return root_ / (hex64(fnv1a64(key)) + ".sum"); }

  std::optional<std::string> load(std::string_view key) const {
    std::ifstream in(payload_path(key), std::ios::binary);
    std::ifstream sum(checksum_path(key));
    if (!in || !sum) return std::nullopt;
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::string recorded;
    std::string stored_key;
    sum >> recorded;
    sum.ignore(1);
    std::getline(sum, stored_key);
    if (recorded != hex64(fnv1a64(data)) || stored_key != key) return std::nullopt;
    return data;
  }

  void store(std::string_view key, std::string_view data) const {
    std::error_code ec;
    std::filesystem::create_directories(root_, ec);
    if (ec) throw IoError("cannot create cache directory " + root_.string());
    const auto path = payload_path(key);
    const auto tmp = std::filesystem::path(path.string() + ".tmp");
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out.write(data.data(), static_cast<std::streamsize>(data.size()));
      if (!out) throw IoError("cannot write cache entry " + tmp.string());
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot move cache entry into place: " + path.string());
    std::ofstream sum(checksum_path(key), std::ios::trunc);
    sum << hex64(fnv1a64(data)) << '\n' << key << '\n';
    if (!sum) throw IoError("cannot write cache checksum for " + path.string());
  }

  /// Cached payload for `key`, produced (and stored) on a miss. With
  /// use_cache false the producer always runs and nothing is read or written.
  template <class Producer>
  std::string get_or_make(std::string_view key, Producer&& produce, bool use_cache = true,
                          bool* hit = nullptr) const {
    if (hit) *hit = false;
    if (use_cache) {
      if (auto cached = load(key)) {
        if (hit) *hit = true;
        return *cached;
      }
    }
    std::string data = produce();
    if (use_cache) store(key, data);
    return data;
  }

 private:
  std::filesystem::path root_;
};

}  // namespace snm

#endif  // SNM_CACHE_HPP
