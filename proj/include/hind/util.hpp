#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hind {

// Error taxonomy shared across the pipeline. Everything user-facing maps to
// one of these; the CLI turns them into exit codes.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BindingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BackendError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CapabilityError : BackendError {
  using BackendError::BackendError;
};
struct ProtocolError : BackendError {
  using BackendError::BackendError;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// FNV-1a 64-bit. Used for content addressing of prompts/fixtures and for
// deriving per-sample RNG streams; not cryptographic.
std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ull);
std::string hex64(std::uint64_t v);
inline std::string digest(std::string_view data) { return hex64(fnv1a64(data)); }

std::string read_file(const std::filesystem::path& path);

// Writes via a sibling temp file + rename so rerun diffs never observe a
// partially written output.
void atomic_write_file(const std::filesystem::path& path, std::string_view content);

std::string to_lower(std::string s);
std::string trim(std::string_view s);
std::vector<std::string> split_lines(std::string_view text);
bool starts_with_icase(std::string_view text, std::string_view prefix);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Deterministic xorshift-based stream; used wherever reproducibility across
// standard-library implementations matters (std::shuffle and the
// distribution classes are not portable bit-for-bit).
class DetRng {
 public:
  explicit DetRng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}
  std::uint64_t next();
  // Uniform in [0, n); n > 0.
  std::size_t below(std::size_t n);
  double unit();  // [0, 1)

 private:
  std::uint64_t state_;
};

template <typename T>
void det_shuffle(std::vector<T>& v, DetRng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[rng.below(i)]);
  }
}

}  // namespace hind
