// Deterministic output plumbing: CSV with 17-significant-digit floats, a
// small nested key-value document format (config input and result output),
// and FNV-1a manifests.  No timestamps anywhere: identical inputs must
// produce byte-identical files.
#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace fraclat {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// float -> shortest-roundtrip-ish fixed policy: %.17g
std::string fmt_double(double v);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// Config / result documents ----------------------------------------------------
//
// Syntax (one key per line, '#' comments, nesting by braces):
//   command = mourre
//   box { kind = half  extents = [400] }
//   window = [1, 3]
// Keys flatten with dots: box.kind, box.extents.  Values stay as raw strings
// until typed accessors parse them; every get marks the key consumed so that
// unknown keys can be rejected with their line number.

class KeyValueDoc {
 public:
  static KeyValueDoc parse_file(const std::string& path);
  static KeyValueDoc parse_string(const std::string& text);

  void set(const std::string& key, const std::string& raw);  // override / add
  bool has(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& def);
  std::string require_string(const std::string& key);
  double get_double(const std::string& key, double def);
  long get_long(const std::string& key, long def);
  std::vector<double> get_vec(const std::string& key,
                              const std::vector<double>& def);
  std::vector<int> get_vec_int(const std::string& key,
                               const std::vector<int>& def);

  // throws ConfigError naming every unconsumed key and its line
  void reject_unknown() const;

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, int> lines_;
  std::map<std::string, bool> consumed_;
};

// result documents are written with keys in insertion order
class ResultDoc {
 public:
  void put(const std::string& key, const std::string& v);
  void put(const std::string& key, double v);
  void put(const std::string& key, long v);
  void put(const std::string& key, bool v);
  void put_vec(const std::string& key, const std::vector<double>& v);
  std::string serialize() const;
  void write(const std::string& path) const;

 private:
  std::vector<std::pair<std::string, std::string>> items_;
};

std::uint64_t fnv1a64(const std::string& bytes);
std::string file_hash_hex(const std::string& path);

// manifest: one "name = fnv1a:<hex>" line per file (sorted), plus a version
// line and the config hash
void write_manifest(const std::string& dir, const std::vector<std::string>& files,
                    const std::string& config_hash);

extern const char* kVersion;

}  // namespace fraclat
