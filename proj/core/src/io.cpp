#include "fraclat/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fraclat {

const char* kVersion = "1.0.0";

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open for writing: " + path);
  for (std::size_t j = 0; j < header.size(); ++j)
    os << (j ? "," : "") << header[j];
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j)
      os << (j ? "," : "") << fmt_double(row[j]);
    os << "\n";
  }
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

struct Parser {
  std::map<std::string, std::string>* values;
  std::map<std::string, int>* lines;

  void insert(const std::string& key, const std::string& raw, int line) {
    (*values)[key] = raw;
    (*lines)[key] = line;
  }
};

// strip a trailing comment that is outside brackets
std::string strip_comment(const std::string& line) {
  int depth = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (c == '[') ++depth;
    if (c == ']') --depth;
    if (c == '#' && depth == 0) return line.substr(0, i);
  }
  return line;
}

}  // namespace

KeyValueDoc KeyValueDoc::parse_string(const std::string& text) {
  KeyValueDoc doc;
  Parser p{&doc.values_, &doc.lines_};

  std::vector<std::string> scope;  // open brace groups
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(strip_comment(line));
    if (s.empty()) continue;

    // a single line may carry several "key = value" pairs and brace tokens
    // (e.g. "box { kind = half  extents = [400] }"), so tokenize manually
    std::size_t i = 0;
    while (i < s.size()) {
      while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
      if (i >= s.size()) break;
      if (s[i] == '}') {
        if (scope.empty())
          throw ConfigError("line " + std::to_string(lineno) + ": unmatched '}'");
        scope.pop_back();
        ++i;
        continue;
      }
      // read a key token
      std::size_t k0 = i;
      while (i < s.size() && s[i] != '=' && s[i] != '{' && s[i] != '}') ++i;
      std::string key = trim(s.substr(k0, i - k0));
      if (key.empty())
        throw ConfigError("line " + std::to_string(lineno) + ": expected a key");
      if (i < s.size() && s[i] == '{') {
        scope.push_back(key);
        ++i;
        continue;
      }
      if (i >= s.size() || s[i] != '=')
        throw ConfigError("line " + std::to_string(lineno) + ": expected '=' after '" +
                          key + "'");
      ++i;  // consume '='
      while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
      std::string value;
      if (i < s.size() && s[i] == '[') {
        std::size_t close = s.find(']', i);
        if (close == std::string::npos)
          throw ConfigError("line " + std::to_string(lineno) + ": unclosed '['");
        value = s.substr(i, close - i + 1);
        i = close + 1;
      } else {
        // bare scalar: runs to the next whitespace or '}'
        std::size_t v0 = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) &&
               s[i] != '}')
          ++i;
        value = s.substr(v0, i - v0);
      }
      std::string full = key;
      for (auto it = scope.rbegin(); it != scope.rend(); ++it)
        full = *it + "." + full;
      p.insert(full, trim(value), lineno);
    }
  }
  if (!scope.empty()) throw ConfigError("unclosed '{' for group '" + scope.back() + "'");
  return doc;
}

KeyValueDoc KeyValueDoc::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str());
}

void KeyValueDoc::set(const std::string& key, const std::string& raw) {
  values_[key] = raw;
  lines_[key] = 0;  // synthetic (command line), no source line
}

bool KeyValueDoc::has(const std::string& key) const { return values_.count(key) > 0; }

std::string KeyValueDoc::get_string(const std::string& key, const std::string& def) {
  auto it = values_.find(key);
  if (it == values_.end()) return def;
  consumed_[key] = true;
  return it->second;
}

std::string KeyValueDoc::require_string(const std::string& key) {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing required key: " + key);
  consumed_[key] = true;
  return it->second;
}

double KeyValueDoc::get_double(const std::string& key, double def) {
  auto it = values_.find(key);
  if (it == values_.end()) return def;
  consumed_[key] = true;
  try {
    std::size_t pos = 0;
    double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': cannot parse '" + it->second +
                      "' as a number");
  }
}

long KeyValueDoc::get_long(const std::string& key, long def) {
  auto it = values_.find(key);
  if (it == values_.end()) return def;
  consumed_[key] = true;
  try {
    std::size_t pos = 0;
    long v = std::stol(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': cannot parse '" + it->second +
                      "' as an integer");
  }
}

namespace {

std::vector<std::string> split_list(const std::string& raw, const std::string& key) {
  std::string s = trim(raw);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']')
    throw ConfigError("key '" + key + "': expected a [..] list, got '" + raw + "'");
  s = s.substr(1, s.size() - 2);
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!trim(cur).empty()) out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

}  // namespace

std::vector<double> KeyValueDoc::get_vec(const std::string& key,
                                         const std::vector<double>& def) {
  auto it = values_.find(key);
  if (it == values_.end()) return def;
  consumed_[key] = true;
  std::vector<double> out;
  for (const std::string& tok : split_list(it->second, key)) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw ConfigError("key '" + key + "': cannot parse list entry '" + tok + "'");
    }
  }
  return out;
}

std::vector<int> KeyValueDoc::get_vec_int(const std::string& key,
                                          const std::vector<int>& def) {
  auto it = values_.find(key);
  if (it == values_.end()) return def;
  consumed_[key] = true;
  std::vector<int> out;
  for (const std::string& tok : split_list(it->second, key)) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stoi(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw ConfigError("key '" + key + "': cannot parse list entry '" + tok + "'");
    }
  }
  return out;
}

void KeyValueDoc::reject_unknown() const {
  std::vector<std::string> bad;
  for (const auto& [key, value] : values_) {
    (void)value;
    auto it = consumed_.find(key);
    if (it == consumed_.end() || !it->second) {
      auto ln = lines_.find(key);
      const int line = (ln == lines_.end()) ? 0 : ln->second;
      if (line > 0)
        bad.push_back("line " + std::to_string(line) + ": unknown key '" + key + "'");
      else
        bad.push_back("unknown key '" + key + "'");
    }
  }
  if (!bad.empty()) {
    std::string msg;
    for (const auto& b : bad) msg += (msg.empty() ? "" : "\n") + b;
    throw ConfigError(msg);
  }
}

void ResultDoc::put(const std::string& key, const std::string& v) {
  items_.emplace_back(key, v);
}
void ResultDoc::put(const std::string& key, double v) {
  items_.emplace_back(key, fmt_double(v));
}
void ResultDoc::put(const std::string& key, long v) {
  items_.emplace_back(key, std::to_string(v));
}
void ResultDoc::put(const std::string& key, bool v) {
  items_.emplace_back(key, v ? "true" : "false");
}
void ResultDoc::put_vec(const std::string& key, const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i)
    s += (i ? ", " : "") + fmt_double(v[i]);
  s += "]";
  items_.emplace_back(key, s);
}

std::string ResultDoc::serialize() const {
  std::string out;
  for (const auto& [k, v] : items_) out += k + " = " + v + "\n";
  return out;
}

void ResultDoc::write(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open for writing: " + path);
  os << serialize();
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string file_hash_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot hash missing file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  char hex[32];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(fnv1a64(buf.str())));
  return hex;
}

void write_manifest(const std::string& dir, const std::vector<std::string>& files,
                    const std::string& config_hash) {
  std::vector<std::string> sorted = files;
  std::sort(sorted.begin(), sorted.end());
  std::ofstream os(dir + "/MANIFEST");
  if (!os) throw ConfigError("cannot open manifest in: " + dir);
  os << "version = " << kVersion << "\n";
  os << "config = fnv1a:" << config_hash << "\n";
  for (const auto& name : sorted)
    os << name << " = fnv1a:" << file_hash_hex(dir + "/" + name) << "\n";
}

}  // namespace fraclat
