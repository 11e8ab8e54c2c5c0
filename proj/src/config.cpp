// config.cpp — Line-oriented key/value parser

#include "hops/config.hpp"

#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <type_traits>

namespace hops {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    for (char c : k)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-')) return false;
    return true;
}

bool parse_real(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* b = s.data();
    if (*b == '+') ++b;
    const char* e = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && ptr == e;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

// shortest text that reads back to the same double
std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

} // namespace

Complex parse_complex(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (c != ' ' && c != '\t') s += c;
    if (s.empty()) throw std::invalid_argument("empty complex literal");
    double re = 0.0, im = 0.0;
    if (s.back() != 'i' && s.back() != 'j') {
        if (!parse_real(s, re)) throw std::invalid_argument("bad complex literal '" + raw + "'");
        return {re, 0.0};
    }
    s.pop_back();
    // split at the last sign that is not an exponent sign and not the leading sign
    std::size_t split = std::string::npos;
    for (std::size_t i = s.size(); i-- > 1;) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    std::string re_part = split == std::string::npos ? "" : s.substr(0, split);
    std::string im_part = split == std::string::npos ? s : s.substr(split);
    if (im_part.empty() || im_part == "+") im_part = "1";
    if (im_part == "-") im_part = "-1";
    if (!re_part.empty() && !parse_real(re_part, re)) throw std::invalid_argument("bad complex literal '" + raw + "'");
    if (!parse_real(im_part, im)) throw std::invalid_argument("bad complex literal '" + raw + "'");
    return {re, im};
}

Config Config::parse(std::istream& in, const std::string& source) {
    Config cfg;
    cfg.source_ = source;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(source + ":" + std::to_string(lineno) + ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!valid_key(key))
            throw ConfigError(source + ":" + std::to_string(lineno) + ": invalid key '" + key + "'");
        if (value.empty())
            throw ConfigError(source + ":" + std::to_string(lineno) + ": key '" + key + "' has no value");
        const auto [it, inserted] = cfg.entries_.emplace(key, Entry{value, lineno});
        if (!inserted)
            throw ConfigError(source + ":" + std::to_string(lineno) + ": duplicate key '" + key +
                              "' (first set on line " + std::to_string(it->second.line) + ")");
    }
    return cfg;
}

Config Config::parse_string(const std::string& text, const std::string& source) {
    std::istringstream in(text);
    return parse(in, source);
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    Config cfg = parse(in, path);
    cfg.base_dir_ = std::filesystem::path(path).parent_path().string();
    return cfg;
}

bool Config::has(const std::string& key) const { return entries_.count(key) > 0; }

std::vector<std::string> Config::keys() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : entries_) out.push_back(k);
    return out;
}

const Config::Entry& Config::entry(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError(source_ + ": missing required key '" + key + "'");
    return it->second;
}

void Config::fail(const std::string& key, const std::string& what) const {
    const auto it = entries_.find(key);
    std::string where = source_;
    if (it != entries_.end() && it->second.line > 0) where += ":" + std::to_string(it->second.line);
    throw ConfigError(where + ": key '" + key + "': " + what);
}

template <typename T>
T Config::fallback_get(const std::string& key, T fallback, T (Config::*getter)(const std::string&) const) const {
    if (has(key)) return (this->*getter)(key);
    if constexpr (std::is_same_v<T, double>)
        defaults_used_[key] = format_double(fallback);
    else if constexpr (std::is_same_v<T, std::string>)
        defaults_used_[key] = fallback;
    else
        defaults_used_[key] = std::to_string(fallback);
    return fallback;
}

std::string Config::get_string(const std::string& key) const { return entry(key).value; }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    return fallback_get<std::string>(key, fallback, &Config::get_string);
}

double Config::get_double(const std::string& key) const {
    double v = 0.0;
    if (!parse_real(entry(key).value, v)) fail(key, "expected a real number, got '" + entry(key).value + "'");
    return v;
}

double Config::get_double(const std::string& key, double fallback) const {
    return fallback_get<double>(key, fallback, &Config::get_double);
}

long Config::get_int(const std::string& key) const {
    const std::string& s = entry(key).value;
    long v = 0;
    const char* b = s.data() + (s.front() == '+' ? 1 : 0);
    auto [ptr, ec] = std::from_chars(b, s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) fail(key, "expected an integer, got '" + s + "'");
    return v;
}

long Config::get_int(const std::string& key, long fallback) const {
    return fallback_get<long>(key, fallback, &Config::get_int);
}

std::uint64_t Config::get_uint(const std::string& key) const {
    const std::string& s = entry(key).value;
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) fail(key, "expected a nonnegative integer, got '" + s + "'");
    return v;
}

std::uint64_t Config::get_uint(const std::string& key, std::uint64_t fallback) const {
    return fallback_get<std::uint64_t>(key, fallback, &Config::get_uint);
}

Complex Config::get_complex(const std::string& key) const {
    try {
        return parse_complex(entry(key).value);
    } catch (const std::invalid_argument& e) {
        fail(key, e.what());
    }
}

std::vector<double> Config::get_doubles(const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : split_list(entry(key).value)) {
        double v = 0.0;
        if (!parse_real(item, v)) fail(key, "expected a list of real numbers, bad item '" + item + "'");
        out.push_back(v);
    }
    return out;
}

std::vector<long> Config::get_ints(const std::string& key) const {
    std::vector<long> out;
    for (const auto& item : split_list(entry(key).value)) {
        long v = 0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || ec != std::errc() || ptr != item.data() + item.size())
            fail(key, "expected a list of integers, bad item '" + item + "'");
        out.push_back(v);
    }
    return out;
}

std::vector<Complex> Config::get_complexes(const std::string& key) const {
    std::vector<Complex> out;
    for (const auto& item : split_list(entry(key).value)) {
        try {
            out.push_back(parse_complex(item));
        } catch (const std::invalid_argument& e) {
            fail(key, e.what());
        }
    }
    return out;
}

void Config::set(const std::string& key, const std::string& value) {
    if (!valid_key(key)) throw ConfigError("invalid override key '" + key + "'");
    entries_[key] = Entry{value, 0};
    defaults_used_.erase(key);
}

std::string Config::resolved() const {
    std::map<std::string, std::string> all;
    for (const auto& [k, e] : entries_) all[k] = e.value;
    for (const auto& [k, v] : defaults_used_) all.emplace(k, v);
    std::ostringstream os;
    for (const auto& [k, v] : all) os << k << " = " << v << "\n";
    return os.str();
}

std::string Config::resolve_path(const std::string& key) const {
    const std::filesystem::path p(get_string(key));
    if (p.is_absolute() || base_dir_.empty()) return p.string();
    return (std::filesystem::path(base_dir_) / p).string();
}

} // namespace hops
