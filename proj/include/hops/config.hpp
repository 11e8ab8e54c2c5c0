// config.hpp — `key.subkey = value` run configuration with line-anchored errors

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "hops/types.hpp"

namespace hops {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Complex literals: "2", "-1.5", "0.5+2i", "3i", "1e-3-2.5e-1i".
Complex parse_complex(const std::string& text);

class Config {
public:
    static Config parse(std::istream& in, const std::string& source = "<config>");
    static Config parse_string(const std::string& text, const std::string& source = "<config>");
    static Config load(const std::string& path);

    bool has(const std::string& key) const;
    std::vector<std::string> keys() const;

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long get_int(const std::string& key) const;
    long get_int(const std::string& key, long fallback) const;
    std::uint64_t get_uint(const std::string& key) const;
    std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
    Complex get_complex(const std::string& key) const;
    std::vector<double> get_doubles(const std::string& key) const;
    std::vector<long> get_ints(const std::string& key) const;
    std::vector<Complex> get_complexes(const std::string& key) const;

    // Overrides (command-line flags); recorded in the resolved dump.
    void set(const std::string& key, const std::string& value);

    // Every key read so far, including defaults that were used, plus all keys present in the file.
    std::string resolved() const;

    const std::string& source() const { return source_; }
    // Directory of the config file, for resolving relative paths ("" for in-memory configs).
    const std::string& base_dir() const { return base_dir_; }
    std::string resolve_path(const std::string& key) const;

private:
    struct Entry {
        std::string value;
        int line{0};  // 0 for overrides
    };
    const Entry& entry(const std::string& key) const;
    [[noreturn]] void fail(const std::string& key, const std::string& what) const;
    template <typename T>
    T fallback_get(const std::string& key, T fallback, T (Config::*getter)(const std::string&) const) const;

    std::string source_;
    std::string base_dir_;
    std::map<std::string, Entry> entries_;
    mutable std::map<std::string, std::string> defaults_used_;
};

} // namespace hops
