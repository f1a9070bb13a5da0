#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace saldl {

/// Line-based `key = value` text. Blank lines and lines starting with '#'
/// are ignored; keys are unique.
class KeyValueFile {
public:
    static KeyValueFile parse(const std::string& text);
    static KeyValueFile load(const std::filesystem::path& path);

    std::string format() const;
    void save(const std::filesystem::path& path) const;

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    const std::string& get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
    long get_int(const std::string& key) const;
    double get_double(const std::string& key) const;

    void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
    void set(const std::string& key, long value) { values_[key] = std::to_string(value); }
    void set_double(const std::string& key, double value);

    const std::map<std::string, std::string>& values() const noexcept { return values_; }

private:
    std::map<std::string, std::string> values_;
};

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace saldl
