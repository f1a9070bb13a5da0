#include "saldl/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "saldl/error.hpp"

namespace saldl {

namespace {

std::string trim(const std::string& s) {
    const char* ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

}  // namespace

KeyValueFile KeyValueFile::parse(const std::string& text) {
    KeyValueFile kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw InvalidArgument("line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty()) throw InvalidArgument("line " + std::to_string(lineno) + ": empty key");
        if (kv.values_.count(key)) {
            throw InvalidArgument("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        }
        kv.values_[key] = value;
    }
    return kv;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string KeyValueFile::format() const {
    std::string out;
    for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
    return out;
}

void KeyValueFile::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << format();
    if (!out) throw IoError("write failed for " + path.string());
}

const std::string& KeyValueFile::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw InvalidArgument("missing key '" + key + "'");
    return it->second;
}

std::string KeyValueFile::get_or(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

long KeyValueFile::get_int(const std::string& key) const {
    const std::string& s = get(key);
    long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
        throw InvalidArgument("key '" + key + "': not an integer: " + s);
    }
    return v;
}

double KeyValueFile::get_double(const std::string& key) const {
    const std::string& s = get(key);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw InvalidArgument("key '" + key + "': not a number: " + s);
    }
    if (used != s.size()) throw InvalidArgument("key '" + key + "': not a number: " + s);
    return v;
}

void KeyValueFile::set_double(const std::string& key, double value) {
    values_[key] = format_double(value);
}

std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

}  // namespace saldl
