// io.cpp

#include "hydroblow/io.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "hydroblow/errors.hpp"

namespace hydroblow::io {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{:.17g}", v);
}

void write_row(std::ostream& os, const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) os << ',';
        os << format_double(values[i]);
    }
    os << '\n';
}

void write_header(std::ostream& os, const std::vector<std::string_view>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) os << ',';
        os << names[i];
    }
    os << '\n';
}

void KeyValueDoc::set(std::string key, std::string value) {
    for (auto& [k, v] : entries_) {
        if (k == key) {
            v = std::move(value);
            return;
        }
    }
    entries_.emplace_back(std::move(key), std::move(value));
}

void KeyValueDoc::set(std::string key, double value) { set(std::move(key), format_double(value)); }

void KeyValueDoc::set(std::string key, long long value) {
    set(std::move(key), std::to_string(value));
}

void KeyValueDoc::set(std::string key, bool value) {
    set(std::move(key), std::string(value ? "true" : "false"));
}

bool KeyValueDoc::contains(const std::string& key) const {
    for (const auto& [k, v] : entries_)
        if (k == key) return true;
    return false;
}

const std::string& KeyValueDoc::get(const std::string& key) const {
    for (const auto& [k, v] : entries_)
        if (k == key) return v;
    throw Error("key not found: " + key);
}

double KeyValueDoc::get_double(const std::string& key) const {
    const std::string& s = get(key);
    if (s == "nan") return std::nan("");
    if (s == "inf") return HUGE_VAL;
    if (s == "-inf") return -HUGE_VAL;
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw Error("not a number for key " + key + ": " + s);
    return v;
}

void KeyValueDoc::write(std::ostream& os) const {
    for (const auto& [k, v] : entries_) os << k << '=' << v << '\n';
}

KeyValueDoc KeyValueDoc::parse(std::istream& is) {
    KeyValueDoc doc;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos || eq == 0)
            throw Error("malformed key=value line " + std::to_string(lineno) + ": " + line);
        doc.set(line.substr(0, eq), line.substr(eq + 1));
    }
    return doc;
}

KeyValueDoc KeyValueDoc::read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    return parse(in);
}

void KeyValueDoc::write_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    write(out);
}

}  // namespace hydroblow::io
