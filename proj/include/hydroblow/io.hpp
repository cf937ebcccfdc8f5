// io.hpp
// Plain-text output helpers: lossless number formatting, CSV rows, and flat
// key=value documents.
#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hydroblow::io {

/// 17 significant digits ("%.17g"); "nan"/"inf"/"-inf" for non-finite values.
std::string format_double(double v);

/// Writes one comma-separated row terminated by '\n'.
void write_row(std::ostream& os, const std::vector<double>& values);
void write_header(std::ostream& os, const std::vector<std::string_view>& names);

/// Ordered flat key=value document.
class KeyValueDoc {
public:
    void set(std::string key, std::string value);
    void set(std::string key, double value);
    void set(std::string key, long long value);
    void set(std::string key, int value) { set(std::move(key), static_cast<long long>(value)); }
    void set(std::string key, bool value);

    bool contains(const std::string& key) const;
    const std::string& get(const std::string& key) const;
    double get_double(const std::string& key) const;

    const std::vector<std::pair<std::string, std::string>>& entries() const noexcept {
        return entries_;
    }

    void write(std::ostream& os) const;
    /// Parses "key=value" lines; blank lines and lines starting with '#' are skipped.
    static KeyValueDoc parse(std::istream& is);
    static KeyValueDoc read_file(const std::string& path);
    void write_file(const std::string& path) const;

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace hydroblow::io
