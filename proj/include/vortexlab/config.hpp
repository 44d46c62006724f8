#pragma once

#include <map>
#include <string>
#include <vector>

#include "vortexlab/errors.hpp"

namespace vortexlab::cli {

// Flat dotted-key configuration. The native format is diff-friendly text
// ("section.key = value", '#' comments); a JSON document with the same
// schema is accepted and flattened on load.
class Config {
public:
    static Config parse_file(const std::string& path);
    static Config parse_text(const std::string& text);

    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long get_int(const std::string& key) const;
    long get_int(const std::string& key, long fallback) const;
    std::vector<double> get_list(const std::string& key) const;
    std::vector<double> get_list(const std::string& key,
                                 const std::vector<double>& fallback) const;

    void set(const std::string& key, const std::string& value);

    // canonical text form, keys sorted
    std::string dump() const;

    const std::map<std::string, std::string>& entries() const { return kv_; }

private:
    std::map<std::string, std::string> kv_;
};

} // namespace vortexlab::cli
