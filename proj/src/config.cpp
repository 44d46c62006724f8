#include "vortexlab/config.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace vortexlab::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

void flatten_json(const nlohmann::json& j, const std::string& prefix,
                  std::map<std::string, std::string>& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten_json(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(),
                         out);
        return;
    }
    if (j.is_array()) {
        std::string list;
        for (const auto& v : j) {
            if (!list.empty())
                list += ", ";
            list += v.is_string() ? v.get<std::string>() : v.dump();
        }
        out[prefix] = list;
        return;
    }
    out[prefix] = j.is_string() ? j.get<std::string>() : j.dump();
}

} // namespace

Config Config::parse_text(const std::string& text) {
    Config cfg;
    const std::string body = trim(text);
    if (!body.empty() && body.front() == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(body);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("config: invalid JSON: ") + e.what());
        }
        flatten_json(j, "", cfg.kv_);
        return cfg;
    }
    std::istringstream in(body);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) +
                              " is not 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty())
            throw ConfigError("config: empty key on line " + std::to_string(lineno));
        cfg.kv_[key] = trim(line.substr(eq + 1));
    }
    return cfg;
}

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str());
}

std::string Config::get_string(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end())
        throw ConfigError("config: missing key '" + key + "'");
    return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key) const {
    const std::string v = get_string(key);
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (trim(v.substr(used)).empty())
            return x;
    } catch (...) {
    }
    throw ConfigError("config: key '" + key + "' is not a number: '" + v + "'");
}

double Config::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

long Config::get_int(const std::string& key) const {
    const double x = get_double(key);
    const long i = static_cast<long>(x);
    if (static_cast<double>(i) != x)
        throw ConfigError("config: key '" + key + "' is not an integer");
    return i;
}

long Config::get_int(const std::string& key, long fallback) const {
    return has(key) ? get_int(key) : fallback;
}

std::vector<double> Config::get_list(const std::string& key) const {
    const std::string v = get_string(key);
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty())
            continue;
        try {
            out.push_back(std::stod(item));
        } catch (...) {
            throw ConfigError("config: key '" + key + "' has a bad list entry '" + item +
                              "'");
        }
    }
    if (out.empty())
        throw ConfigError("config: key '" + key + "' is an empty list");
    return out;
}

std::vector<double> Config::get_list(const std::string& key,
                                     const std::vector<double>& fallback) const {
    return has(key) ? get_list(key) : fallback;
}

void Config::set(const std::string& key, const std::string& value) { kv_[key] = value; }

std::string Config::dump() const {
    std::ostringstream out;
    for (const auto& [k, v] : kv_)
        out << k << " = " << v << "\n";
    return out.str();
}

} // namespace vortexlab::cli
