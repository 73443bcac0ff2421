#include "bgpwave/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "bgpwave/csv.hpp"
#include "bgpwave/errors.hpp"

namespace bgpwave {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

int parse_int(const std::string& s, const std::string& key) {
    try {
        size_t pos = 0;
        const int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw IoError("config: bad integer for " + key + ": '" + s + "'");
    }
}

bool parse_bool(const std::string& s, const std::string& key) {
    std::string v = s;
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw IoError("config: bad boolean for " + key + ": '" + s + "'");
}

}  // namespace

std::vector<double> parse_value_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        const std::string t = trim(cell);
        if (t.empty()) continue;
        out.push_back(parse_double(t));
    }
    if (out.empty()) throw IoError("empty value list: '" + text + "'");
    return out;
}

FileConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config: " + path.string());
    FileConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw IoError("config " + path.string() + ":" + std::to_string(lineno) +
                          ": expected key = value, got '" + t + "'");
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string val = trim(t.substr(eq + 1));
        if (key == "kappa") cfg.kappa = parse_double(val);
        else if (key == "alpha") cfg.alpha = parse_double(val);
        else if (key == "rho") cfg.rho = parse_double(val);
        else if (key == "a") cfg.a = parse_double(val);
        else if (key == "h") cfg.h = parse_double(val);
        else if (key == "tol_profile") cfg.tol_profile = parse_double(val);
        else if (key == "tol_speed") cfg.tol_speed = parse_double(val);
        else if (key == "relaxation") cfg.relaxation = parse_double(val);
        else if (key == "max_inner") cfg.max_inner = parse_int(val, key);
        else if (key == "max_speed_iters") cfg.max_speed_iters = parse_int(val, key);
        else if (key == "max_outer") cfg.max_outer = parse_int(val, key);
        else if (key == "workers") cfg.workers = parse_int(val, key);
        else if (key == "axis") cfg.axis = val;
        else if (key == "values") cfg.values = parse_value_list(val);
        else if (key == "warm_start") cfg.warm_start = parse_bool(val, key);
        else {
            throw IoError("config " + path.string() + ":" + std::to_string(lineno) +
                          ": unknown key '" + key + "'");
        }
    }
    return cfg;
}

}  // namespace bgpwave
