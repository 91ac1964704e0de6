#include "rsde/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "rsde/csv.hpp"

namespace rsde {

namespace {

std::string trim(std::string_view sv) {
    std::size_t b = 0, e = sv.size();
    while (b < e && std::isspace(static_cast<unsigned char>(sv[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(sv[e - 1]))) --e;
    return std::string(sv.substr(b, e - b));
}

// strip an unquoted trailing comment
std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

ConfigValue parse_scalar(const std::string& tok, const std::string& where) {
    if (tok.empty()) throw ConfigError("empty value at " + where);
    if (tok == "true") return true;
    if (tok == "false") return false;
    if (tok.front() == '"') {
        if (tok.size() < 2 || tok.back() != '"') throw ConfigError("unterminated string at " + where);
        return tok.substr(1, tok.size() - 2);
    }
    const bool looks_float = tok.find_first_of(".eE") != std::string::npos ||
                             tok == "inf" || tok == "-inf" || tok == "nan";
    if (!looks_float) {
        std::int64_t iv = 0;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), iv);
        if (ec == std::errc() && p == tok.data() + tok.size()) return iv;
    }
    double dv = 0.0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), dv);
    if (ec == std::errc() && p == tok.data() + tok.size()) return dv;
    throw ConfigError("cannot parse value '" + tok + "' at " + where);
}

ConfigValue parse_value(const std::string& raw, const std::string& where) {
    if (!raw.empty() && raw.front() == '[') {
        if (raw.back() != ']') throw ConfigError("unterminated array at " + where);
        const std::string inner = trim(std::string_view(raw).substr(1, raw.size() - 2));
        std::vector<double> nums;
        std::vector<std::string> strs;
        bool any_string = false;
        if (!inner.empty()) {
            std::size_t start = 0;
            bool in_string = false;
            std::vector<std::string> toks;
            for (std::size_t i = 0; i <= inner.size(); ++i) {
                if (i < inner.size() && inner[i] == '"') in_string = !in_string;
                if (i == inner.size() || (inner[i] == ',' && !in_string)) {
                    toks.push_back(trim(std::string_view(inner).substr(start, i - start)));
                    start = i + 1;
                }
            }
            for (const auto& t : toks) {
                ConfigValue v = parse_scalar(t, where);
                if (std::holds_alternative<std::string>(v)) {
                    any_string = true;
                    strs.push_back(std::get<std::string>(v));
                } else if (std::holds_alternative<std::int64_t>(v)) {
                    nums.push_back(static_cast<double>(std::get<std::int64_t>(v)));
                } else if (std::holds_alternative<double>(v)) {
                    nums.push_back(std::get<double>(v));
                } else {
                    throw ConfigError("unsupported array element at " + where);
                }
            }
        }
        if (any_string) {
            if (!nums.empty()) throw ConfigError("mixed array types at " + where);
            return strs;
        }
        return nums;
    }
    return parse_scalar(raw, where);
}

} // namespace

ConfigFile ConfigFile::parse_string(const std::string& text, const std::string& origin) {
    ConfigFile cfg;
    std::istringstream is(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string where = origin + ":" + std::to_string(lineno);
        std::string body = trim(strip_comment(line));
        if (body.empty()) continue;
        if (body.front() == '[') {
            if (body.back() != ']') throw ConfigError("bad section header at " + where);
            section = trim(std::string_view(body).substr(1, body.size() - 2));
            if (section.empty()) throw ConfigError("empty section name at " + where);
            cfg.sections_[section]; // create even if empty
            continue;
        }
        const std::size_t eq = body.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key = value at " + where);
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string val = trim(std::string_view(body).substr(eq + 1));
        if (key.empty()) throw ConfigError("empty key at " + where);
        if (section.empty()) throw ConfigError("key outside any [section] at " + where);
        cfg.sections_[section][key] = parse_value(val, where);
    }
    return cfg;
}

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_string(ss.str(), path);
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

std::vector<std::string> ConfigFile::keys(const std::string& section) const {
    std::vector<std::string> out;
    const auto s = sections_.find(section);
    if (s == sections_.end()) return out;
    for (const auto& [k, v] : s->second) out.push_back(k);
    return out;
}

namespace {

[[noreturn]] void missing(const std::string& section, const std::string& key) {
    throw ConfigError("missing config key [" + section + "] " + key);
}

} // namespace

const ConfigValue* find_value(const std::map<std::string, std::map<std::string, ConfigValue>>& s,
                              const std::string& section, const std::string& key) {
    const auto it = s.find(section);
    if (it == s.end()) return nullptr;
    const auto jt = it->second.find(key);
    if (jt == it->second.end()) return nullptr;
    return &jt->second;
}

#define RSDE_GETTER(NAME, TYPE, KIND)                                                          \
    TYPE ConfigFile::NAME(const std::string& section, const std::string& key) const {          \
        const ConfigValue* v = find_value(sections_, section, key);                            \
        if (!v) missing(section, key);                                                         \
        if (!std::holds_alternative<TYPE>(*v))                                                 \
            throw ConfigError("config key [" + section + "] " + key + " must be a " KIND);     \
        return std::get<TYPE>(*v);                                                             \
    }

RSDE_GETTER(get_bool, bool, "boolean")
RSDE_GETTER(get_string, std::string, "string")
RSDE_GETTER(get_double_array, std::vector<double>, "number array")
#undef RSDE_GETTER

std::int64_t ConfigFile::get_int(const std::string& section, const std::string& key) const {
    const ConfigValue* v = find_value(sections_, section, key);
    if (!v) missing(section, key);
    if (std::holds_alternative<std::int64_t>(*v)) return std::get<std::int64_t>(*v);
    throw ConfigError("config key [" + section + "] " + key + " must be an integer");
}

double ConfigFile::get_double(const std::string& section, const std::string& key) const {
    const ConfigValue* v = find_value(sections_, section, key);
    if (!v) missing(section, key);
    if (std::holds_alternative<double>(*v)) return std::get<double>(*v);
    if (std::holds_alternative<std::int64_t>(*v)) {
        return static_cast<double>(std::get<std::int64_t>(*v));
    }
    throw ConfigError("config key [" + section + "] " + key + " must be a number");
}

bool ConfigFile::get_bool_or(const std::string& s, const std::string& k, bool f) const {
    return has(s, k) ? get_bool(s, k) : f;
}
std::int64_t ConfigFile::get_int_or(const std::string& s, const std::string& k, std::int64_t f) const {
    return has(s, k) ? get_int(s, k) : f;
}
double ConfigFile::get_double_or(const std::string& s, const std::string& k, double f) const {
    return has(s, k) ? get_double(s, k) : f;
}
std::string ConfigFile::get_string_or(const std::string& s, const std::string& k,
                                      std::string f) const {
    return has(s, k) ? get_string(s, k) : f;
}

std::string ConfigFile::canonical() const {
    std::ostringstream os;
    for (const auto& [section, kv] : sections_) {
        os << "[" << section << "]\n";
        for (const auto& [key, value] : kv) {
            os << key << "=";
            std::visit(
                [&os](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, bool>) {
                        os << (v ? "true" : "false");
                    } else if constexpr (std::is_same_v<T, std::int64_t>) {
                        os << v;
                    } else if constexpr (std::is_same_v<T, double>) {
                        os << format_double(v);
                    } else if constexpr (std::is_same_v<T, std::string>) {
                        os << '"' << v << '"';
                    } else if constexpr (std::is_same_v<T, std::vector<double>>) {
                        os << '[';
                        for (std::size_t i = 0; i < v.size(); ++i) {
                            if (i) os << ',';
                            os << format_double(v[i]);
                        }
                        os << ']';
                    } else {
                        os << '[';
                        for (std::size_t i = 0; i < v.size(); ++i) {
                            if (i) os << ',';
                            os << '"' << v[i] << '"';
                        }
                        os << ']';
                    }
                },
                value);
            os << "\n";
        }
    }
    return os.str();
}

std::string config_hash(const ConfigFile& cfg) {
    const std::string s = cfg.canonical();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

DomainShape build_domain(const ConfigFile& cfg) {
    const std::string kind = cfg.get_string("domain", "kind");
    if (kind == "halfline") return DomainShape::half_line(cfg.get_double_or("domain", "origin", 0.0));
    if (kind == "interval") {
        return DomainShape::interval(cfg.get_double("domain", "a"), cfg.get_double("domain", "b"));
    }
    if (kind == "box") {
        return DomainShape::box(cfg.get_double_array("domain", "lo"),
                                cfg.get_double_array("domain", "hi"));
    }
    if (kind == "ball") {
        return DomainShape::ball(cfg.get_double_array("domain", "center"),
                                 cfg.get_double("domain", "radius"));
    }
    if (kind == "polytope") {
        const std::vector<double> flat = cfg.get_double_array("domain", "normals");
        const Vec offsets = cfg.get_double_array("domain", "offsets");
        const Vec witness = cfg.get_double_array("domain", "witness");
        if (offsets.empty() || flat.size() % offsets.size() != 0) {
            throw ConfigError("[domain] normals must hold |offsets| x dim entries");
        }
        const std::size_t dim = flat.size() / offsets.size();
        std::vector<Vec> normals(offsets.size(), Vec(dim));
        for (std::size_t i = 0; i < offsets.size(); ++i) {
            for (std::size_t j = 0; j < dim; ++j) normals[i][j] = flat[i * dim + j];
        }
        return DomainShape::polytope(std::move(normals), offsets, witness);
    }
    throw ConfigError("unknown domain kind '" + kind + "'");
}

namespace {

Interpolant interp_from(const ConfigFile& cfg, const std::string& key_name,
                        const std::string& key_coeffs, const std::string& fallback) {
    if (cfg.has("driver", key_coeffs)) {
        return Interpolant::from_coeffs(cfg.get_double_array("driver", key_coeffs));
    }
    return Interpolant::from_name(cfg.get_string_or("driver", key_name, fallback));
}

} // namespace

ApproxDriver build_driver(const ConfigFile& cfg, std::optional<double> delta_override) {
    const std::string kind = cfg.get_string("driver", "kind");
    const double delta =
        delta_override ? *delta_override : cfg.get_double("driver", "delta");
    if (kind == "piecewise_linear") {
        return ApproxDriver::piecewise_linear(interp_from(cfg, "f", "f_coeffs", "linear"), delta);
    }
    if (kind == "mollifier") {
        Kernel k = cfg.has("driver", "rho_coeffs")
                       ? Kernel::from_coeffs(cfg.get_double_array("driver", "rho_coeffs"))
                       : Kernel::from_name(cfg.get_string_or("driver", "rho", "bump"));
        const auto qp = static_cast<int>(cfg.get_int_or("driver", "quad_points", 32));
        return ApproxDriver::mollifier(std::move(k), delta, qp);
    }
    if (kind == "mcshane") {
        return ApproxDriver::mcshane(interp_from(cfg, "f1", "f1_coeffs", "linear"),
                                     interp_from(cfg, "f2", "f2_coeffs", "quadratic"), delta);
    }
    throw ConfigError("unknown driver kind '" + kind + "'");
}

Coefficients build_coefficients(const ConfigFile& cfg) {
    const std::string preset = cfg.get_string("coefficients", "preset");
    const auto r = static_cast<int>(cfg.get_int_or("coefficients", "r", 1));
    std::vector<double> params;
    if (cfg.has("coefficients", "params")) params = cfg.get_double_array("coefficients", "params");
    return coefficients_preset(preset, r, params);
}

StudyConfig build_study(const ConfigFile& cfg) {
    StudyConfig sc;
    sc.name = cfg.get_string_or("study", "name", "study");
    sc.domain = build_domain(cfg);
    sc.coeffs = build_coefficients(cfg);
    sc.horizon = cfg.get_double_or("study", "T", 1.0);
    sc.delta_schedule = cfg.get_double_array("study", "delta_schedule");
    sc.q = cfg.get_double_or("study", "q", 1.0 / 6.0);
    if (cfg.has("study", "p_list")) sc.p_list = cfg.get_double_array("study", "p_list");
    sc.n_paths = cfg.get_int_or("study", "n_paths", 2000);
    sc.base_seed = static_cast<std::uint64_t>(cfg.get_int_or("study", "base_seed", 0));
    sc.n_fine_ref = cfg.get_int_or("study", "n_fine_ref", 4096);
    sc.zero_correction = cfg.get_bool_or("study", "zero_correction", false);
    sc.n_corr_samples = cfg.get_int_or("study", "n_corr_samples", 2000);
    sc.n_bias_paths = cfg.get_int_or("study", "n_bias_paths", 100);
    if (cfg.has("study", "x0")) {
        sc.x0 = cfg.get_double_array("study", "x0");
    } else {
        sc.x0 = Vec(static_cast<std::size_t>(sc.coeffs.d), 0.0);
    }
    // driver delta comes from the schedule; the [driver] block may omit it
    const double d0 = sc.delta_schedule.empty() ? 0.0625 : sc.delta_schedule.front();
    sc.driver_proto = build_driver(cfg, cfg.has("driver", "delta")
                                            ? std::optional<double>{}
                                            : std::optional<double>{d0});
    sc.validate();
    return sc;
}

} // namespace rsde
