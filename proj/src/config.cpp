#include "ezbsde/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ezbsde {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

struct IniEntry {
    std::string value;
    int line = 0;
    bool used = false;
};

struct IniFile {
    std::string name;
    // section -> key -> entry; std::map keeps error listings stable
    std::map<std::string, std::map<std::string, IniEntry>> sections;

    [[noreturn]] void fail(int line, const std::string& msg) const {
        throw std::runtime_error(name + ":" + std::to_string(line) + ": " +
                                 msg);
    }
};

IniFile parse_ini(const std::string& text, const std::string& name) {
    IniFile ini;
    ini.name = name;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t cut = line.find_first_of("#;");
        if (cut != std::string::npos) line.erase(cut);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                ini.fail(lineno, "unterminated section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) ini.fail(lineno, "empty section name");
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            ini.fail(lineno, "expected 'key = value', got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) ini.fail(lineno, "empty key");
        if (section.empty())
            ini.fail(lineno, "key '" + key + "' outside any section");
        auto& sec = ini.sections[section];
        auto it = sec.find(key);
        if (it != sec.end())
            ini.fail(lineno, "duplicate key '" + section + "." + key +
                                 "' (first set on line " +
                                 std::to_string(it->second.line) + ")");
        sec[key] = IniEntry{value, lineno, false};
    }
    return ini;
}

double to_double(const IniFile& ini, const std::string& sec,
                 const std::string& key, const IniEntry& e) {
    const char* s = e.value.c_str();
    char* end = nullptr;
    double v = std::strtod(s, &end);
    if (end == s || *end != '\0')
        ini.fail(e.line, "value of " + sec + "." + key + " is not a number: '" +
                             e.value + "'");
    return v;
}

// typed accessors; mark entries used so leftovers can be reported as typos
class SectionReader {
public:
    SectionReader(IniFile& ini, const std::string& sec) : ini_(ini), sec_(sec) {}

    bool has(const std::string& key) {
        auto s = ini_.sections.find(sec_);
        return s != ini_.sections.end() && s->second.count(key) > 0;
    }
    double num(const std::string& key, double fallback) {
        IniEntry* e = take(key);
        return e ? to_double(ini_, sec_, key, *e) : fallback;
    }
    long long integer(const std::string& key, long long fallback) {
        IniEntry* e = take(key);
        if (!e) return fallback;
        double v = to_double(ini_, sec_, key, *e);
        long long n = static_cast<long long>(v);
        if (static_cast<double>(n) != v)
            ini_.fail(e->line, sec_ + "." + key + " must be an integer, got '" +
                                   e->value + "'");
        return n;
    }
    std::string str(const std::string& key, const std::string& fallback) {
        IniEntry* e = take(key);
        return e ? e->value : fallback;
    }
    int line(const std::string& key) {
        auto s = ini_.sections.find(sec_);
        if (s == ini_.sections.end()) return 0;
        auto it = s->second.find(key);
        return it == s->second.end() ? 0 : it->second.line;
    }

private:
    IniEntry* take(const std::string& key) {
        auto s = ini_.sections.find(sec_);
        if (s == ini_.sections.end()) return nullptr;
        auto it = s->second.find(key);
        if (it == s->second.end()) return nullptr;
        it->second.used = true;
        return &it->second;
    }
    IniFile& ini_;
    std::string sec_;
};

}  // namespace

ConstraintSet parse_constraint(const std::string& text) {
    std::string clean;
    clean.reserve(text.size());
    for (char c : text) clean.push_back(c == '[' || c == ']' ? ' ' : c);
    std::istringstream in(clean);
    std::string word;
    if (!(in >> word))
        throw std::runtime_error("empty constraint specification");

    std::vector<double> nums;
    double v;
    while (in >> v) nums.push_back(v);
    std::string extra;
    if (in.clear(), in >> extra)
        throw std::runtime_error("constraint '" + text +
                                 "': trailing junk '" + extra + "'");

    if (word == "full") {
        if (!nums.empty())
            throw std::runtime_error("constraint 'full' takes no numbers");
        return make_full_space(1);
    }
    if (word == "interval") {
        if (nums.size() != 2)
            throw std::runtime_error(
                "constraint 'interval' needs exactly two numbers (lo hi)");
        return make_interval(nums[0], nums[1]);
    }
    if (word == "union") {
        if (nums.empty() || nums.size() % 2 != 0)
            throw std::runtime_error(
                "constraint 'union' needs pairs: union [lo hi] [lo hi] ...");
        std::vector<std::array<double, 2>> ivs;
        for (size_t i = 0; i < nums.size(); i += 2)
            ivs.push_back({nums[i], nums[i + 1]});
        return make_union_of_intervals(ivs);
    }
    if (word == "finite") {
        if (nums.empty())
            throw std::runtime_error(
                "constraint 'finite' needs at least one point");
        return make_finite_set(nums, 1);
    }
    throw std::runtime_error("unknown constraint kind '" + word +
                             "' (expected full/interval/union/finite)");
}

ExperimentConfig load_config_text(const std::string& text,
                                  const std::string& name) {
    IniFile ini = parse_ini(text, name);

    static const char* known_sections[] = {"model",       "preferences",
                                           "constraints", "grid",
                                           "mc",          "run"};
    for (const auto& [sec, kv] : ini.sections) {
        bool ok = false;
        for (const char* k : known_sections) ok = ok || sec == k;
        if (!ok && !kv.empty())
            ini.fail(kv.begin()->second.line, "unknown section [" + sec + "]");
    }

    ExperimentConfig cfg;
    cfg.lambda = make_full_space(1);

    SectionReader model(ini, "model");
    std::string kind = model.str("kind", "black_scholes");
    double default_T = 0.0;
    if (kind == "black_scholes") {
        cfg.model = make_black_scholes(model.num("r", 0.03),
                                       model.num("mu", 0.05),
                                       model.num("sigma", 0.17));
        default_T = 30.0;
    } else if (kind == "linear_diffusion") {
        cfg.model = make_linear_diffusion(
            model.num("b", 0.0226), model.num("a", 0.0189),
            model.num("sigma", 0.0436), model.num("r0", 0.0014),
            model.num("r1", 1.0), model.num("lambda0", 0.05),
            model.num("lambda1", 1.0), model.num("rho", -0.935));
        default_T = 1.0;
    } else if (kind == "heston") {
        cfg.model = make_heston(model.num("b", 5.0), model.num("l", 0.0225),
                                model.num("a", 0.25), model.num("r0", 0.05),
                                model.num("r1", 0.0), model.num("sigma", 1.0),
                                model.num("lambda", 0.47),
                                model.num("rho", -0.5));
        default_T = 10.0;
    } else {
        int ln = model.line("kind");
        ini.fail(ln ? ln : 1, "unknown model.kind '" + kind +
                                  "' (black_scholes/linear_diffusion/heston)");
    }
    if (model.has("x0")) cfg.model.x0 = model.num("x0", 0.0);

    SectionReader prefs(ini, "preferences");
    const double delta = prefs.num("delta", 0.08);
    const double gamma = prefs.num("gamma", 2.0);
    const double psi = prefs.num("psi", 1.2);
    if (!(delta > 0))
        ini.fail(prefs.line("delta") ? prefs.line("delta") : 1,
                 "preferences.delta must be > 0");
    if (!(gamma > 1))
        ini.fail(prefs.line("gamma") ? prefs.line("gamma") : 1,
                 "preferences.gamma must be > 1");
    if (!(psi > 1))
        ini.fail(prefs.line("psi") ? prefs.line("psi") : 1,
                 "preferences.psi must be > 1");
    cfg.prefs = make_preferences(delta, gamma, psi);

    SectionReader cons(ini, "constraints");
    if (cons.has("pi")) {
        int ln = cons.line("pi");
        try {
            cfg.lambda = parse_constraint(cons.str("pi", ""));
        } catch (const std::exception& e) {
            ini.fail(ln, e.what());
        }
    }
    if (cons.has("chat")) {
        int ln = cons.line("chat");
        try {
            cfg.chat_set = parse_constraint(cons.str("chat", ""));
        } catch (const std::exception& e) {
            ini.fail(ln, e.what());
        }
    }

    SectionReader grid(ini, "grid");
    cfg.T = grid.num("T", default_T);
    cfg.N = static_cast<int>(grid.integer("N", 100));
    if (cfg.T <= 0) ini.fail(grid.line("T") ? grid.line("T") : 1,
                             "grid.T must be > 0");
    if (cfg.N < 1) ini.fail(grid.line("N") ? grid.line("N") : 1,
                            "grid.N must be >= 1");

    SectionReader mc(ini, "mc");
    cfg.M = static_cast<int>(mc.integer("M", 100000));
    long long seed = mc.integer("seed", 42);
    if (seed < 0) ini.fail(mc.line("seed"), "mc.seed must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(seed);
    cfg.degree = static_cast<int>(mc.integer("degree", 3));
    cfg.kz = mc.num("kz", 0.0);
    if (cfg.M < 2) ini.fail(mc.line("M") ? mc.line("M") : 1,
                            "mc.M must be >= 2");
    if (cfg.degree < 0 || cfg.degree > 12)
        ini.fail(mc.line("degree"), "mc.degree out of range [0, 12]");
    if (cfg.kz < 0) ini.fail(mc.line("kz"), "mc.kz must be >= 0 (0 = auto)");

    SectionReader run(ini, "run");
    cfg.omega = run.num("omega", 1.0);
    cfg.out_dir = run.str("out", "out");
    if (cfg.omega <= 0)
        ini.fail(run.line("omega"), "run.omega must be > 0");

    for (const auto& [sec, kv] : ini.sections)
        for (const auto& [key, e] : kv)
            if (!e.used)
                ini.fail(e.line, "unknown key '" + sec + "." + key + "'");

    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_config_text(buf.str(), path);
}

}  // namespace ezbsde
