#include "twist/config.hpp"

#include <fstream>
#include <sstream>

#include "twist/errors.hpp"

namespace twist {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::int64_t parse_int(const std::string& where, const std::string& value) {
    try {
        std::size_t used = 0;
        std::int64_t v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(where + ": not an integer: '" + value + "'");
    }
}

std::vector<std::int64_t> parse_int_list(const std::string& where, const std::string& value) {
    std::vector<std::int64_t> out;
    std::istringstream is(value);
    std::string item;
    while (is >> item) out.push_back(parse_int(where, item));
    return out;
}

std::vector<std::string> split_items(const std::string& value) {
    std::vector<std::string> out;
    std::string current;
    for (char c : value) {
        if (c == ';') {
            out.push_back(trim(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    std::string last = trim(current);
    if (!last.empty()) out.push_back(last);
    return out;
}

} // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig config;
    bool group_kind_seen = false;

    std::istringstream is(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ConfigError("line " + std::to_string(line_no) +
                                                   ": malformed section header");
            section = trim(t.substr(1, t.size() - 2));
            static const char* known[] = {"group",   "alphabet",  "genset", "ball",
                                          "deadends", "acx",      "witness", "constants",
                                          "digits",  "run"};
            bool ok = false;
            for (const char* k : known) ok = ok || section == k;
            if (!ok) throw ConfigError("unknown section [" + section + "]");
            continue;
        }
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        std::string where = section + "." + key;

        if (section == "group") {
            if (key == "kind") {
                group_kind_seen = true;
                if (value == "lamplighter") config.group.kind = GroupKind::Lamplighter;
                else if (value == "bs") config.group.kind = GroupKind::BaumslagSolitar;
                else if (value == "matrix") config.group.kind = GroupKind::MatrixModule;
                else throw ConfigError("group.kind must be lamplighter, bs or matrix");
            } else if (key == "q") config.group.q = parse_int(where, value);
            else if (key == "m") config.group.m = parse_int(where, value);
            else if (key == "dim") config.group.dim = static_cast<int>(parse_int(where, value));
            else if (key == "matrix") {
                config.group.matrix.clear();
                for (std::int64_t v : parse_int_list(where, value))
                    config.group.matrix.emplace_back(v);
            } else throw ConfigError("unknown key " + where);
        } else if (section == "alphabet") {
            if (key == "letters") {
                if (value == "auto" || value == "auto-strongly-tlog") {
                    config.alphabet_mode = value;
                } else {
                    config.alphabet_mode = "explicit";
                    config.alphabet_letters = split_items(value);
                    if (config.alphabet_letters.empty())
                        throw ConfigError("alphabet.letters: empty explicit list");
                }
            } else throw ConfigError("unknown key " + where);
        } else if (section == "genset") {
            if (key == "kind") {
                if (value == "unbound") config.genset = GensetKind::Unbound;
                else if (value == "bound") config.genset = GensetKind::Bound;
                else if (value == "standard") config.genset = GensetKind::Standard;
                else if (value == "explicit") config.genset = GensetKind::Explicit;
                else throw ConfigError("genset.kind must be unbound, bound, standard or explicit");
            } else if (key == "file") config.genset_file = value;
            else throw ConfigError("unknown key " + where);
        } else if (section == "ball") {
            if (key == "radius") config.ball_radius = parse_int(where, value);
            else throw ConfigError("unknown key " + where);
        } else if (section == "deadends") {
            if (key == "radius") config.deadends_radius = parse_int(where, value);
            else if (key == "scan_margin") config.deadends_scan_margin = parse_int(where, value);
            else if (key == "depth_cap") config.deadends_depth_cap = parse_int(where, value);
            else throw ConfigError("unknown key " + where);
        } else if (section == "acx") {
            if (key == "radius") config.acx_radius = parse_int(where, value);
            else if (key == "levels") config.acx_levels = parse_int_list(where, value);
            else if (key == "pair_cap") config.acx_pair_cap = parse_int(where, value);
            else throw ConfigError("unknown key " + where);
        } else if (section == "witness") {
            if (key == "family") {
                if (value != "deep" && value != "acx")
                    throw ConfigError("witness.family must be deep or acx");
                config.witness_family = value;
            } else if (key == "letter") config.witness_letter = parse_int(where, value);
            else if (key == "n") config.witness_n = parse_int_list(where, value);
            else if (key == "j") config.witness_j = parse_int(where, value);
            else if (key == "radius") config.witness_radius = parse_int(where, value);
            else if (key == "depth_cap") config.witness_depth_cap = parse_int(where, value);
            else throw ConfigError("unknown key " + where);
        } else if (section == "constants") {
            if (key == "window") {
                std::vector<std::int64_t> w = parse_int_list(where, value);
                if (w.size() != 2 || w[0] > w[1])
                    throw ConfigError("constants.window must be 'lo hi' with lo <= hi");
                config.constants_window = Window{w[0], w[1]};
            } else if (key == "cap") config.constants_cap = parse_int(where, value);
            else if (key == "rep_cap") config.constants_rep_cap = parse_int(where, value);
            else if (key == "pairs_budget") config.constants_pairs_budget = parse_int(where, value);
            else throw ConfigError("unknown key " + where);
        } else if (section == "digits") {
            if (key == "max_bound") config.digits_max_bound = parse_int(where, value);
            else if (key == "budget") config.digits_budget = parse_int(where, value);
            else throw ConfigError("unknown key " + where);
        } else if (section == "run") {
            if (key == "workers") config.workers = parse_int(where, value);
            else if (key == "max_elements")
                config.max_elements = static_cast<std::uint64_t>(parse_int(where, value));
            else if (key == "out") config.out_dir = value;
            else throw ConfigError("unknown key " + where);
        } else {
            throw ConfigError("line " + std::to_string(line_no) + ": key outside any section");
        }
    }

    if (!group_kind_seen) throw ConfigError("group.kind is required");
    switch (config.group.kind) {
    case GroupKind::Lamplighter:
        if (config.group.q < 2) throw ConfigError("group.q must be >= 2");
        break;
    case GroupKind::BaumslagSolitar:
        if (config.group.m < 2) throw ConfigError("group.m must be >= 2");
        break;
    case GroupKind::MatrixModule:
        if (config.group.dim < 1) throw ConfigError("group.dim must be >= 1");
        if (config.group.matrix.size() !=
            static_cast<std::size_t>(config.group.dim) * config.group.dim)
            throw ConfigError("group.matrix must list dim*dim integers");
        break;
    }
    if (config.workers < 1) throw ConfigError("run.workers must be >= 1");
    if (config.genset == GensetKind::Explicit && config.genset_file.empty())
        throw ConfigError("genset.file is required for genset.kind = explicit");
    return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::vector<std::pair<std::string, std::string>> resolved_entries(const ExperimentConfig& c) {
    std::vector<std::pair<std::string, std::string>> out;
    auto add = [&](const std::string& k, const std::string& v) { out.emplace_back(k, v); };
    auto num = [](std::int64_t v) { return std::to_string(v); };
    auto list = [](const std::vector<std::int64_t>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += " ";
            s += std::to_string(v[i]);
        }
        return s;
    };

    switch (c.group.kind) {
    case GroupKind::Lamplighter:
        add("group.kind", "lamplighter");
        add("group.q", num(c.group.q));
        break;
    case GroupKind::BaumslagSolitar:
        add("group.kind", "bs");
        add("group.m", num(c.group.m));
        break;
    case GroupKind::MatrixModule: {
        add("group.kind", "matrix");
        add("group.dim", num(c.group.dim));
        std::string m;
        for (std::size_t i = 0; i < c.group.matrix.size(); ++i) {
            if (i) m += " ";
            m += c.group.matrix[i].str();
        }
        add("group.matrix", m);
        break;
    }
    }
    if (c.alphabet_mode == "explicit") {
        std::string items;
        for (std::size_t i = 0; i < c.alphabet_letters.size(); ++i) {
            if (i) items += "; ";
            items += c.alphabet_letters[i];
        }
        add("alphabet.letters", items);
    } else {
        add("alphabet.letters", c.alphabet_mode);
    }
    switch (c.genset) {
    case GensetKind::Unbound: add("genset.kind", "unbound"); break;
    case GensetKind::Bound: add("genset.kind", "bound"); break;
    case GensetKind::Standard: add("genset.kind", "standard"); break;
    case GensetKind::Explicit:
        add("genset.kind", "explicit");
        add("genset.file", c.genset_file);
        break;
    }
    add("ball.radius", num(c.ball_radius));
    add("deadends.radius", num(c.deadends_radius));
    add("deadends.scan_margin", num(c.deadends_scan_margin));
    add("deadends.depth_cap", num(c.deadends_depth_cap));
    add("acx.radius", num(c.acx_radius));
    add("acx.levels", list(c.acx_levels));
    add("acx.pair_cap", num(c.acx_pair_cap));
    add("witness.family", c.witness_family);
    add("witness.letter", num(c.witness_letter));
    add("witness.n", list(c.witness_n));
    add("witness.j", num(c.witness_j));
    add("witness.radius", num(c.witness_radius));
    add("witness.depth_cap", num(c.witness_depth_cap));
    add("constants.window", num(c.constants_window.lo) + " " + num(c.constants_window.hi));
    add("constants.cap", num(c.constants_cap));
    add("constants.rep_cap", num(c.constants_rep_cap));
    add("constants.pairs_budget", num(c.constants_pairs_budget));
    add("digits.max_bound", num(c.digits_max_bound));
    add("digits.budget", num(c.digits_budget));
    add("run.workers", num(c.workers));
    add("run.max_elements", std::to_string(c.max_elements));
    add("run.out", c.out_dir);
    return out;
}

} // namespace twist
