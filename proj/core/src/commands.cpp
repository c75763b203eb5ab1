#include "twist/commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

#include "twist/cayley.hpp"
#include "twist/witnesses.hpp"

namespace twist {

namespace {

namespace fs = std::filesystem;
using OrderedJson = nlohmann::ordered_json;

constexpr int kFormatVersion = 1;

Alphabet resolve_alphabet(const Group& group, const ExperimentConfig& config) {
    if (config.alphabet_mode == "auto-strongly-tlog" ||
        (config.alphabet_mode == "auto" && group.kind() == GroupKind::MatrixModule)) {
        if (group.kind() != GroupKind::MatrixModule)
            throw ConfigError("alphabet.letters = auto-strongly-tlog needs group.kind = matrix");
        DigitAlphabet digits =
            build_digit_alphabet(group, config.digits_max_bound, config.digits_budget);
        return digits.system.alphabet();
    }
    if (config.alphabet_mode == "auto") {
        std::vector<ModuleElement> letters;
        switch (group.kind()) {
        case GroupKind::Lamplighter:
            for (std::int64_t c = 0; c < group.spec().q; ++c)
                letters.push_back(group.integer_element(c));
            break;
        case GroupKind::BaumslagSolitar: {
            std::int64_t half = group.spec().m / 2;
            for (std::int64_t v = -half; v <= half; ++v)
                letters.push_back(group.integer_element(v));
            break;
        }
        case GroupKind::MatrixModule: break; // handled above
        }
        return make_alphabet(group, std::move(letters), false);
    }
    // explicit letters
    std::vector<ModuleElement> letters;
    for (const std::string& item : config.alphabet_letters) {
        switch (group.kind()) {
        case GroupKind::Lamplighter:
        case GroupKind::BaumslagSolitar:
            try {
                letters.push_back(group.integer_element(BigInt(item)));
            } catch (const std::exception&) {
                throw ConfigError("alphabet.letters: bad integer item '" + item + "'");
            }
            break;
        case GroupKind::MatrixModule: {
            std::istringstream is(item);
            std::vector<BigInt> vec;
            std::string coord;
            while (is >> coord) {
                try {
                    vec.emplace_back(coord);
                } catch (const std::exception&) {
                    throw ConfigError("alphabet.letters: bad coordinate '" + coord + "'");
                }
            }
            if (static_cast<int>(vec.size()) != group.spec().dim)
                throw ConfigError("alphabet.letters: item '" + item + "' has wrong dimension");
            letters.push_back(group.lattice_element(std::move(vec), 0));
            break;
        }
        }
    }
    try {
        return make_alphabet(group, std::move(letters), false);
    } catch (const InvalidInputError& e) {
        throw ConfigError(std::string("alphabet.letters: ") + e.what());
    }
}

GeneratingSet resolve_genset(const Group& group, const Alphabet& alphabet,
                             const ExperimentConfig& config) {
    switch (config.genset) {
    case GensetKind::Unbound: return build_unbound_gens(group, alphabet);
    case GensetKind::Bound: return build_bound_gens(group, alphabet);
    case GensetKind::Standard: return build_standard_gens(group, alphabet);
    case GensetKind::Explicit: {
        std::ifstream in(config.genset_file);
        if (!in) throw ConfigError("cannot open genset.file: " + config.genset_file);
        std::ostringstream buf;
        buf << in.rdbuf();
        return generating_set_from_json(group, buf.str());
    }
    }
    throw Error("unreachable");
}

std::uint32_t resolve_witness_letter(const Alphabet& alphabet, std::int64_t configured) {
    if (configured < 0) {
        for (std::uint32_t i = 0; i < alphabet.size(); ++i)
            if (i != alphabet.zero_index) return i;
        throw ConfigError("alphabet has no nonzero letter for the witness");
    }
    if (configured >= static_cast<std::int64_t>(alphabet.size()))
        throw ConfigError("witness.letter is out of range");
    if (static_cast<std::uint32_t>(configured) == alphabet.zero_index)
        throw ConfigError("witness.letter must be a nonzero letter");
    return static_cast<std::uint32_t>(configured);
}

struct Workspace {
    const ExperimentConfig& config;
    const CmdOptions& options;
    fs::path out;
    std::int64_t workers;
    BuildLimits limits;

    Workspace(const ExperimentConfig& c, const CmdOptions& o) : config(c), options(o) {
        std::string dir = c.out_dir;
        if (const char* env = std::getenv("OUTPUT_DIR"); env && *env) dir = env;
        if (!o.out_dir_override.empty()) dir = o.out_dir_override;
        out = fs::path(dir);
        fs::create_directories(out);
        workers = o.workers_override > 0 ? o.workers_override : c.workers;
        limits.max_elements = c.max_elements;
        if (o.mem_cap_bytes > 0) limits.max_key_bytes = o.mem_cap_bytes;
    }

    std::vector<std::string> csv_preamble() const {
        std::vector<std::string> lines;
        lines.push_back("# format_version = " + std::to_string(kFormatVersion));
        for (const auto& [k, v] : resolved_entries(config)) lines.push_back("# " + k + " = " + v);
        return lines;
    }

    OrderedJson json_config() const {
        OrderedJson obj;
        for (const auto& [k, v] : resolved_entries(config)) obj[k] = v;
        return obj;
    }

    void write_text(const std::string& name, const std::vector<std::string>& lines) const {
        std::ofstream f(out / name, std::ios::binary);
        if (!f) throw Error("cannot write output file " + (out / name).string());
        for (const auto& line : lines) f << line << "\n";
    }

    void write_json(const std::string& name, OrderedJson body) const {
        OrderedJson root;
        root["format_version"] = kFormatVersion;
        root["config"] = json_config();
        for (auto& [key, value] : body.items()) root[key] = std::move(value);
        std::ofstream f(out / name, std::ios::binary);
        if (!f) throw Error("cannot write output file " + (out / name).string());
        f << root.dump(2) << "\n";
    }
};

std::string element_blob(const Group& group, const GroupElement& g) {
    std::vector<std::uint8_t> buf;
    group.pack(g, buf);
    return base64_encode(buf.data(), buf.size());
}

OrderedJson word_json(const GeneralizedTWord& w) {
    OrderedJson arr = OrderedJson::array();
    for (const auto& t : w.terms) arr.push_back({t.power, t.letter, t.coeff});
    return arr;
}

} // namespace

int cmd_ball(const ExperimentConfig& config, const CmdOptions& options) {
    Workspace ws(config, options);
    Group group(config.group);
    Alphabet alphabet = resolve_alphabet(group, config);
    GeneratingSet gens = resolve_genset(group, alphabet, config);
    BallIndex ball = BallIndex::build(group, std::move(gens), config.ball_radius, ws.limits,
                                      static_cast<int>(ws.workers));

    std::vector<std::string> lines = ws.csv_preamble();
    lines.push_back("r,sphere_size,cumulative");
    std::uint64_t cumulative = 0;
    for (std::size_t r = 0; r < ball.sphere_sizes().size(); ++r) {
        cumulative += ball.sphere_sizes()[r];
        lines.push_back(std::to_string(r) + "," + std::to_string(ball.sphere_sizes()[r]) + "," +
                        std::to_string(cumulative));
    }
    ws.write_text("ball.csv", lines);
    return kExitOk;
}

int cmd_deadends(const ExperimentConfig& config, const CmdOptions& options) {
    Workspace ws(config, options);
    Group group(config.group);
    Alphabet alphabet = resolve_alphabet(group, config);
    GeneratingSet gens = resolve_genset(group, alphabet, config);
    BallIndex ball = BallIndex::build(group, std::move(gens), config.deadends_radius, ws.limits,
                                      static_cast<int>(ws.workers));

    const std::int64_t max_dist =
        std::max<std::int64_t>(0, config.deadends_radius - config.deadends_scan_margin);
    std::vector<DeadEnd> dead = find_dead_ends(ball, max_dist, config.deadends_depth_cap);

    std::vector<std::string> list_lines = ws.csv_preamble();
    list_lines.push_back("dist,depth,censored,element");
    for (const DeadEnd& d : dead)
        list_lines.push_back(std::to_string(d.dist) + "," + std::to_string(d.depth.value) + "," +
                             std::to_string(d.depth.censored ? 1 : 0) + "," +
                             element_blob(group, ball.element(d.id)));
    ws.write_text("deadends.csv", list_lines);

    std::vector<std::string> summary_lines = ws.csv_preamble();
    summary_lines.push_back("r,count,max_depth,censored_count");
    for (std::int64_t r = 0; r <= max_dist; ++r) {
        std::int64_t count = 0, max_depth = 0, censored = 0;
        for (const DeadEnd& d : dead)
            if (d.dist == r) {
                ++count;
                max_depth = std::max(max_depth, d.depth.value);
                censored += d.depth.censored ? 1 : 0;
            }
        if (count > 0)
            summary_lines.push_back(std::to_string(r) + "," + std::to_string(count) + "," +
                                    std::to_string(max_depth) + "," + std::to_string(censored));
    }
    ws.write_text("deadends_summary.csv", summary_lines);
    return kExitOk;
}

int cmd_acx(const ExperimentConfig& config, const CmdOptions& options) {
    Workspace ws(config, options);
    Group group(config.group);
    Alphabet alphabet = resolve_alphabet(group, config);
    GeneratingSet gens = resolve_genset(group, alphabet, config);
    BallIndex ball = BallIndex::build(group, std::move(gens), config.acx_radius, ws.limits,
                                      static_cast<int>(ws.workers));

    std::vector<std::string> lines = ws.csv_preamble();
    lines.push_back("r,max_interior_distance,pair_count,unreachable_pairs");
    for (std::int64_t r : config.acx_levels) {
        if (r > config.acx_radius - 1)
            throw ConfigError("acx.levels entry " + std::to_string(r) +
                              " needs acx.radius >= " + std::to_string(r + 1));
        AcxLevelResult res = acx_check(ball, r, config.acx_pair_cap);
        lines.push_back(std::to_string(r) + "," +
                        std::to_string(res.max_finite ? *res.max_finite : -1) + "," +
                        std::to_string(res.pair_count) + "," +
                        std::to_string(res.unreachable_pairs));
    }
    ws.write_text("acx.csv", lines);
    return kExitOk;
}

int cmd_witness(const ExperimentConfig& config, const CmdOptions& options) {
    Workspace ws(config, options);
    Group group(config.group);
    Alphabet alphabet = resolve_alphabet(group, config);
    GeneratingSet gens = resolve_genset(group, alphabet, config);
    std::uint32_t letter = resolve_witness_letter(alphabet, config.witness_letter);

    std::int64_t max_n = 1;
    for (std::int64_t n : config.witness_n) max_n = std::max(max_n, n);
    std::int64_t radius = config.witness_radius > 0 ? config.witness_radius : 4 * max_n + 6;
    BallIndex ball = BallIndex::build(group, std::move(gens), radius, ws.limits,
                                      static_cast<int>(ws.workers));

    OrderedJson reports = OrderedJson::array();
    std::vector<std::string> csv_lines = ws.csv_preamble();
    csv_lines.push_back("family,n,j,measure,value");
    OrderedJson words = OrderedJson::array();

    for (std::int64_t n : config.witness_n) {
        WitnessReport report =
            config.witness_family == "deep"
                ? measure_deep_witness(ball, letter, n, config.witness_depth_cap)
                : measure_acx_witness(ball, letter, n, config.witness_j);
        reports.push_back(OrderedJson::parse(to_json(group, report)));
        for (const auto& [name, value] : report.measured)
            csv_lines.push_back(report.family + "," + std::to_string(report.n) + "," +
                                std::to_string(report.j) + "," + name + "," +
                                std::to_string(value));
        if (options.dump_words && config.witness_family == "deep") {
            GeneralizedTWord w;
            w.terms.push_back({-n, letter, 1});
            w.terms.push_back({n, letter, 1});
            OrderedJson entry;
            entry["n"] = n;
            entry["word"] = word_json(w);
            words.push_back(std::move(entry));
        }
    }

    OrderedJson body;
    body["ball_radius"] = radius;
    body["reports"] = std::move(reports);
    ws.write_json("witness.json", std::move(body));
    ws.write_text("witness.csv", csv_lines);
    if (options.dump_words) {
        OrderedJson body_words;
        body_words["words"] = std::move(words);
        ws.write_json("words.json", std::move(body_words));
    }
    return kExitOk;
}

int cmd_constants(const ExperimentConfig& config, const CmdOptions& options) {
    Workspace ws(config, options);
    Group group(config.group);
    Alphabet alphabet = resolve_alphabet(group, config);

    EstimateParams params;
    params.window = config.constants_window;
    params.cap = config.constants_cap;
    params.rep_cap = config.constants_rep_cap;
    params.pairs_budget = config.constants_pairs_budget;
    ConstantsEstimate est = estimate_constants(group, alphabet, params);

    OrderedJson body;
    body["c_efficiency"] = est.c_efficiency;
    body["c_logarithmic"] = est.c_logarithmic;
    OrderedJson strong = OrderedJson::array();
    for (const StrongLogEntry& e : est.strong) {
        OrderedJson entry;
        entry["m"] = e.m;
        entry["n"] = e.n;
        entry["b"] = e.b;
        entry["c"] = e.c;
        strong.push_back(std::move(entry));
    }
    body["strong"] = std::move(strong);
    body["sample_description"] = est.sample_description;
    ws.write_json("constants.json", std::move(body));

    if (options.dump_words) {
        std::vector<TWord> base =
            enumerate_twords(group, alphabet, params.window, params.cap, 1000);
        OrderedJson words = OrderedJson::array();
        for (const TWord& w : base) words.push_back(word_json(GeneralizedTWord::from_tword(w)));
        OrderedJson body_words;
        body_words["words"] = std::move(words);
        ws.write_json("words.json", std::move(body_words));
    }
    return kExitOk;
}

int cmd_digits(const ExperimentConfig& config, const CmdOptions& options) {
    Workspace ws(config, options);
    Group group(config.group);
    if (group.kind() != GroupKind::MatrixModule)
        throw ConfigError("digits needs group.kind = matrix");

    OrderedJson body;
    try {
        DigitAlphabet digits =
            build_digit_alphabet(group, config.digits_max_bound, config.digits_budget);
        DigitCheckResult check = check_digit_bound(group, digits.system, config.digits_budget);
        body["outcome"] = "ok";
        body["bound"] = digits.bound;
        body["alphabet_size"] = static_cast<std::int64_t>(digits.system.alphabet().size());
        body["expansions_run"] = check.expansions_run;
        body["max_steps_seen"] = check.max_steps_seen;
        if (options.dump_words) {
            OrderedJson words = OrderedJson::array();
            const std::int64_t beta = 3 * digits.bound;
            std::int64_t dumped = 0;
            for (std::int64_t v = -beta; v <= beta && dumped < 200; ++v, ++dumped) {
                std::vector<BigInt> vec(group.spec().dim, 0);
                vec[0] = v;
                ModuleElement k = group.lattice_element(std::move(vec), 0);
                std::optional<TWord> w = digits.system.expand(k, config.digits_budget);
                OrderedJson entry;
                entry["element"] = group.format(k);
                entry["word"] = w ? word_json(GeneralizedTWord::from_tword(*w)) : OrderedJson();
                words.push_back(std::move(entry));
            }
            OrderedJson body_words;
            body_words["words"] = std::move(words);
            ws.write_json("words.json", std::move(body_words));
        }
        ws.write_json("digits.json", std::move(body));
        return kExitOk;
    } catch (const BoundedSearchExhausted& e) {
        body["outcome"] = "exhausted";
        body["detail"] = e.what();
        ws.write_json("digits.json", std::move(body));
        std::cerr << "digits: " << e.what() << "\n";
        return kExitSearchExhausted;
    }
}

int run_command(const std::string& name, const std::string& config_path,
                const CmdOptions& options) {
    try {
        ExperimentConfig config = parse_config_file(config_path);
        if (name == "ball") return cmd_ball(config, options);
        if (name == "deadends") return cmd_deadends(config, options);
        if (name == "acx") return cmd_acx(config, options);
        if (name == "witness") return cmd_witness(config, options);
        if (name == "constants") return cmd_constants(config, options);
        if (name == "digits") return cmd_digits(config, options);
        std::cerr << "unknown command: " << name << "\n";
        return kExitConfigError;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const ResourceLimitError& e) {
        std::cerr << "resource limit: " << e.what() << " (elements stored: " << e.elements_stored
                  << ", last complete radius: " << e.last_complete_radius << ")\n";
        return kExitResourceAbort;
    } catch (const InsufficientRadiusError& e) {
        std::cerr << "insufficient radius: " << e.what()
                  << " (needs at least " << e.required_radius << ")\n";
        return kExitSearchExhausted;
    } catch (const BoundedSearchExhausted& e) {
        std::cerr << "bounded search exhausted: " << e.what() << "\n";
        return kExitSearchExhausted;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
}

} // namespace twist
