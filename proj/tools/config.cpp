#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <sys/stat.h>

namespace beamlu::cli {

bool MatrixEntry::seeded_family() const {
    if (is_mm) return false;
    switch (family) {
        case MatrixFamily::zielke:
        case MatrixFamily::turing_t:
        case MatrixFamily::tridiag_ttt:
        case MatrixFamily::leading_swap: return false;
        default: return true;
    }
}

MatrixSpec MatrixEntry::to_spec(std::uint64_t seed_value) const {
    switch (family) {
        case MatrixFamily::zielke: return MatrixSpec::zielke(n);
        case MatrixFamily::turing_t: return MatrixSpec::turing_t(n);
        case MatrixFamily::tridiag_ttt: return MatrixSpec::tridiag_ttt(n);
        case MatrixFamily::leading_swap: return MatrixSpec::leading_swap(n);
        case MatrixFamily::diagdom_rows: return MatrixSpec::diagdom_rows(n, delta, seed_value);
        case MatrixFamily::diagdom_cols: return MatrixSpec::diagdom_cols(n, delta, seed_value);
        case MatrixFamily::diagdom_both: return MatrixSpec::diagdom_both(n, delta, seed_value);
        case MatrixFamily::block_diagdom_cols:
            return MatrixSpec::block_diagdom_cols(n, BlockingScheme::uniform(n, block), delta,
                                                  seed_value);
        case MatrixFamily::inverse_block_diagdom_rows:
            return MatrixSpec::inverse_block_diagdom_rows(
                n, BlockingScheme::uniform(n, block), delta, seed_value);
        case MatrixFamily::spd: return MatrixSpec::spd(n, cond, seed_value);
        case MatrixFamily::random_cond: return MatrixSpec::random_cond(n, cond, seed_value);
    }
    throw config_error("matrices: unknown family");
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream ss(s);
    std::vector<std::string> out;
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

double parse_double(const std::string& field, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw config_error("config: bad numeric value for '" + field + "': " + v);
    }
}

std::uint64_t parse_uint(const std::string& field, const std::string& v) {
    try {
        std::size_t pos = 0;
        const unsigned long long u = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return static_cast<std::uint64_t>(u);
    } catch (const std::exception&) {
        throw config_error("config: bad integer value for '" + field + "': " + v);
    }
}

bool parse_bool(const std::string& field, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw config_error("config: bad boolean value for '" + field + "': " + v);
}

std::optional<MatrixFamily> family_from(const std::string& name) {
    static const std::pair<const char*, MatrixFamily> table[] = {
        {"zielke", MatrixFamily::zielke},
        {"turing", MatrixFamily::turing_t},
        {"turing_t", MatrixFamily::turing_t},
        {"tridiag_ttt", MatrixFamily::tridiag_ttt},
        {"diagdom_rows", MatrixFamily::diagdom_rows},
        {"diagdom_cols", MatrixFamily::diagdom_cols},
        {"diagdom_both", MatrixFamily::diagdom_both},
        {"block_diagdom_cols", MatrixFamily::block_diagdom_cols},
        {"inverse_block_diagdom_rows", MatrixFamily::inverse_block_diagdom_rows},
        {"spd", MatrixFamily::spd},
        {"random_cond", MatrixFamily::random_cond},
        {"leading_swap", MatrixFamily::leading_swap},
    };
    for (const auto& [k, f] : table)
        if (name == k) return f;
    return std::nullopt;
}

MatrixEntry parse_matrix_line(const std::string& line) {
    const std::vector<std::string> toks = split_ws(line);
    MatrixEntry e;
    if (toks.empty()) throw config_error("matrices: empty entry");
    if (toks[0] == "mm") {
        e.is_mm = true;
        for (std::size_t i = 1; i < toks.size(); ++i) {
            const auto eq = toks[i].find('=');
            if (eq == std::string::npos || toks[i].substr(0, eq) != "path")
                throw config_error("matrices: mm entries take path=<file>");
            e.mm_path = toks[i].substr(eq + 1);
        }
        if (e.mm_path.empty()) throw config_error("matrices: mm entry missing path=");
        struct stat st {};
        if (stat(e.mm_path.c_str(), &st) != 0)
            throw config_error("matrices: file not found: " + e.mm_path);
        e.label = "mm:" + e.mm_path;
        return e;
    }
    const auto fam = family_from(toks[0]);
    if (!fam) throw config_error("matrices: unknown family '" + toks[0] + "'");
    e.family = *fam;
    for (std::size_t i = 1; i < toks.size(); ++i) {
        const auto eq = toks[i].find('=');
        if (eq == std::string::npos)
            throw config_error("matrices: expected key=value, got '" + toks[i] + "'");
        const std::string key = toks[i].substr(0, eq);
        const std::string val = toks[i].substr(eq + 1);
        if (key == "n") e.n = parse_uint("matrices.n", val);
        else if (key == "delta" || key == "Delta") e.delta = parse_double("matrices.delta", val);
        else if (key == "cond") e.cond = parse_double("matrices.cond", val);
        else if (key == "block") e.block = parse_uint("matrices.block", val);
        else if (key == "seed") {
            e.seed = parse_uint("matrices.seed", val);
            e.has_seed = true;
        } else {
            throw config_error("matrices: unknown key '" + key + "'");
        }
    }
    if (e.n < 2) throw config_error("matrices: n must be at least 2");
    // validate parameters eagerly via the MatrixSpec factories
    e.to_spec(e.has_seed ? e.seed : 1);
    e.label = to_string(e.family);
    std::ostringstream os;
    os << to_string(e.family) << "(n=" << e.n;
    if (e.delta > 0) os << ",delta=" << e.delta;
    if (e.cond > 0) os << ",cond=" << e.cond;
    if (e.block > 0) os << ",block=" << e.block;
    os << ")";
    e.label = os.str();
    return e;
}

BlockingEntry parse_blocking_line(const std::string& line) {
    const std::vector<std::string> toks = split_ws(line);
    BlockingEntry b;
    if (toks.size() == 2 && toks[0] == "uniform") {
        b.uniform = true;
        b.size = parse_uint("blockings.uniform", toks[1]);
        if (b.size == 0) throw config_error("blockings: uniform size must be positive");
        b.label = "uniform" + std::to_string(b.size);
        return b;
    }
    if (toks.size() == 2 && toks[0] == "explicit") {
        b.uniform = false;
        std::stringstream ss(toks[1]);
        std::string item;
        while (std::getline(ss, item, ','))
            b.starts.push_back(parse_uint("blockings.explicit", item));
        if (b.starts.empty()) throw config_error("blockings: explicit list empty");
        b.label = "explicit" + toks[1];
        return b;
    }
    throw config_error("blockings: expected 'uniform <size>' or 'explicit s1,s2,...'");
}

} // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    cfg.seeds.clear();
    std::istringstream in(text);
    std::string raw;
    std::string section;
    while (std::getline(in, raw)) {
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw config_error("config: malformed section: " + line);
            section = line.substr(1, line.size() - 2);
            continue;
        }
        if (section == "matrices") {
            cfg.matrices.push_back(parse_matrix_line(line));
            continue;
        }
        if (section == "blockings") {
            cfg.blockings.push_back(parse_blocking_line(line));
            continue;
        }
        if (section == "methods") {
            if (line != "block_lu_identity" && line != "block_lu_pointwise" && line != "beam")
                throw config_error("methods: unknown method '" + line + "'");
            cfg.methods.push_back(line);
            continue;
        }
        // key = value lines (top level and the beam/refinement/checks sections)
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config: expected key = value in '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (section.empty()) {
            if (key == "output") cfg.output = val;
            else if (key == "format") {
                if (val != "json" && val != "csv" && val != "both")
                    throw config_error("config: format must be json|csv|both");
                cfg.format = val;
            } else if (key == "jobs") cfg.jobs = parse_uint("jobs", val);
            else if (key == "seeds") {
                for (const auto& s : split_ws(val)) cfg.seeds.push_back(parse_uint("seeds", s));
            } else if (key == "trace_spectral") cfg.trace_spectral = parse_bool(key, val);
            else throw config_error("config: unknown key '" + key + "'");
        } else if (section == "beam") {
            if (key == "tau_hats") {
                for (const auto& s : split_ws(val))
                    cfg.tau_hats.push_back(parse_double("beam.tau_hats", s));
            } else if (key == "woodbury") cfg.woodbury = parse_bool("beam.woodbury", val);
            else throw config_error("config: unknown key 'beam." + key + "'");
        } else if (section == "refinement") {
            if (key == "max_iters") cfg.refine_max_iters = parse_uint("refinement.max_iters", val);
            else if (key == "target") cfg.refine_target = parse_double("refinement.target", val);
            else throw config_error("config: unknown key 'refinement." + key + "'");
        } else if (section == "checks") {
            if (key == "suites") {
                for (const auto& s : split_ws(val)) {
                    if (s != "growth" && s != "factor" && s != "psi" && s != "det")
                        throw config_error("checks: unknown suite '" + s + "'");
                    cfg.check_suites.push_back(s);
                }
            } else {
                throw config_error("config: unknown key 'checks." + key + "'");
            }
        } else {
            throw config_error("config: unknown section '" + section + "'");
        }
    }
    if (cfg.seeds.empty()) cfg.seeds = {1};
    if (cfg.matrices.empty()) throw config_error("config: matrices section must be non-empty");
    if (cfg.blockings.empty()) throw config_error("config: blockings section must be non-empty");
    if (cfg.methods.empty()) throw config_error("config: methods section must be non-empty");
    const bool beam_selected =
        std::find(cfg.methods.begin(), cfg.methods.end(), "beam") != cfg.methods.end();
    if (beam_selected && cfg.tau_hats.empty())
        throw config_error("config: beam.tau_hats required when the beam method is selected");
    if (!beam_selected && !cfg.tau_hats.empty())
        throw config_error("config: beam.tau_hats given but the beam method is not selected");
    return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

} // namespace beamlu::cli
