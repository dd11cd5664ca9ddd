#include "runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "beamlu/beam.hpp"
#include "beamlu/errors.hpp"
#include "beamlu/matrix_market.hpp"
#include "beamlu/svd.hpp"

namespace beamlu::cli {

namespace {

using json = nlohmann::json;

struct Task {
    MatrixEntry matrix;
    std::uint64_t seed = 0;
    BlockingEntry blocking;
    std::string method;
    double tau_hat = 0.0;
};

BlockingScheme make_blocking(const BlockingEntry& e, std::size_t n) {
    if (e.uniform) return BlockingScheme::uniform(n, e.size);
    std::vector<std::size_t> starts = e.starts;
    if (starts.back() != n + 1) starts.push_back(n + 1);
    return BlockingScheme(starts, n);
}

bool has_suite(const ExperimentConfig& cfg, const char* name) {
    return std::find(cfg.check_suites.begin(), cfg.check_suites.end(), name) !=
           cfg.check_suites.end();
}

// Composed solve + refinement for the plain block LU methods (the beam
// method uses beam_solve).
void plain_solve(const BlockLUFactors& f, const Matrix& a, const std::vector<double>& b,
                 std::size_t max_iters, double target, RunRecord& rec) {
    const double a2 = sigma_max(a);
    auto apply = [&](const std::vector<double>& rhs) {
        return block_back_sub(f.R, f.blocking, block_forward_sub(f.L, f.blocking, rhs));
    };
    auto rel_resid = [&](const std::vector<double>& x) {
        const double rn = vec_norm2(vecsub(b, matvec(a, x)));
        const double d = a2 * vec_norm2(x);
        return d == 0.0 ? (rn == 0.0 ? 0.0 : std::numeric_limits<double>::infinity()) : rn / d;
    };
    std::vector<double> x = apply(b);
    std::vector<double> resids{rel_resid(x)};
    std::size_t grew = 0;
    while (rec.refine_iters < max_iters && resids.back() > target) {
        const std::vector<double> d = apply(vecsub(b, matvec(a, x)));
        x = vecadd(x, d);
        rec.refine_iters += 1;
        resids.push_back(rel_resid(x));
        grew = resids[resids.size() - 1] > resids[resids.size() - 2] ? grew + 1 : 0;
        if (grew >= 2) {
            rec.diverged = true;
            break;
        }
    }
    rec.residual_initial = resids.front();
    rec.residual_final = resids.back();
}

RunRecord execute_task(const ExperimentConfig& cfg, const Task& t) {
    RunRecord rec;
    rec.matrix = t.matrix.label;
    rec.blocking = t.blocking.label;
    rec.method = t.method;
    rec.tau_hat = t.tau_hat;
    rec.seed = t.seed;

    const auto t0 = std::chrono::steady_clock::now();
    try {
        const Matrix a = t.matrix.is_mm ? read_matrix_market(t.matrix.mm_path)
                                        : generate(t.matrix.to_spec(t.seed));
        rec.n = a.rows();
        const BlockingScheme blocking = make_blocking(t.blocking, a.rows());

        FactorOptions opts;
        opts.trace_norms = {NormKind::max(), NormKind::one(), NormKind::inf(),
                            NormKind::frobenius()};
        if (cfg.trace_spectral) opts.trace_norms.push_back(NormKind::spectral());
        for (const auto& inner : {NormKind::one(), NormKind::inf()}) {
            opts.trace_norms.push_back(NormKind::block_max(inner, blocking));
            opts.trace_norms.push_back(NormKind::block_sum(inner, blocking));
        }

        const std::vector<double> x_true(a.rows(), 1.0);
        const std::vector<double> b = matvec(a, x_true);
        Matrix factored = a; // the matrix the trace belongs to (A~ for beam)
        const GrowthTrace* trace = nullptr;

        BlockLUFactors plain{{}, {}, blocking, DiagFactorizer::identity, {}};
        std::optional<BeamFactorization> beam;
        if (t.method == "beam") {
            beam = beam_factor(a, blocking, t.tau_hat, cfg.woodbury, opts);
            rec.tau_abs = beam->mods.tau;
            rec.mods = beam->mods.count;
            factored = modified_matrix(*beam, a);
            trace = &beam->factors.trace;
            const SolveReport rep =
                beam_solve(*beam, b, {cfg.refine_max_iters, cfg.refine_target}, a);
            rec.residual_initial = rep.residuals.front();
            rec.residual_final = rep.residuals.back();
            rec.refine_iters = rep.iterations;
            rec.woodbury_used = rep.woodbury_used;
            rec.diverged = rep.diverged;
        } else {
            const DiagFactorizer d = t.method == "block_lu_identity"
                                         ? DiagFactorizer::identity
                                         : DiagFactorizer::pointwise_lu;
            plain = factor_block_lu(a, blocking, d, opts);
            trace = &plain.trace;
            plain_solve(plain, a, b, cfg.refine_max_iters, cfg.refine_target, rec);
        }

        for (const auto& kind : opts.trace_norms)
            rec.growth[kind.name()] = growth_factor(*trace, kind);

        const std::string ctx = rec.matrix + "/" + rec.blocking + "/" + rec.method;
        if (has_suite(cfg, "growth")) {
            auto cs = check_growth_bounds(factored, blocking, *trace, ctx);
            rec.checks.insert(rec.checks.end(), cs.begin(), cs.end());
        }
        if (has_suite(cfg, "factor")) {
            auto cs = beam ? check_factor_bounds(*beam, a, ctx)
                           : check_factor_bounds(plain, a, ctx);
            rec.checks.insert(rec.checks.end(), cs.begin(), cs.end());
        }
        if (beam && has_suite(cfg, "psi")) {
            auto r = psi_and_capacitance(*beam, a, ctx);
            rec.checks.insert(rec.checks.end(), r.checks.begin(), r.checks.end());
        }
        if (beam && has_suite(cfg, "det")) {
            auto cs = determinant_bounds(*beam, a, ctx);
            rec.checks.insert(rec.checks.end(), cs.begin(), cs.end());
        }
    } catch (const std::exception& e) {
        // numerical breakdowns and per-run shape/usage problems are both
        // recorded on the run; the batch continues
        rec.numerical_failure = true;
        rec.failure_what = e.what();
    }
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                      .count();
    return rec;
}

json growth_field(double v) {
    if (std::isfinite(v)) return v;
    return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

json check_to_json(const BoundCheck& c) {
    json j;
    j["name"] = c.name;
    j["measured"] = std::isfinite(c.measured) ? json(c.measured) : json("inf");
    j["bound"] = std::isfinite(c.bound) ? json(c.bound) : json("inf");
    j["satisfied"] = c.satisfied;
    j["log_scale"] = c.log_scale;
    j["skipped"] = c.skipped;
    if (!c.note.empty()) j["note"] = c.note;
    if (!c.context.empty()) j["context"] = c.context;
    return j;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += "\"\"";
        else out += ch;
    }
    out += "\"";
    return out;
}

std::string fmt_double(double v) {
    if (std::isnan(v)) return "nan";
    if (!std::isfinite(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

RunOutcome execute(const ExperimentConfig& cfg) {
    std::vector<Task> tasks;
    for (const auto& m : cfg.matrices) {
        std::vector<std::uint64_t> seeds;
        if (m.seeded_family() && !m.has_seed) seeds = cfg.seeds;
        else seeds = {m.has_seed ? m.seed : 0};
        for (std::uint64_t s : seeds)
            for (const auto& bl : cfg.blockings)
                for (const auto& method : cfg.methods) {
                    if (method == "beam") {
                        for (double th : cfg.tau_hats)
                            tasks.push_back({m, s, bl, method, th});
                    } else {
                        tasks.push_back({m, s, bl, method, 0.0});
                    }
                }
    }

    RunOutcome out;
    out.records.resize(tasks.size());
    const std::size_t jobs = std::max<std::size_t>(1, cfg.jobs);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) break;
            out.records[i] = execute_task(cfg, tasks[i]);
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::future<void>> pool;
        for (std::size_t j = 0; j < jobs; ++j)
            pool.push_back(std::async(std::launch::async, worker));
        for (auto& f : pool) f.get();
    }

    std::stable_sort(out.records.begin(), out.records.end(),
                     [](const RunRecord& a, const RunRecord& b) {
                         return std::tie(a.matrix, a.blocking, a.method, a.tau_hat, a.seed) <
                                std::tie(b.matrix, b.blocking, b.method, b.tau_hat, b.seed);
                     });
    for (const auto& r : out.records) {
        if (r.numerical_failure) out.any_numerical_failure = true;
        for (const auto& c : r.checks)
            if (!c.skipped && !c.satisfied) out.any_check_failed = true;
    }
    return out;
}

std::string json_report(const ExperimentConfig& cfg, const RunOutcome& out) {
    json root;
    root["schema_version"] = kSchemaVersion;
    json jc;
    jc["format"] = cfg.format;
    jc["output"] = cfg.output;
    jc["seeds"] = cfg.seeds;
    jc["woodbury"] = cfg.woodbury;
    jc["refinement"] = {{"max_iters", cfg.refine_max_iters}, {"target", cfg.refine_target}};
    jc["methods"] = cfg.methods;
    jc["tau_hats"] = cfg.tau_hats;
    jc["check_suites"] = cfg.check_suites;
    jc["trace_spectral"] = cfg.trace_spectral;
    {
        std::vector<std::string> ms;
        for (const auto& m : cfg.matrices) ms.push_back(m.label);
        jc["matrices"] = ms;
        std::vector<std::string> bs;
        for (const auto& b : cfg.blockings) bs.push_back(b.label);
        jc["blockings"] = bs;
    }
    root["config"] = jc;

    json runs = json::array();
    for (const auto& r : out.records) {
        json j;
        j["matrix"] = r.matrix;
        j["blocking"] = r.blocking;
        j["method"] = r.method;
        j["tau_hat"] = r.tau_hat;
        j["tau"] = r.tau_abs;
        j["seed"] = r.seed;
        j["n"] = r.n;
        j["mods"] = r.mods;
        json g;
        for (const auto& [name, v] : r.growth) {
            g[name] = growth_field(v);
            g[name + "_log10"] = growth_field(std::log10(v));
        }
        j["growth"] = g;
        j["residual_initial"] = r.residual_initial;
        j["residual_final"] = r.residual_final;
        j["refine_iters"] = r.refine_iters;
        j["woodbury_used"] = r.woodbury_used;
        j["diverged"] = r.diverged;
        j["numerical_failure"] = r.numerical_failure;
        if (r.numerical_failure) j["failure"] = r.failure_what;
        json cs = json::array();
        for (const auto& c : r.checks) cs.push_back(check_to_json(c));
        j["checks"] = cs;
        j["wall_ms"] = r.wall_ms;
        runs.push_back(j);
    }
    root["runs"] = runs;
    return root.dump(2) + "\n";
}

std::string csv_report(const RunOutcome& out) {
    std::ostringstream os;
    os << "matrix,blocking,method,tau_hat,tau,seed,n,mods,growth_max,growth_max_log10,"
          "growth_one,growth_inf,growth_fro,growth_spectral,residual_initial,residual_final,"
          "refine_iters,woodbury_used,diverged,checks_total,checks_failed,numerical_failure,"
          "wall_ms\n";
    for (const auto& r : out.records) {
        auto gv = [&](const char* k) {
            const auto it = r.growth.find(k);
            return it == r.growth.end() ? std::string("") : fmt_double(it->second);
        };
        std::size_t failed = 0, total = 0;
        for (const auto& c : r.checks) {
            if (c.skipped) continue;
            ++total;
            if (!c.satisfied) ++failed;
        }
        const auto gmax = r.growth.find("max");
        os << csv_quote(r.matrix) << ',' << csv_quote(r.blocking) << ',' << r.method << ','
           << fmt_double(r.tau_hat) << ',' << fmt_double(r.tau_abs) << ',' << r.seed << ','
           << r.n << ',' << r.mods << ',' << gv("max") << ','
           << (gmax == r.growth.end() ? "" : fmt_double(std::log10(gmax->second))) << ','
           << gv("one") << ',' << gv("inf") << ',' << gv("fro") << ',' << gv("spectral") << ','
           << fmt_double(r.residual_initial) << ',' << fmt_double(r.residual_final) << ','
           << r.refine_iters << ',' << (r.woodbury_used ? "true" : "false") << ','
           << (r.diverged ? "true" : "false") << ',' << total << ',' << failed << ','
           << (r.numerical_failure ? "true" : "false") << ',' << fmt_double(r.wall_ms) << "\n";
    }
    return os.str();
}

int run_command(const std::string& config_path, const std::string& output_override,
                const std::string& format_override, std::size_t jobs_override, bool quiet) {
    ExperimentConfig cfg;
    try {
        cfg = parse_config(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    if (!output_override.empty()) cfg.output = output_override;
    if (!format_override.empty()) cfg.format = format_override;
    if (jobs_override > 0) cfg.jobs = jobs_override;

    const RunOutcome out = execute(cfg);

    std::error_code ec;
    std::filesystem::create_directories(cfg.output, ec);
    if (ec) {
        std::cerr << "error: cannot create output directory '" << cfg.output << "'\n";
        return 1;
    }
    if (cfg.format == "json" || cfg.format == "both") {
        std::ofstream js(cfg.output + "/report.json");
        js << json_report(cfg, out);
        if (!js) {
            std::cerr << "error: cannot write report.json\n";
            return 1;
        }
    }
    if (cfg.format == "csv" || cfg.format == "both") {
        std::ofstream cs(cfg.output + "/report.csv");
        cs << csv_report(out);
        if (!cs) {
            std::cerr << "error: cannot write report.csv\n";
            return 1;
        }
    }
    if (!quiet) {
        std::size_t failed_checks = 0, total_checks = 0;
        for (const auto& r : out.records)
            for (const auto& c : r.checks) {
                if (c.skipped) continue;
                ++total_checks;
                if (!c.satisfied) ++failed_checks;
            }
        std::cout << out.records.size() << " runs, " << total_checks << " checks, "
                  << failed_checks << " failed"
                  << (out.any_numerical_failure ? ", numerical failures present" : "") << "\n";
    }
    return (out.any_check_failed || out.any_numerical_failure) ? 2 : 0;
}

} // namespace beamlu::cli
