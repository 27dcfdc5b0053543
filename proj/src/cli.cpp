#include "resonance/cli.hpp"

#include "resonance/dirichlet.hpp"
#include "resonance/error.hpp"
#include "resonance/hunt.hpp"
#include "resonance/modform.hpp"
#include "resonance/parallel.hpp"
#include "resonance/ratio.hpp"
#include "resonance/resonator.hpp"
#include "resonance/zeta.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

namespace resonance::cli {

namespace {

using json = nlohmann::ordered_json;

class Reporter {
public:
    Reporter(std::ostream& out, bool csv, json config) : out_(out), csv_(csv), config_(std::move(config)) {}

    void emit(const std::string& type, const json& fields) {
        json rec;
        rec["schema_version"] = kSchemaVersion;
        rec["record"] = type;
        for (const auto& [k, v] : fields.items()) rec[k] = v;
        rec["config"] = config_;
        rec["provenance"] = {{"safety_margin_c", kSafetyMargin},
                             {"safety_margin_heuristic", true},
                             {"log_correction_C", 0},
                             {"log_correction_C_assumed", true}};
        if (!csv_) {
            out_ << rec.dump() << "\n";
            return;
        }
        if (type != last_type_) {
            std::vector<std::string> head{"schema_version", "record"};
            for (const auto& [k, v] : fields.items()) head.push_back(k);
            head.insert(head.end(), {"config", "safety_margin_c", "log_correction_C"});
            write_row(head);
            last_type_ = type;
        }
        std::vector<std::string> row{std::to_string(kSchemaVersion), type};
        for (const auto& [k, v] : fields.items()) row.push_back(cell(v));
        row.push_back(config_.dump());
        row.push_back(format_double(kSafetyMargin));
        row.push_back("0");
        write_row(row);
    }

private:
    static std::string cell(const json& v) {
        if (v.is_null()) return "";
        if (v.is_number_float()) return format_double(v.get<double>());
        if (v.is_string()) return v.get<std::string>();
        return v.dump();
    }

    void write_row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ",";
            const auto& c = cells[i];
            if (c.find_first_of(",\"\n") == std::string::npos) {
                out_ << c;
                continue;
            }
            out_ << '"';
            for (char ch : c) {
                if (ch == '"') out_ << '"';
                out_ << ch;
            }
            out_ << '"';
        }
        out_ << "\n";
    }

    std::ostream& out_;
    bool csv_;
    json config_;
    std::string last_type_;
};

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

struct TableOptions {
    std::string scheme = "theorem21";
    std::int64_t N = 0;
    std::optional<double> L, A, P0, P1;
    bool desk = false;
    double c1 = 1.0, c2 = 4.0;
    std::string table_file;
};

void add_table_options(CLI::App* sub, TableOptions& t, const std::string& default_scheme) {
    t.scheme = default_scheme;
    sub->add_option("--scheme", t.scheme, "theorem21, frequencyA, signed-theorem21, dirichlet-f, dirichlet-signed");
    sub->add_option("--N", t.N, "support bound");
    sub->add_option("--L", t.L, "theorem21 parameter L (default sqrt(log N log log N))");
    sub->add_option("--A", t.A, "frequencyA parameter A");
    sub->add_option("--P0", t.P0, "prime window lower end");
    sub->add_option("--P1", t.P1, "prime window upper end");
    sub->add_flag("--desk-window", t.desk, "use the window [c1 L^2, c1 c2 L^2]");
    sub->add_option("--c1", t.c1, "desk window scale");
    sub->add_option("--c2", t.c2, "desk window width ratio");
    sub->add_option("--table", t.table_file, "read coefficients from a table file instead");
}

ResonatorSpec make_spec(const TableOptions& t) {
    ResonatorSpec s;
    s.scheme = parse_scheme(t.scheme);
    s.N = t.N;
    s.L = t.L;
    s.A = t.A;
    if (t.P0 || t.P1) {
        if (!t.P0 || !t.P1) throw DomainError("both --P0 and --P1 are needed for a window override");
        s.window = PrimeWindow{*t.P0, *t.P1};
    } else if (t.desk) {
        if (t.N < 2) throw DomainError("--N must be >= 2");
        s.window = desk_window(t.N, t.c1, t.c2);
    }
    s.validate();
    return s;
}

CoefficientTable make_table(const TableOptions& t) {
    if (!t.table_file.empty()) {
        std::ifstream in(t.table_file);
        if (!in) throw DomainError("cannot open table file " + t.table_file);
        return read_table(in);
    }
    return build_table(make_spec(t));
}

json echo_options(const CLI::App& app, const CLI::App& sub) {
    json j;
    j["command"] = sub.get_name();
    auto add = [&j](const CLI::Option* opt) {
        const std::string name = opt->get_single_name();
        // where the output goes and how many workers run do not change the results
        if (name.empty() || name == "help" || name == "threads" || name == "config" || name == "out" ||
            name == "cache-dir")
            return;
        if (opt->count() > 0) {
            const auto& r = opt->results();
            if (r.size() == 1)
                j[name] = r.front();
            else
                j[name] = r;
        } else {
            const std::string d = opt->get_default_str();
            j[name] = d.empty() ? json(nullptr) : json(d);
        }
    };
    for (const auto* opt : app.get_options()) add(opt);
    for (const auto* opt : sub.get_options()) add(opt);
    return j;
}

json record_json(const ExtremeRecord& r) {
    return {{"location", r.location},
            {"resonator_value", r.resonator_value},
            {"target_value", r.target_value},
            {"rank", r.rank},
            {"scheme", r.scheme}};
}

json record_json(const DiscriminantRecord& r) {
    return {{"d", r.d},
            {"disc", r.disc},
            {"L_value", r.L_value},
            {"resonator_value", r.resonator_value},
            {"truncation", r.truncation},
            {"est_error", r.est_error}};
}

void load_caches(const std::string& dir) {
    if (dir.empty()) return;
    const std::filesystem::path p(dir);
    if (std::ifstream in(p / "phihat.cache"); in) SmoothWindow::instance().load_cache(in);
    if (std::ifstream in(p / "wweight.cache"); in) WWeight::instance().load_cache(in);
}

void save_caches(const std::string& dir, bool phi, bool w) {
    if (dir.empty()) return;
    const std::filesystem::path p(dir);
    std::filesystem::create_directories(p);
    if (phi) {
        std::ofstream out(p / "phihat.cache");
        SmoothWindow::instance().save_cache(out);
    }
    if (w) {
        std::ofstream out(p / "wweight.cache");
        WWeight::instance().save_cache(out);
    }
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Resonance-method experiments for zeta and quadratic L-functions", "resonance"};
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "INI file with one [section] per subcommand; flags override it");

    unsigned threads = 0;
    std::uint64_t seed = 0;
    std::string out_path, format = "jsonl", cache_dir;
    app.add_option("--threads", threads, "worker threads (default: RESONANCE_THREADS or 1)");
    app.add_option("--seed", seed, "seed for sampled baselines");
    app.add_option("--out", out_path, "output file (default stdout)");
    app.add_option("--format", format, "jsonl or csv")->check(CLI::IsMember({"jsonl", "csv"}));
    app.add_option("--cache-dir", cache_dir, "directory for phihat.cache and wweight.cache");

    // ratio
    auto* ratio = app.add_subcommand("ratio", "largest eigenvalue of the divisor form and the scheme's ratio");
    std::int64_t ratio_N = 0;
    double ratio_tol = 1e-10;
    int ratio_iters = 100000;
    std::string ratio_scheme;
    std::optional<double> ratio_P0, ratio_P1;
    bool ratio_desk = false;
    ratio->add_option("--N", ratio_N, "dimension")->required();
    ratio->add_option("--tol", ratio_tol, "Rayleigh quotient tolerance");
    ratio->add_option("--max-iter", ratio_iters, "power iteration cap");
    ratio->add_option("--scheme", ratio_scheme, "also compare this scheme's table at the same N");
    ratio->add_option("--P0", ratio_P0, "prime window lower end for --scheme");
    ratio->add_option("--P1", ratio_P1, "prime window upper end for --scheme");
    ratio->add_flag("--desk-window", ratio_desk, "desk window for --scheme");

    // moments
    auto* mom = app.add_subcommand("moments", "smoothed moments M1, M2 directly and from the diagonal");
    TableOptions mom_t;
    double mom_T = 1e4, mom_step = 0.05;
    add_table_options(mom, mom_t, "theorem21");
    mom->add_option("--T", mom_T, "height");
    mom->add_option("--grid-step", mom_step, "quadrature step (<= 0.05)");

    // hunt-zeta
    auto* hz = app.add_subcommand("hunt-zeta", "large |zeta| at the resonator's peaks on [T, 2T]");
    TableOptions hz_t;
    HuntConfig hz_cfg;
    std::optional<std::size_t> hz_top_count;
    std::size_t hz_baseline = 0;
    add_table_options(hz, hz_t, "theorem21");
    hz->add_option("--T", hz_cfg.T, "height");
    hz->add_option("--grid-step", hz_cfg.grid_step, "scan grid step");
    hz->add_option("--top-fraction", hz_cfg.top_fraction, "fraction of peaks kept");
    hz->add_option("--top-count", hz_top_count, "number of peaks kept (overrides --top-fraction)");
    hz->add_option("--refine-iters", hz_cfg.refine_iters, "golden-section iterations per peak");
    hz->add_option("--baseline", hz_baseline, "also report max |zeta| over this many random points");

    // threshold
    auto* th = app.add_subcommand("threshold", "Monte Carlo measure of {t : |zeta| >= e^V}");
    double th_T = 1e5;
    std::vector<double> th_V{0.0};
    std::size_t th_samples = 10000;
    std::optional<double> th_logN;
    TableOptions th_t;
    th->add_option("--T", th_T, "height");
    th->add_option("--V", th_V, "thresholds (log scale); repeatable");
    th->add_option("--samples", th_samples, "sample count (>= 1000)");
    th->add_option("--log-N", th_logN, "also report choose_A(V, log N) for each V >= 3");
    add_table_options(th, th_t, "frequencyA");

    // hunt-chid
    auto* hc = app.add_subcommand("hunt-chid", "extreme L(1/2, chi_8d) over odd squarefree d in [X/16, X/8]");
    TableOptions hc_t;
    double hc_X = 1e6;
    std::string hc_mode = "small";
    std::size_t hc_budget = 200, hc_baseline = 0;
    add_table_options(hc, hc_t, "dirichlet-f");
    hc->add_option("--X", hc_X, "discriminant scale");
    hc->add_option("--mode", hc_mode, "small or large")->check(CLI::IsMember({"small", "large"}));
    hc->add_option("--budget", hc_budget, "number of L-values computed");
    hc->add_option("--baseline", hc_baseline, "also report L-values at this many random d");

    // charsum-check
    auto* cs = app.add_subcommand("charsum-check", "character sums over odd squarefree d");
    std::vector<std::int64_t> cs_n{1};
    std::int64_t cs_z = 10000;
    cs->add_option("--n", cs_n, "odd moduli; repeatable");
    cs->add_option("--z", cs_z, "range end");

    // petersson-check
    auto* pc = app.add_subcommand("petersson-check", "right-hand side of the Petersson formula");
    PeterssonParams pp;
    pc->add_option("--k", pp.k, "even weight >= 12");
    pc->add_option("--m", pp.m, "first index");
    pc->add_option("--n", pp.n, "second index");
    pc->add_option("--c-max", pp.c_max, "Kloosterman truncation (0 = automatic)");

    // weights
    auto* wt = app.add_subcommand("weights", "tables of the weights W, V and of phi-hat");
    std::string wt_kind = "w";
    int wt_k = 40;
    double wt_from = 0.01, wt_to = 10.0;
    std::size_t wt_count = 100;
    wt->add_option("--kind", wt_kind, "w, v or phihat")->check(CLI::IsMember({"w", "v", "phihat"}));
    wt->add_option("--k", wt_k, "weight for V");
    wt->add_option("--from", wt_from, "first abscissa");
    wt->add_option("--to", wt_to, "last abscissa");
    wt->add_option("--count", wt_count, "number of points");

    // export-table
    auto* ex = app.add_subcommand("export-table", "write a coefficient table in the text format");
    TableOptions ex_t;
    add_table_options(ex, ex_t, "theorem21");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        err << app.help();
        return 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    std::ofstream file;
    std::ostream* sink = &out;
    try {
        if (threads > 0) parallel::set_threads(threads);
        load_caches(cache_dir);
        if (!out_path.empty()) {
            file.open(out_path, std::ios::binary);
            if (!file) throw DomainError("cannot open output file " + out_path);
            sink = &file;
        }
        Reporter rep(*sink, format == "csv", echo_options(app, *sub));
        bool used_phi = false, used_w = false;

        if (sub == ratio) {
            PowerIterationOptions opts;
            opts.tol = ratio_tol;
            opts.max_iterations = ratio_iters;
            if (!(ratio_tol > 0.0)) throw DomainError("--tol must be positive");
            const auto eig = max_ratio_eigen(ratio_N, opts);
            json f{{"N", ratio_N}, {"lambda_max", eig.lambda_max}, {"iterations", eig.iterations}};
            if (!ratio_scheme.empty()) {
                TableOptions t;
                t.scheme = ratio_scheme;
                t.N = ratio_N;
                t.P0 = ratio_P0;
                t.P1 = ratio_P1;
                t.desk = ratio_desk;
                const auto table = make_table(t);
                const auto cmp = compare_heuristic(table, opts);
                f["scheme"] = table.spec().summary();
                f["heuristic_ratio"] = cmp.heuristic_ratio;
                f["gap"] = cmp.gap;
            }
            rep.emit("ratio", f);
        } else if (sub == mom) {
            const auto table = make_table(mom_t);
            const auto m = moments(table, mom_T, mom_step);
            rep.emit("moments", {{"T", m.T},
                                 {"N", m.N},
                                 {"m1_direct", m.m1_direct},
                                 {"m1_diag", m.m1_diag},
                                 {"m2_direct_re", m.m2_direct.real()},
                                 {"m2_direct_im", m.m2_direct.imag()},
                                 {"m2_diag", m.m2_diag},
                                 {"quadrature_error", m.quadrature_error},
                                 {"step", m.step}});
        } else if (sub == hz) {
            const auto table = make_table(hz_t);
            hz_cfg.top_count = hz_top_count;
            hz_cfg.seed = seed;
            const auto res = scan(table, hz_cfg);
            json f{{"T", hz_cfg.T}, {"grid_points", res.grid_points}, {"peaks_found", res.peaks_found},
                   {"degenerate", res.degenerate}};
            f["guaranteed_lower_bound"] = nullptr;
            if (static_cast<double>(table.support_bound()) <= std::pow(hz_cfg.T, 0.9))
                f["guaranteed_lower_bound"] = number_or_null(guaranteed_lower_bound(table, hz_cfg.T));
            f["best_target"] = res.records.empty() ? json(nullptr) : json(res.records.front().target_value);
            f["baseline_max"] = nullptr;
            if (hz_baseline > 0) {
                double best = 0.0;
                for (double t : uniform_sample(hz_cfg.T, hz_baseline, seed))
                    best = std::max(best, std::abs(zeta_half(t).value));
                f["baseline_max"] = best;
            }
            rep.emit("hunt_summary", f);
            for (const auto& r : res.records) rep.emit("extreme", record_json(r));
        } else if (sub == th) {
            const auto est = threshold_curve(th_T, th_V, th_samples, seed);
            for (const auto& e : est) {
                json f{{"T", th_T}, {"V", e.V}, {"fraction", e.fraction}, {"ci", e.ci}, {"samples", e.samples}};
                f["A"] = nullptr;
                f["gain"] = nullptr;
                if (th_logN && e.V >= 3.0) {
                    const auto a = choose_A(e.V, *th_logN);
                    f["A"] = a.A;
                    if (a.gain) f["gain"] = *a.gain;
                }
                rep.emit("threshold", f);
            }
            if (th_t.N >= 2 || !th_t.table_file.empty()) {
                const auto table = make_table(th_t);
                const auto d = fourth_moment_diagnostic(table, th_T);
                const auto r4 = r4_diagonal(table);
                rep.emit("fourth_moment", {{"T", th_T},
                                           {"m2", d.m2},
                                           {"r4_exact", r4.exact ? json(*r4.exact) : json(nullptr)},
                                           {"r4_euler_bound", r4.euler_bound},
                                           {"r4_integral", d.r4_integral},
                                           {"measure_floor", d.measure_floor},
                                           {"fraction_floor", d.fraction_floor}});
            }
        } else if (sub == hc) {
            used_w = true;
            const auto spec = make_spec(hc_t);
            const auto mode = hc_mode == "small" ? HuntMode::small : HuntMode::large;
            for (const auto& r : hunt_discriminants(spec, hc_X, mode, hc_budget)) {
                auto f = record_json(r);
                f["mode"] = hc_mode;
                rep.emit("discriminant", f);
            }
            if (hc_baseline > 0)
                for (const auto& r : random_discriminants(hc_X, hc_baseline, seed)) {
                    auto f = record_json(r);
                    f["mode"] = "random";
                    rep.emit("discriminant", f);
                }
        } else if (sub == cs) {
            for (auto n : cs_n) {
                const auto c = char_sum_check(n, cs_z);
                rep.emit("charsum", {{"n", c.n},
                                     {"z", c.z},
                                     {"observed", c.observed},
                                     {"predicted", c.predicted},
                                     {"bound", c.bound},
                                     {"square", c.square},
                                     {"within", c.within}});
            }
        } else if (sub == pc) {
            const auto r = petersson_rhs(pp);
            rep.emit("petersson", {{"k", pp.k},
                                   {"m", pp.m},
                                   {"n", pp.n},
                                   {"value", r.value},
                                   {"delta", r.delta},
                                   {"c_max", r.c_max},
                                   {"tail_bound", r.tail_bound},
                                   {"in_regime", r.in_regime}});
        } else if (sub == wt) {
            if (wt_count < 1) throw DomainError("--count must be >= 1");
            if (!(wt_to >= wt_from)) throw DomainError("--to must be >= --from");
            for (std::size_t i = 0; i < wt_count; ++i) {
                const double x = wt_count == 1 ? wt_from
                                               : wt_from + (wt_to - wt_from) * static_cast<double>(i) /
                                                               static_cast<double>(wt_count - 1);
                if (wt_kind == "w") {
                    used_w = true;
                    rep.emit("weight", {{"kind", "w"}, {"x", x}, {"value", weight_w(x)}});
                } else if (wt_kind == "v") {
                    rep.emit("weight", {{"kind", "v"}, {"k", wt_k}, {"x", x}, {"value", weight_v(x, wt_k)}});
                } else {
                    used_phi = true;
                    const auto v = phi_hat(x);
                    rep.emit("phihat", {{"y", x}, {"re", v.real()}, {"im", v.imag()}});
                }
            }
        } else if (sub == ex) {
            write_table(*sink, make_table(ex_t));
        }
        save_caches(cache_dir, used_phi, used_w);
        sink->flush();
        return 0;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConstructionError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const ResourceError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const IterationError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const PrecisionError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"resonance"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace resonance::cli
