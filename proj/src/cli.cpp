#include "uniformity/cli.hpp"

#include "uniformity/errors.hpp"
#include "uniformity/integration.hpp"
#include "uniformity/numtheory.hpp"
#include "uniformity/parallel.hpp"
#include "uniformity/records.hpp"
#include "uniformity/sequences.hpp"
#include "uniformity/spectral.hpp"
#include "uniformity/transport.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace unif {

namespace {

const std::vector<std::string> kMetrics = {"w1_exact",  "w2_exact",      "w2_bracket",
                                           "w2_spectral_bound", "diaphony", "heat_diaphony",
                                           "star_disc", "rw_bound",      "packing_lb"};

struct MeasureParams {
    std::uint32_t cutoff = 0; // 0: per-dimension default
    int grid_res = 128;
    double c_smooth = 1.0;
    double heat_t = 0.01;
    double alpha = 0.0; // rw_bound; 0 selects the vetted d=1 value
    bool entropic = false;
    bool certified = false; // Kronecker: use the certified bound spectrum
    int t_points = 40;
    bool timing = false;
};

std::uint32_t default_cutoff(int d) {
    switch (d) {
    case 1: return 2048;
    case 2: return 384;
    default: return 48;
    }
}

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw SpecError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw SpecError("cannot write '" + path + "'");
    os << text;
}

ExperimentRecord measure_one(const SequenceSpec* spec, const PointSet& ps, const std::string& metric,
                             const MeasureParams& mp) {
    ExperimentRecord rec;
    rec.sequence_label = ps.label();
    rec.d = ps.dim();
    rec.N = ps.size();
    rec.metric = metric;
    const auto started = std::chrono::steady_clock::now();
    try {
        if (metric == "w1_exact") {
            rec.value = w1_circle_exact(empirical_from_points(ps));
        } else if (metric == "w2_exact") {
            rec.value = w2_circle_exact(empirical_from_points(ps));
        } else if (metric == "w2_bracket") {
            const auto b = w2_torus_bracket(empirical_from_points(ps), mp.grid_res,
                                            mp.entropic ? W2Bracket::Method::entropic
                                                        : W2Bracket::Method::exact_simplex);
            rec.value = b.upper;
            rec.bracket_lo = b.lower;
            rec.bracket_hi = b.upper;
        } else if (metric == "w2_spectral_bound") {
            const std::uint32_t L = mp.cutoff ? mp.cutoff : default_cutoff(ps.dim());
            Spectrum sp;
            if (mp.certified) {
                if (!spec || spec->kind != SeqKind::kronecker)
                    throw SpecError("certified spectra exist only for kronecker sequences");
                sp = kronecker_bound_spectrum(spec->kronecker_alpha(), ps.size(), L);
            } else {
                sp = build_spectrum(ps, L);
            }
            const auto grid = default_t_grid(ps.size(), mp.t_points);
            const auto rep = w2_upper_bound(sp, grid, mp.c_smooth);
            rec.value = rep.value;
            rec.tail = rep.truncation_tail;
            rec.t_star = rep.t_star;
        } else if (metric == "diaphony") {
            const std::uint32_t L = mp.cutoff ? mp.cutoff : 100000;
            const auto rep = zinterhof_diaphony(build_spectrum(ps, L));
            rec.value = rep.value;
            rec.tail = rep.truncation_tail;
        } else if (metric == "heat_diaphony") {
            const std::uint32_t L = mp.cutoff ? mp.cutoff : default_cutoff(ps.dim());
            const auto sp = build_spectrum(ps, L);
            rec.value = heat_diaphony(sp, mp.heat_t);
            rec.tail = heat_diaphony_tail(sp, mp.heat_t);
            rec.t_star = mp.heat_t;
        } else if (metric == "star_disc") {
            rec.value = star_discrepancy_1d(ps);
        } else if (metric == "rw_bound") {
            const double a = mp.alpha != 0.0 ? mp.alpha : badly_approximable_alpha(1)[0];
            const std::uint64_t L = mp.cutoff ? mp.cutoff : 1000000;
            const auto rep = random_walk_w2_bound(a, ps.size(), L);
            rec.value = rep.value;
            rec.tail = rep.truncation_tail;
            rec.sequence_label = rep.source;
        } else if (metric == "packing_lb") {
            rec.value = packing_lower_bound(ps.size(), ps.dim());
        } else {
            throw SpecError("unknown metric '" + metric + "'");
        }
    } catch (const std::exception& e) {
        rec.value = std::numeric_limits<double>::quiet_NaN();
        rec.note = e.what();
    }
    if (mp.timing)
        rec.wall_time_ms = static_cast<std::uint64_t>(
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started)
                .count());
    return rec;
}

// rw_bound consumes the entry of --n-list as the step count; no points are
// generated for it.
bool needs_points(const std::string& metric) { return metric != "rw_bound" && metric != "packing_lb"; }

std::vector<ExperimentRecord> run_measure(const std::optional<SequenceSpec>& spec,
                                          const std::optional<PointSet>& file_points,
                                          std::span<const std::uint64_t> n_list,
                                          std::span<const std::string> metrics,
                                          const MeasureParams& mp) {
    struct Task {
        std::uint64_t n = 0;
        std::string metric;
    };
    std::vector<Task> tasks;
    if (file_points) {
        for (const auto& m : metrics) tasks.push_back({file_points->size(), m});
    } else {
        for (std::uint64_t n : n_list)
            for (const auto& m : metrics) tasks.push_back({n, m});
    }
    std::vector<ExperimentRecord> out(tasks.size());
    // worker pool over (N, metric); results land in task order no matter
    // which thread finishes first
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(tasks.size()); ++i) {
        const Task& t = tasks[static_cast<std::size_t>(i)];
        try {
            if (file_points) {
                out[static_cast<std::size_t>(i)] =
                    measure_one(nullptr, *file_points, t.metric, mp);
            } else if (!needs_points(t.metric)) {
                PointSet dummy(spec ? spec->dim : 1, spec ? spec->label() : "n/a");
                if (t.metric == "packing_lb") {
                    ExperimentRecord rec;
                    rec.sequence_label = spec ? spec->label() : "any";
                    rec.d = spec ? spec->dim : 1;
                    rec.N = t.n;
                    rec.metric = t.metric;
                    rec.value = packing_lower_bound(t.n, rec.d);
                    out[static_cast<std::size_t>(i)] = rec;
                } else { // rw_bound
                    ExperimentRecord rec;
                    const double a = mp.alpha != 0.0 ? mp.alpha : badly_approximable_alpha(1)[0];
                    const std::uint64_t L = mp.cutoff ? mp.cutoff : 1000000;
                    const auto rep = random_walk_w2_bound(a, t.n, L);
                    rec.sequence_label = rep.source;
                    rec.d = 1;
                    rec.N = t.n;
                    rec.metric = t.metric;
                    rec.value = rep.value;
                    rec.tail = rep.truncation_tail;
                    out[static_cast<std::size_t>(i)] = rec;
                }
            } else {
                const PointSet ps = generate_n(*spec, t.n);
                out[static_cast<std::size_t>(i)] = measure_one(&*spec, ps, t.metric, mp);
            }
        } catch (const std::exception& e) {
            ExperimentRecord rec;
            rec.sequence_label = spec ? spec->label() : "file";
            rec.d = spec ? spec->dim : (file_points ? file_points->dim() : 1);
            rec.N = t.n;
            rec.metric = t.metric;
            rec.value = std::numeric_limits<double>::quiet_NaN();
            rec.note = e.what();
            out[static_cast<std::size_t>(i)] = rec;
        }
    }
    return out;
}

void emit_records(std::span<const ExperimentRecord> recs, const std::string& out_path,
                  const std::string& format) {
    const std::string text = format == "json" ? records_json(recs) : records_csv(recs);
    if (out_path.empty())
        std::cout << text;
    else
        write_file(out_path, text);
}

std::vector<std::uint64_t> parse_n_list(const std::string& text) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoull(item));
    }
    if (out.empty()) throw SpecError("empty --n-list");
    return out;
}

int cmd_report(const std::string& records_path, const std::string& out_path) {
    const std::string text = read_file(records_path);
    std::vector<ExperimentRecord> recs;
    std::vector<std::string> parse_failures;
    if (!text.empty() && text.front() == '[') {
        recs = records_from_json(text);
    } else {
        // tolerate bad rows: list them instead of aborting
        std::istringstream is(text);
        std::string line;
        std::ostringstream good;
        bool first = true;
        while (std::getline(is, line)) {
            if (first) {
                good << line << "\n";
                first = false;
                continue;
            }
            if (line.empty()) continue;
            try {
                recs.push_back(records_from_csv("sequence_label,d,N,metric,value,tail,bracket_lo,"
                                                "bracket_hi,t_star,wall_time_ms,note\n" +
                                                line)
                                   .at(0));
            } catch (const std::exception&) {
                parse_failures.push_back(line);
            }
        }
    }

    // validity: every Wasserstein-type value must clear the packing bound,
    // brackets must be ordered
    std::vector<std::string> violations;
    for (const auto& r : recs) {
        if (r.failed()) continue;
        const bool wasserstein = r.metric == "w1_exact" || r.metric == "w2_exact" ||
                                 r.metric == "w2_bracket" || r.metric == "w2_spectral_bound";
        if (wasserstein && r.N > 0) {
            const double lb = packing_lower_bound(r.N, r.d);
            const double v = r.metric == "w2_bracket" ? r.bracket_hi : r.value;
            if (v < lb - 1e-12) {
                std::ostringstream os;
                os << r.metric << " N=" << r.N << " value " << v << " below packing bound " << lb;
                violations.push_back(os.str());
            }
        }
        if (r.metric == "w2_bracket" && r.bracket_lo > r.bracket_hi + 1e-15)
            violations.push_back("bracket inverted at N=" + std::to_string(r.N));
    }

    std::map<std::string, std::vector<const ExperimentRecord*>> by_metric;
    for (const auto& r : recs) by_metric[r.metric].push_back(&r);

    std::ostringstream md;
    md << "# measurement report\n\n";
    md << "records: " << recs.size() << ", parse failures: " << parse_failures.size()
       << ", violations: " << violations.size() << "\n";
    std::ostringstream csv;
    csv << "metric,sequence_label,d,N,value,tail\n";
    for (const auto& [metric, rows] : by_metric) {
        md << "\n## " << metric << "\n\n";
        md << "| sequence | d | N | value | tail | note |\n";
        md << "|---|---|---|---|---|---|\n";
        for (const auto* r : rows) {
            md << "| " << r->sequence_label << " | " << r->d << " | " << r->N << " | " << r->value
               << " | " << r->tail << " | " << r->note << " |\n";
            csv << metric << ',' << r->sequence_label << ',' << r->d << ',' << r->N << ','
                << r->value << ',' << r->tail << "\n";
        }
    }
    if (!parse_failures.empty()) {
        md << "\n## parse failures\n\n";
        for (const auto& l : parse_failures) md << "- `" << l << "`\n";
    }
    if (!violations.empty()) {
        md << "\n## BOUND VIOLATIONS\n\n";
        for (const auto& v : violations) md << "- " << v << "\n";
    }
    std::cout << md.str();
    if (!out_path.empty()) write_file(out_path, csv.str());
    return violations.empty() ? 0 : 3;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    apply_thread_env();

    CLI::App app{"regularity of point sequences on the torus: generators, transport distances, "
                 "spectral bounds and scaling experiments"};
    app.require_subcommand(1);

    std::string seq_text, points_path, out_path, format = "csv", metric_list, n_list_text,
                function_text, records_path, alpha_text;
    MeasureParams mp;
    std::uint64_t n_single = 0, n_start = 1;
    std::uint32_t certify_K = 1000;
    bool fit_log_correction = false;

    auto* gen = app.add_subcommand("generate", "generate a point set and write CSV/JSON");
    gen->add_option("spec", seq_text, "sequence spec, e.g. kronecker:d=2,alpha=auto | vdc:base=2 | "
                                      "qr:p=101 | grid:d=2,m=3 | random:d=1,seed=7")
        ->required();
    gen->add_option("--n", n_single, "number of points")->required();
    gen->add_option("--n-start", n_start, "first index (1-based)");
    gen->add_option("--out", out_path, "output file (default stdout)");
    gen->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));

    auto* meas = app.add_subcommand("measure", "compute metrics for generated or loaded points");
    meas->add_option("spec", seq_text, "sequence spec (omit when --points is given)");
    meas->add_option("--points", points_path, "read points from CSV/JSON instead of generating");
    meas->add_option("--metric", metric_list, "comma list from: w1_exact,w2_exact,w2_bracket,"
                                              "w2_spectral_bound,diaphony,heat_diaphony,star_disc,"
                                              "rw_bound,packing_lb")
        ->required();
    meas->add_option("--n-list", n_list_text, "comma list of N (or step counts for rw_bound)");
    meas->add_option("--cutoff", mp.cutoff, "frequency cutoff L (0 = per-dimension default)");
    meas->add_option("--grid-res", mp.grid_res, "bracket grid resolution M");
    meas->add_option("--c-smooth", mp.c_smooth, "smoothing constant of the spectral bound");
    meas->add_option("--t", mp.heat_t, "heat time for heat_diaphony");
    meas->add_option("--t-points", mp.t_points, "number of t-grid points");
    meas->add_option("--alpha", mp.alpha, "rotation for rw_bound (default: vetted d=1 value)");
    meas->add_flag("--entropic", mp.entropic, "use the heuristic entropic bracket");
    meas->add_flag("--certified", mp.certified, "kronecker: spectral bound from the certified "
                                                "geometric-series spectrum");
    meas->add_flag("--timing", mp.timing, "record wall times (breaks byte determinism)");
    meas->add_option("--out", out_path, "output file (default stdout)");
    meas->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));

    auto* scal = app.add_subcommand("scaling", "fit log(metric) against log(N)");
    scal->add_option("spec", seq_text, "sequence spec")->required();
    scal->add_option("--metric", metric_list, "one metric name")->required();
    scal->add_option("--n-list", n_list_text, "comma list of N, >= 5 values")->required();
    scal->add_option("--cutoff", mp.cutoff, "frequency cutoff L");
    scal->add_option("--grid-res", mp.grid_res, "bracket grid resolution M");
    scal->add_option("--c-smooth", mp.c_smooth, "smoothing constant");
    scal->add_option("--t-points", mp.t_points, "number of t-grid points");
    scal->add_option("--alpha", mp.alpha, "rotation for rw_bound");
    scal->add_flag("--certified", mp.certified, "kronecker: use certified spectra");
    scal->add_flag("--fit-log-correction", fit_log_correction,
                   "also fit log(value*N) against log(log2 N)");
    scal->add_option("--out", out_path, "also write the measured records CSV here");

    auto* integ = app.add_subcommand("integrate", "numerical-integration error study");
    integ->add_option("spec", seq_text, "sequence spec")->required();
    integ->add_option("--function", function_text,
                      "test function, e.g. product:k=1|1 | trig:k=1 | "
                      "bump:radius=0.05,height=0.05 | extremal:eps=0.0625,relative=1")
        ->required();
    integ->add_option("--n-list", n_list_text, "comma list of N")->required();
    integ->add_option("--out", out_path, "output file (default stdout)");
    integ->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));

    auto* cert = app.add_subcommand("certify", "finite-box badly-approximable certificate");
    cert->add_option("--alpha", alpha_text, "coordinates a|b|c, or auto:d=2 for the vetted vector");
    cert->add_option("--K", certify_K, "search radius");
    cert->add_option("--out", out_path, "output file (default stdout)");

    auto* rep = app.add_subcommand("report", "summarize a records file, flag bound violations");
    rep->add_option("records", records_path, "records CSV/JSON path")->required();
    rep->add_option("--out", out_path, "summary CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) {
            const auto spec = SequenceSpec::parse(seq_text);
            const PointSet ps = generate(spec, n_start, n_single);
            if (format == "json") {
                if (out_path.empty())
                    std::cout << ps.to_json() << "\n";
                else
                    write_file(out_path, ps.to_json());
            } else {
                std::ostringstream os;
                ps.write_csv(os);
                if (out_path.empty())
                    std::cout << os.str();
                else
                    write_file(out_path, os.str());
            }
            return 0;
        }

        if (meas->parsed()) {
            std::vector<std::string> metrics;
            {
                std::stringstream ss(metric_list);
                std::string item;
                while (std::getline(ss, item, ',')) metrics.push_back(item);
            }
            for (const auto& m : metrics)
                if (std::find(kMetrics.begin(), kMetrics.end(), m) == kMetrics.end())
                    throw SpecError("unknown metric '" + m + "'");
            std::optional<SequenceSpec> spec;
            std::optional<PointSet> pts;
            std::vector<std::uint64_t> ns;
            if (!points_path.empty()) {
                const std::string text = read_file(points_path);
                if (!text.empty() && text.front() == '[')
                    pts = PointSet::from_json(text, "file:" + points_path);
                else {
                    std::istringstream is(text);
                    pts = PointSet::read_csv(is, "file:" + points_path);
                }
            } else {
                if (seq_text.empty()) throw SpecError("measure: give a spec or --points");
                spec = SequenceSpec::parse(seq_text);
                if (n_list_text.empty()) throw SpecError("measure: --n-list required with a spec");
                ns = parse_n_list(n_list_text);
            }
            const auto recs = run_measure(spec, pts, ns, metrics, mp);
            emit_records(recs, out_path, format);
            bool any_ok = false;
            for (const auto& r : recs) any_ok = any_ok || !r.failed();
            return any_ok ? 0 : 2;
        }

        if (scal->parsed()) {
            const auto spec = SequenceSpec::parse(seq_text);
            const auto ns = parse_n_list(n_list_text);
            if (ns.size() < 5) throw SpecError("scaling: need >= 5 sample sizes");
            const std::vector<std::string> metrics{metric_list};
            const auto recs = run_measure(spec, std::nullopt, ns, metrics, mp);
            std::vector<std::uint64_t> xs;
            std::vector<double> ys;
            for (const auto& r : recs) {
                if (r.failed()) throw SpecError("scaling: measurement failed: " + r.note);
                xs.push_back(r.N);
                ys.push_back(r.value);
            }
            const ScalingFit fit = fit_loglog(xs, ys);
            nlohmann::json j = nlohmann::json::parse(fit.to_json());
            if (fit_log_correction) {
                std::vector<double> lx(xs.size()), ly(xs.size());
                for (std::size_t i = 0; i < xs.size(); ++i) {
                    lx[i] = std::log(std::log2(static_cast<double>(xs[i])));
                    ly[i] = std::log(ys[i] * static_cast<double>(xs[i]));
                }
                const ScalingFit corr = fit_linear(lx, ly);
                j["log_correction"] = nlohmann::json::parse(corr.to_json());
            }
            std::cout << j.dump() << "\n";
            if (!out_path.empty()) write_file(out_path, records_csv(recs));
            return 0;
        }

        if (integ->parsed()) {
            const auto spec = SequenceSpec::parse(seq_text);
            const auto ns = parse_n_list(n_list_text);
            const TestFunction f = TestFunction::parse(function_text, spec.dim);
            const auto recs = run_error_study(spec, f, ns);
            const std::string text = format == "json" ? error_records_json(recs) : error_records_csv(recs);
            if (out_path.empty())
                std::cout << text;
            else
                write_file(out_path, text);
            return 0;
        }

        if (cert->parsed()) {
            std::vector<double> alpha;
            if (alpha_text.rfind("auto", 0) == 0) {
                int d = 1;
                const auto eq = alpha_text.find("d=");
                if (eq != std::string::npos) d = std::stoi(alpha_text.substr(eq + 2));
                alpha = badly_approximable_alpha(d);
            } else if (!alpha_text.empty()) {
                std::stringstream ss(alpha_text);
                std::string item;
                while (std::getline(ss, item, '|')) alpha.push_back(std::stod(item));
            } else {
                throw SpecError("certify: --alpha required (a|b|c or auto:d=2)");
            }
            const auto certr = linear_form_badness(alpha, certify_K);
            if (out_path.empty())
                std::cout << certr.to_json() << "\n";
            else
                write_file(out_path, certr.to_json());
            return 0;
        }

        if (rep->parsed()) return cmd_report(records_path, out_path);
    } catch (const SpecError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ValidityError& e) {
        std::cerr << "validity violation: " << e.what() << "\n";
        return 3;
    } catch (const ResourceError& e) {
        std::cerr << "resource guard: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace unif
