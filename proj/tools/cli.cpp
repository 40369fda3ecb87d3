#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "oriq/avmodels.hpp"
#include "oriq/doe.hpp"
#include "oriq/error.hpp"
#include "oriq/metrics.hpp"
#include "oriq/parallel.hpp"
#include "oriq/report_io.hpp"
#include "oriq/stats.hpp"
#include "oriq/yuv_io.hpp"

namespace oriq::cli {

namespace {

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

bool wants_csv(const std::string& out, const std::string& format) {
    if (!format.empty()) {
        if (format == "csv") return true;
        if (format == "json") return false;
        throw InvalidArgument("--format must be json or csv");
    }
    return std::filesystem::path(out).extension() == ".csv";
}

struct MetricArgs {
    std::string ref, test, ref_size, test_size;
    std::size_t frames = 0;
    std::string phase = "all";
    std::string metrics = "all";
    std::size_t points = SpherePointSet::kDefaultCount;
    std::string planes = "y";
    std::string cpp_size;
    std::string cpp_sampling = "nearest";
    std::string filter = "lanczos3";
    double cap = 100.0;
    std::string out, format;
};

void cmd_metric(const MetricArgs& a) {
    const auto [rw, rh] = parse_size(a.ref_size);
    const auto [tw, th] = parse_size(a.test_size);

    std::vector<Phase> phases;
    if (a.phase == "all") phases.assign(std::begin(kAllPhases), std::end(kAllPhases));
    else
        for (const auto& p : split_list(a.phase)) phases.push_back(parse_phase(p));
    std::vector<MetricKind> metrics;
    if (a.metrics == "all") metrics.assign(std::begin(kAllMetrics), std::end(kAllMetrics));
    else
        for (const auto& m : split_list(a.metrics)) metrics.push_back(parse_metric(m));

    MetricConfig cfg;
    cfg.sphere_points = a.points;
    cfg.psnr_cap_db = a.cap;
    cfg.reconstruction_filter = parse_filter(a.filter);
    if (a.cpp_sampling == "bicubic") cfg.cpp_bicubic = true;
    else if (a.cpp_sampling != "nearest") throw InvalidArgument("--cpp-sampling must be nearest or bicubic");
    if (!a.cpp_size.empty()) std::tie(cfg.cpp_width, cfg.cpp_height) = parse_size(a.cpp_size);
    if (a.planes == "y") cfg.planes = {PlaneId::Y};
    else if (a.planes == "yuv") cfg.planes = {PlaneId::Y, PlaneId::U, PlaneId::V};
    else throw InvalidArgument("--planes must be y or yuv");
    const bool csv = wants_csv(a.out, a.format);

    const auto pairs = select_pairs(phases, metrics);
    const auto ref_spec = probe_yuv(a.ref, rw, rh);
    const auto test_spec = probe_yuv(a.test, tw, th);

    SequenceEvaluator ev(rw, rh, tw, th, pairs, cfg);
    std::size_t n = std::min(ref_spec.frame_count, test_spec.frame_count);
    if (ref_spec.frame_count != test_spec.frame_count) {
        ev.add_warning("frame count mismatch (" + std::to_string(ref_spec.frame_count) + " vs " +
                       std::to_string(test_spec.frame_count) + "); compared the first " + std::to_string(n));
    }
    if (a.frames > 0) n = std::min(n, a.frames);
    for (std::size_t i = 0; i < n; ++i) {
        ev.add_frame(read_frame(ref_spec, a.ref, i), read_frame(test_spec, a.test, i));
    }
    const auto report = std::move(ev).finish();
    for (const auto& w : report.meta.warnings) std::cerr << "warning: " << w << "\n";

    if (csv) {
        std::ostringstream os;
        write_csv(os, report);
        write_text_output(a.out, os.str());
    } else {
        write_text_output(a.out, dump_json(to_json(report)));
    }
}

struct CorrelateArgs {
    std::string metrics, scores;
    std::string modality = "V";
    bool per_content = false;
    double scale_min = 1.0, scale_max = 5.0;
    std::string out, format;
};

void cmd_correlate(const CorrelateArgs& a) {
    const ScoreScale scale{a.scale_min, a.scale_max};
    if (!(scale.max > scale.min)) throw InvalidArgument("--scale-max must exceed --scale-min");
    const auto modality = parse_modality(a.modality);
    const bool csv = wants_csv(a.out, a.format);
    const auto records = read_scores_csv(a.scores, scale);
    std::vector<ScoreRecord> selected;
    std::copy_if(records.begin(), records.end(), std::back_inserter(selected),
                 [&](const ScoreRecord& r) { return r.modality == modality; });
    if (selected.empty()) throw DegenerateData("no scores for modality " + a.modality);
    const auto mos = mos_aggregate(selected, scale);
    for (const auto& m : mos) {
        if (m.wide_ci) {
            std::cerr << "warning: wide-CI for (" << m.content_id << ", " << m.condition_id << "): +/-" << m.ci95 << "\n";
        }
    }
    auto rep = correlate_metrics_mos(read_metrics_csv(a.metrics), mos, a.per_content);
    rep.modality = std::string(to_string(modality));
    for (const auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";
    write_text_output(a.out, csv ? to_csv(rep) : dump_json(to_json(rep)));
}

struct FitArgs {
    std::string samples, scores;
    std::string model = "all";
    double split = 0.8;
    std::uint64_t seed = 42;
    int repeats = 1;
    bool stratify = false;
    double scale_min = 1.0, scale_max = 5.0;
    std::string out;
};

void cmd_fit(const FitArgs& a) {
    if (a.samples.empty() == a.scores.empty()) throw InvalidArgument("give exactly one of --samples or --scores");
    const ScoreScale scale{a.scale_min, a.scale_max};
    FitRequest req;
    if (a.model != "all") {
        req.forms.clear();
        for (const auto& m : split_list(a.model)) req.forms.push_back(parse_form(m));
    }
    req.ratio = a.split;
    req.seed = a.seed;
    req.repeats = a.repeats;
    req.stratify = a.stratify;
    if (!(req.ratio > 0.0 && req.ratio < 1.0)) throw InvalidArgument("--split must lie in (0, 1)");

    std::vector<AvSample> samples;
    if (!a.samples.empty()) {
        samples = read_av_samples_csv(a.samples, scale);
    } else {
        const auto records = read_scores_csv(a.scores, scale);
        samples = av_samples_from_mos(mos_aggregate(records, scale));
    }
    auto out = run_fit(samples, req);
    for (const auto& w : out["subjective_correlation"]["warnings"]) std::cerr << "warning: " << w.get<std::string>() << "\n";
    write_text_output(a.out, dump_json(out));
}

struct DoeArgs {
    std::string factors;
    std::size_t runs = 0;
    std::string terms = "main";
    int restarts = 10;
    std::uint64_t seed = 7;
    std::string out;
};

void cmd_doe(const DoeArgs& a) {
    DesignProblem p;
    p.terms = parse_terms(a.terms);
    p.n_runs = a.runs;
    if (a.restarts < 1) throw InvalidArgument("--restarts must be >= 1");
    p.factors = read_factors(a.factors);
    p.validate();
    const auto res = coordinate_exchange(p, a.restarts, a.seed);
    write_text_output(a.out, design_to_csv(res.design, p));
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Objective and subjective quality analysis for 360-degree audiovisual content", "oriq"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "Worker threads, 0 = auto")->envname("ORIQ_THREADS")->check(CLI::NonNegativeNumber);

    MetricArgs ma;
    auto* metric = app.add_subcommand("metric", "Compute PSNR-family metrics for a reference/test pair of raw I420 files");
    metric->add_option("--ref", ma.ref, "Reference (source) .yuv")->required();
    metric->add_option("--ref-size", ma.ref_size, "Reference size WxH")->required();
    metric->add_option("--test", ma.test, "Test (decoded) .yuv")->required();
    metric->add_option("--test-size", ma.test_size, "Test size WxH")->required();
    metric->add_option("--frames", ma.frames, "Compare at most N frames (0 = all)");
    metric->add_option("--phase", ma.phase, "codec|cf|e2e|all, comma-separated")->capture_default_str();
    metric->add_option("--metrics", ma.metrics, "all or a list of psnr,ws-psnr,s-psnr-nn,s-psnr-i,cpp-psnr")->capture_default_str();
    metric->add_option("--points", ma.points, "Sphere sample count")->capture_default_str()->check(CLI::PositiveNumber);
    metric->add_option("--planes", ma.planes, "y|yuv")->capture_default_str();
    metric->add_option("--cpp-size", ma.cpp_size, "CPP raster WxH (default: reference size)");
    metric->add_option("--cpp-sampling", ma.cpp_sampling, "nearest|bicubic")->capture_default_str();
    metric->add_option("--filter", ma.filter, "End-to-end reconstruction filter nearest|bilinear|lanczos3")->capture_default_str();
    metric->add_option("--cap", ma.cap, "PSNR cap in dB used for averaging")->capture_default_str();
    metric->add_option("--out", ma.out, "Report path (.json or .csv); stdout when omitted");
    metric->add_option("--format", ma.format, "json|csv (overrides the --out extension)");

    CorrelateArgs ca;
    auto* correlate = app.add_subcommand("correlate", "Correlate objective metrics with MOS (PCC, SROCC, RMSE)");
    correlate->add_option("--metrics", ca.metrics, "metrics.csv")->required();
    correlate->add_option("--scores", ca.scores, "scores.csv")->required();
    correlate->add_option("--modality", ca.modality, "A|V|AV")->capture_default_str();
    correlate->add_flag("--per-content", ca.per_content, "Add a per-content breakdown");
    correlate->add_option("--scale-min", ca.scale_min, "Rating scale minimum")->capture_default_str();
    correlate->add_option("--scale-max", ca.scale_max, "Rating scale maximum")->capture_default_str();
    correlate->add_option("--out", ca.out, "Report path (.json or .csv); stdout when omitted");
    correlate->add_option("--format", ca.format, "json|csv (overrides the --out extension)");

    FitArgs fa;
    auto* fit = app.add_subcommand("fit", "Fit audiovisual quality models M1..M6 with a train/test split");
    fit->add_option("--samples", fa.samples, "av_samples.csv");
    fit->add_option("--scores", fa.scores, "scores.csv with A, V and AV ratings (aggregated to MOS)");
    fit->add_option("--model", fa.model, "m1..m6, comma-separated, or all")->capture_default_str();
    fit->add_option("--split", fa.split, "Training fraction")->capture_default_str();
    fit->add_option("--seed", fa.seed, "Split seed")->capture_default_str();
    fit->add_option("--repeats", fa.repeats, "Repeated splits with seeds seed..seed+K-1")->capture_default_str();
    fit->add_flag("--stratify", fa.stratify, "Stratify the split by content_id");
    fit->add_option("--scale-min", fa.scale_min, "Rating scale minimum")->capture_default_str();
    fit->add_option("--scale-max", fa.scale_max, "Rating scale maximum")->capture_default_str();
    fit->add_option("--out", fa.out, "JSON output path; stdout when omitted");

    DoeArgs da;
    auto* doe = app.add_subcommand("doe", "Generate a D-optimal design by coordinate exchange");
    doe->add_option("--factors", da.factors, "factors.toml or factors.csv")->required();
    doe->add_option("--runs", da.runs, "Number of runs")->required();
    doe->add_option("--terms", da.terms, "main|2fi")->capture_default_str();
    doe->add_option("--restarts", da.restarts, "Random restarts")->capture_default_str();
    doe->add_option("--seed", da.seed, "Seed")->capture_default_str();
    doe->add_option("--out", da.out, "design.csv path; stdout when omitted");

    std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        set_thread_count(threads);
        if (*metric) cmd_metric(ma);
        else if (*correlate) cmd_correlate(ca);
        else if (*fit) cmd_fit(fa);
        else if (*doe) cmd_doe(da);
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    } catch (const DegenerateData& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDegenerate;
    }
    return kOk;
}

}  // namespace oriq::cli
