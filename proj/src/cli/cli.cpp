#include "lumikit/cli.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "lumikit/embed.hpp"
#include "lumikit/errors.hpp"
#include "lumikit/eval.hpp"
#include "lumikit/io.hpp"
#include "lumikit/loss.hpp"
#include "lumikit/plot.hpp"
#include "lumikit/relight.hpp"
#include "lumikit/study.hpp"

namespace lumikit::cli {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

void ToolConfig::validate() const {
    canny.validate();
    (void)WbMethod::parse(wb_method);
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("lambda must lie in [0, 1]");
    if (presets.empty()) throw ValidationError("preset list is empty");
    if (bit_depth != 8 && bit_depth != 16) throw ValidationError("bit_depth must be 8 or 16");
    if (threads < 1) throw ValidationError("threads must be at least 1");
    if (manifest_name.empty()) throw ValidationError("manifest_name is empty");
}

namespace {

std::vector<PresetId> parse_preset_list(const std::vector<std::string>& ids) {
    std::vector<PresetId> out;
    for (const auto& s : ids) out.push_back(require_preset_id(s));
    return out;
}

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (!part.empty()) out.push_back(part);
    }
    return out;
}

}  // namespace

ToolConfig parse_tool_config(const std::string& json_text, ToolConfig cfg) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("config must be an object");
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "canny") {
                for (const auto& [ck, cv] : value.items()) {
                    if (ck == "low_threshold") cfg.canny.low_threshold = cv.get<double>();
                    else if (ck == "high_threshold") cfg.canny.high_threshold = cv.get<double>();
                    else if (ck == "blur_sigma") cfg.canny.blur_sigma = cv.get<double>();
                    else if (ck == "relative") cfg.canny.relative = cv.get<bool>();
                    else throw ValidationError("config: unknown key canny." + ck);
                }
            } else if (key == "wb_method") {
                cfg.wb_method = value.get<std::string>();
            } else if (key == "lambda") {
                cfg.lambda = value.get<double>();
            } else if (key == "presets") {
                cfg.presets = parse_preset_list(value.get<std::vector<std::string>>());
            } else if (key == "manifest_name") {
                cfg.manifest_name = value.get<std::string>();
            } else if (key == "plot_dir") {
                cfg.plot_dir = value.get<std::string>();
            } else if (key == "plot") {
                cfg.plot = value.get<bool>();
            } else if (key == "bit_depth") {
                cfg.bit_depth = value.get<int>();
            } else if (key == "threads") {
                cfg.threads = value.get<int>();
            } else if (key == "seed") {
                cfg.seed = value.get<std::uint64_t>();
            } else {
                throw ValidationError("config: unknown key " + key);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

ordered_json config_to_json(const ToolConfig& c) {
    ordered_json j;
    j["canny"] = {{"low_threshold", c.canny.low_threshold},
                  {"high_threshold", c.canny.high_threshold},
                  {"blur_sigma", c.canny.blur_sigma},
                  {"relative", c.canny.relative}};
    j["wb_method"] = c.wb_method;
    j["lambda"] = c.lambda;
    std::vector<std::string> ids;
    for (auto id : c.presets) ids.push_back(preset_id_string(id));
    j["presets"] = ids;
    j["manifest_name"] = c.manifest_name;
    j["plot_dir"] = c.plot_dir;
    j["plot"] = c.plot;
    j["bit_depth"] = c.bit_depth;
    // threads is left out: reports must not depend on the worker count.
    j["seed"] = c.seed;
    return j;
}

namespace {

struct Globals {
    std::string config_path;
    int threads = 1;
    bool json = false;
    CLI::Option* threads_opt = nullptr;
};

struct CannyFlags {
    double low = 0.0, high = 0.0, sigma = 0.0;
    bool absolute = false;
    CLI::Option* low_opt = nullptr;
    CLI::Option* high_opt = nullptr;
    CLI::Option* sigma_opt = nullptr;
    CLI::Option* absolute_opt = nullptr;

    void add(CLI::App* app) {
        low_opt = app->add_option("--canny-low", low, "Low hysteresis threshold");
        high_opt = app->add_option("--canny-high", high, "High hysteresis threshold");
        sigma_opt = app->add_option("--canny-sigma", sigma, "Gaussian blur sigma");
        absolute_opt = app->add_flag("--canny-absolute", absolute,
                                     "Thresholds are absolute gradient magnitudes");
    }

    void apply(CannyParams& p) const {
        if (low_opt->count()) p.low_threshold = low;
        if (high_opt->count()) p.high_threshold = high;
        if (sigma_opt->count()) p.blur_sigma = sigma;
        if (absolute_opt->count()) p.relative = !absolute;
    }
};

ToolConfig load_config(const Globals& g) {
    ToolConfig cfg;
    if (!g.config_path.empty()) cfg = parse_tool_config(read_text_file(g.config_path));
    if (g.threads_opt->count()) cfg.threads = g.threads;
    return cfg;
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << std::fixed << v;
    return os.str();
}

void write_json_file(const fs::path& path, const ordered_json& j) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    write_text_file(path, j.dump(2) + "\n");
}

// --- planck -------------------------------------------------------------------------

struct PlanckArgs {
    std::optional<double> kelvin;
    std::string preset;
};

int cmd_planck(const PlanckArgs& a, const Globals& g, std::ostream& out) {
    (void)load_config(g);
    if (a.kelvin.has_value() == !a.preset.empty()) {
        throw ValidationError("planck needs exactly one of --kelvin or --preset");
    }
    ordered_json j;
    std::optional<Chromaticity> xy;
    IlluminantRgb gains = IlluminantRgb::identity();
    if (!a.preset.empty()) {
        const PresetId id = require_preset_id(a.preset);
        const auto& p = preset(id);
        j["preset_id"] = preset_id_string(id);
        j["name"] = p.name;
        if (id == PresetId::c0) {
            j["kelvin"] = nullptr;
        } else {
            j["kelvin"] = p.kelvin;
            xy = kelvin_to_chromaticity(p.temperature());
        }
        gains = preset_to_illuminant_rgb(id);
    } else {
        const ColorTemperature t(*a.kelvin);
        j["preset_id"] = nullptr;
        j["name"] = nullptr;
        j["kelvin"] = t.kelvin();
        xy = kelvin_to_chromaticity(t);
        gains = chromaticity_to_illuminant_rgb(*xy);
    }
    if (xy) {
        j["chromaticity"] = {{"x", xy->x()}, {"y", xy->y()}};
    } else {
        j["chromaticity"] = nullptr;
    }
    j["gains"] = gains.gains();

    if (g.json) {
        out << j.dump(2) << "\n";
        return 0;
    }
    if (!a.preset.empty()) out << "preset " << j["preset_id"].get<std::string>() << " ("
                               << j["name"].get<std::string>() << ")\n";
    if (!j["kelvin"].is_null()) out << "kelvin " << j["kelvin"].get<double>() << "\n";
    if (xy) out << "chromaticity x=" << fmt(xy->x()) << " y=" << fmt(xy->y()) << "\n";
    out << "gains r=" << fmt(gains[0]) << " g=" << fmt(gains[1]) << " b=" << fmt(gains[2]) << "\n";
    return 0;
}

// --- augment ------------------------------------------------------------------------

struct AugmentArgs {
    std::string image, mask, concept_token = "[v]", class_noun, out_dir, presets;
    int bit_depth = 8;
    bool include_identity = false;
    CLI::Option* bit_depth_opt = nullptr;
    CannyFlags canny;
};

int cmd_augment(const AugmentArgs& a, const Globals& g, std::ostream& out) {
    ToolConfig cfg = load_config(g);
    a.canny.apply(cfg.canny);
    if (!a.presets.empty()) cfg.presets = parse_preset_list(split_commas(a.presets));
    if (a.include_identity &&
        std::find(cfg.presets.begin(), cfg.presets.end(), PresetId::c0) == cfg.presets.end()) {
        cfg.presets.insert(cfg.presets.begin(), PresetId::c0);
    }
    if (a.bit_depth_opt->count()) cfg.bit_depth = a.bit_depth;
    cfg.validate();

    const LinearImage image = load_linear_image(a.image);
    const ForegroundMask mask = load_mask(a.mask);
    PromptTemplate prompt;
    prompt.concept_token = a.concept_token;
    prompt.class_noun = a.class_noun;
    AugmentOptions opts;
    opts.canny = cfg.canny;
    opts.bit_depth = cfg.bit_depth;
    opts.threads = cfg.threads;
    opts.manifest_name = cfg.manifest_name;
    const auto manifest = generate_variants(image, mask, prompt, cfg.presets, a.out_dir, a.image, opts);

    ordered_json j;
    j["config"] = config_to_json(cfg);
    j["manifest"] = (fs::path(a.out_dir) / cfg.manifest_name).generic_string();
    j["record_count"] = manifest.records.size();
    ordered_json recs = ordered_json::array();
    for (const auto& r : manifest.records) {
        recs.push_back({{"preset_id", r.preset_id},
                        {"variant_image_path", r.variant_image_path},
                        {"clipped_pixel_count", r.clipped_pixel_count}});
    }
    j["records"] = std::move(recs);
    if (g.json) {
        out << j.dump(2) << "\n";
    } else {
        out << "wrote " << manifest.records.size() << " variants to " << a.out_dir << "\n";
        for (const auto& r : manifest.records) {
            out << "  " << r.preset_id << "  " << r.variant_image_path << "  clipped "
                << r.clipped_pixel_count << "\n";
        }
    }
    return 0;
}

// --- edges --------------------------------------------------------------------------

struct EdgesArgs {
    std::string image, out_path;
    CannyFlags canny;
};

int cmd_edges(const EdgesArgs& a, const Globals& g, std::ostream& out) {
    ToolConfig cfg = load_config(g);
    a.canny.apply(cfg.canny);
    cfg.validate();
    const LinearImage image = load_linear_image(a.image);
    const EdgeMap edges = canny_edges(image, cfg.canny);
    save_binary_png(a.out_path, edges);
    ordered_json j;
    j["config"] = config_to_json(cfg);
    j["width"] = edges.width();
    j["height"] = edges.height();
    j["edge_pixels"] = edges.count();
    j["out"] = a.out_path;
    if (g.json) {
        out << j.dump(2) << "\n";
    } else {
        out << edges.count() << " edge pixels written to " << a.out_path << "\n";
    }
    return 0;
}

// --- loss-check ---------------------------------------------------------------------

struct LossArgs {
    double lambda = kDefaultMrlLambda;
    CLI::Option* lambda_opt = nullptr;
    std::string pred, target, mask, grad_out;
};

SoftMask mask_from_tensor(const Tensor& t) {
    if (t.channels() != 1) throw ValidationError("mask tensor must have one channel");
    return SoftMask(t.width(), t.height(), std::vector<double>(t.data().begin(), t.data().end()));
}

int cmd_loss_check(const LossArgs& a, const Globals& g, std::ostream& out) {
    ToolConfig cfg = load_config(g);
    if (a.lambda_opt->count()) cfg.lambda = a.lambda;
    cfg.validate();
    const MrlParams params(cfg.lambda);

    if (!a.pred.empty() || !a.target.empty()) {
        if (a.pred.empty() || a.target.empty()) {
            throw ValidationError("--pred and --target must be given together");
        }
        const Tensor pred = read_tensor(a.pred);
        const Tensor target = read_tensor(a.target);
        const SoftMask mask = a.mask.empty()
                                  ? SoftMask::constant(pred.width(), pred.height(), 1.0)
                                  : mask_from_tensor(read_tensor(a.mask));
        const ResidualMap res = residual_map(pred, target);
        const double loss = mrl(res, mask, params);
        if (!a.grad_out.empty()) write_tensor(a.grad_out, mrl_gradient(pred, target, mask, params));
        ordered_json j;
        j["config"] = config_to_json(cfg);
        j["lambda"] = params.lambda();
        j["loss"] = loss;
        j["shape"] = {pred.height(), pred.width(), pred.channels()};
        if (g.json) {
            out << j.dump(2) << "\n";
        } else {
            out << "lambda " << params.lambda() << "  loss " << std::setprecision(17) << loss << "\n";
        }
        return 0;
    }

    const LossSelfCheck check = run_loss_self_check(cfg.seed, 100);
    ordered_json j;
    j["config"] = config_to_json(cfg);
    j["gradient_cases"] = check.gradient_cases;
    j["worst_gradient_error"] = check.worst_gradient_error;
    j["worst_closed_form_error"] = check.worst_closed_form_error;
    j["worst_affine_error"] = check.worst_affine_error;
    ordered_json sweep = ordered_json::array();
    for (const auto& s : check.sweep) sweep.push_back({{"lambda", s.lambda}, {"loss", s.loss}});
    j["sweep"] = std::move(sweep);
    j["passed"] = check.passed;
    if (g.json) {
        out << j.dump(2) << "\n";
    } else {
        out << "gradient cases       " << check.gradient_cases << "\n"
            << "worst gradient error " << std::scientific << std::setprecision(3)
            << check.worst_gradient_error << "\n"
            << "closed-form error    " << check.worst_closed_form_error << "\n"
            << "affine sweep error   " << check.worst_affine_error << "\n"
            << std::defaultfloat;
        for (const auto& s : check.sweep) {
            out << "  lambda " << fmt(s.lambda) << "  loss " << fmt(s.loss) << "\n";
        }
        out << (check.passed ? "PASS" : "FAIL") << "\n";
    }
    return check.passed ? 0 : 1;
}

// --- evaluate -----------------------------------------------------------------------

struct EvaluateArgs {
    std::string manifest, wb, out_path, plot_dir, aggregation = "median";
    bool full_frame = false, per_channel = false;
};

void write_eval_plots(const fs::path& dir, const MetricsReport& report) {
    fs::create_directories(dir);
    std::vector<double> ae, mse, ss;
    for (const auto& [preset_id, row] : report.per_preset) {
        ae.push_back(row.angular_error_deg.mean);
        mse.push_back(row.lab_mse.mean);
        ss.push_back(row.ssim.mean);
    }
    write_bar_chart(dir / "angular_error_deg.png", ae);
    write_bar_chart(dir / "lab_mse.png", mse);
    write_bar_chart(dir / "ssim.png", ss);
}

int cmd_evaluate(const EvaluateArgs& a, const Globals& g, std::ostream& out) {
    ToolConfig cfg = load_config(g);
    if (!a.wb.empty()) cfg.wb_method = a.wb;
    if (!a.plot_dir.empty()) {
        cfg.plot = true;
        cfg.plot_dir = a.plot_dir;
    }
    cfg.validate();
    EvalOptions opts;
    if (a.aggregation == "median") opts.aggregation = RatioAggregation::median;
    else if (a.aggregation == "mean") opts.aggregation = RatioAggregation::mean;
    else throw ValidationError("--aggregation must be median or mean");
    opts.masked_ssim = !a.full_frame;
    opts.ssim.per_channel = a.per_channel;
    opts.threads = cfg.threads;

    const auto manifest = read_manifest(a.manifest);
    const MetricsReport report = evaluate_manifest(manifest, WbMethod::parse(cfg.wb_method), opts);
    ordered_json j = report_to_json(report);
    ordered_json cj = config_to_json(cfg);
    cj["aggregation"] = a.aggregation;
    cj["masked_ssim"] = opts.masked_ssim;
    cj["ssim_per_channel"] = opts.ssim.per_channel;
    j["config"] = std::move(cj);
    write_json_file(a.out_path, j);
    if (cfg.plot) write_eval_plots(cfg.plot_dir, report);

    if (g.json) {
        out << j.dump(2) << "\n";
    } else {
        out << report.records.size() << " records, " << report.failures.size() << " excluded\n";
        for (const auto& [preset_id, row] : report.per_preset) {
            out << "  " << preset_id << "  AE " << fmt(row.angular_error_deg.mean) << "  MSE "
                << fmt(row.lab_mse.mean) << "  SSIM " << fmt(row.ssim.mean) << "\n";
        }
        out << "report written to " << a.out_path << "\n";
    }
    return 0;
}

// --- study --------------------------------------------------------------------------

struct StudyArgs {
    std::string prefs, out_path;
    std::uint64_t seed = 42;
    CLI::Option* seed_opt = nullptr;
    std::size_t resamples = 1000;
    double level = 0.95;
};

int cmd_study(const StudyArgs& a, const Globals& g, std::ostream& out) {
    ToolConfig cfg = load_config(g);
    if (a.seed_opt->count()) cfg.seed = a.seed;
    cfg.validate();
    const auto prefs = PreferenceMatrix::from_csv(read_text_file(a.prefs));
    const CaseVScales scales = thurstone_case_v(prefs);
    const ScaleInterval ci = bootstrap_case_v(prefs, a.resamples, cfg.seed, a.level);

    ordered_json j;
    j["names"] = scales.names;
    j["scale"] = scales.scale;
    j["z"] = scales.z;
    j["bootstrap"] = {{"method", "percentile bootstrap over binomially resampled pairs (approximation)"},
                      {"resamples", ci.resamples},
                      {"seed", ci.seed},
                      {"level", ci.level},
                      {"lower", ci.lower},
                      {"upper", ci.upper}};
    ordered_json cj = config_to_json(cfg);
    cj["resamples"] = a.resamples;
    cj["level"] = a.level;
    j["config"] = std::move(cj);
    write_json_file(a.out_path, j);

    if (g.json) {
        out << j.dump(2) << "\n";
    } else {
        for (std::size_t i = 0; i < scales.names.size(); ++i) {
            out << "  " << scales.names[i] << "  " << fmt(scales.scale[i]) << "  [" << fmt(ci.lower[i])
                << ", " << fmt(ci.upper[i]) << "]\n";
        }
        out << "scales written to " << a.out_path << "\n";
    }
    return 0;
}

// --- probe --------------------------------------------------------------------------

struct ProbeArgs {
    std::vector<std::string> embeddings;
    std::string configs, out_path, plots, metric = "cosine";
    int pca_dims = 2;
};

int cmd_probe(const ProbeArgs& a, const Globals& g, std::ostream& out) {
    ToolConfig cfg = load_config(g);
    cfg.validate();
    const auto metric = parse_metric(a.metric);
    if (!metric) throw ValidationError("--metric must be cosine or euclidean");

    std::vector<EmbeddingSet> sets;
    for (const auto& path : a.embeddings) {
        auto loaded = load_embeddings(path);
        for (auto& s : loaded) sets.push_back(std::move(s));
    }
    const auto configs = parse_cluster_configs(read_text_file(a.configs));
    ProbeOptions opts;
    opts.metric = *metric;
    opts.pca_dims = a.pca_dims;
    opts.threads = cfg.threads;
    if (!a.plots.empty()) opts.plot_dir = a.plots;
    const ProbeReport report = run_probe_suite(sets, configs, opts);

    ordered_json j = probe_report_to_json(report);
    ordered_json cj = config_to_json(cfg);
    cj["metric"] = a.metric;
    cj["pca_dims"] = a.pca_dims;
    cj["configs"] = a.configs;
    j["config"] = std::move(cj);
    write_json_file(a.out_path, j);

    if (g.json) {
        out << j.dump(2) << "\n";
    } else {
        for (const auto& s : report.sets) {
            out << s.encoder_id << " (" << to_string(s.level) << ", dim " << s.dim << ")\n";
            for (const auto& c : s.silhouettes) {
                out << "  " << c.config << "  " << (c.score ? fmt(*c.score) : "error: " + c.error) << "\n";
            }
        }
        out << "report written to " << a.out_path << "\n";
    }
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Flat-light augmentation, colour constancy metrics and embedding probes", "lumikit"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_version_flag("--version", [] {
        return std::string("lumikit ") + LUMIKIT_VERSION + "\ncmf_sha256 " + std::string(cmf_sha256());
    });

    Globals g;
    app.add_option("--config", g.config_path, "JSON config file overriding built-in defaults");
    g.threads_opt = app.add_option("--threads", g.threads, "Worker threads for batch subcommands")
                        ->check(CLI::PositiveNumber);
    app.add_flag("--json", g.json, "Machine-readable output on stdout");

    PlanckArgs planck;
    auto* planck_cmd = app.add_subcommand("planck", "Blackbody chromaticity and RGB gains");
    planck_cmd->add_option("--kelvin", planck.kelvin, "Colour temperature in kelvin");
    planck_cmd->add_option("--preset", planck.preset, "Preset id c0..c7");

    AugmentArgs aug;
    auto* aug_cmd = app.add_subcommand("augment", "Write relit variants, edge map, mask and manifest");
    aug_cmd->add_option("--image", aug.image, "Source image (sRGB PNG)")->required();
    aug_cmd->add_option("--mask", aug.mask, "Foreground mask PNG")->required();
    aug_cmd->add_option("--concept", aug.concept_token, "Concept token")->capture_default_str();
    aug_cmd->add_option("--class", aug.class_noun, "Class noun")->required();
    aug_cmd->add_option("--out", aug.out_dir, "Output directory")->required();
    aug_cmd->add_option("--presets", aug.presets, "Comma-separated preset ids");
    aug.bit_depth_opt = aug_cmd->add_option("--bit-depth", aug.bit_depth, "Variant PNG bit depth (8 or 16)");
    aug_cmd->add_flag("--include-identity", aug.include_identity, "Add the c0 identity record");
    aug.canny.add(aug_cmd);

    EdgesArgs edges;
    auto* edges_cmd = app.add_subcommand("edges", "Canny edge map of an image");
    edges_cmd->add_option("--image", edges.image, "Input image (sRGB PNG)")->required();
    edges_cmd->add_option("--out", edges.out_path, "Output PNG")->required();
    edges.canny.add(edges_cmd);

    LossArgs loss;
    auto* loss_cmd = app.add_subcommand("loss-check", "Masked reconstruction loss self-check");
    loss.lambda_opt = loss_cmd->add_option("--lambda", loss.lambda, "Foreground weight");
    loss_cmd->add_option("--pred", loss.pred, "Prediction tensor header");
    loss_cmd->add_option("--target", loss.target, "Target tensor header");
    loss_cmd->add_option("--mask", loss.mask, "Soft mask tensor header [H, W]");
    loss_cmd->add_option("--grad-out", loss.grad_out, "Write the gradient tensor here");

    EvaluateArgs ev;
    auto* ev_cmd = app.add_subcommand("evaluate", "White-balance metrics over a manifest");
    ev_cmd->add_option("--manifest", ev.manifest, "Manifest JSONL")->required();
    ev_cmd->add_option("--wb", ev.wb, "gray_world | sog:<p> | white_patch | external:<dir>");
    ev_cmd->add_option("--out", ev.out_path, "Report JSON")->required();
    ev_cmd->add_option("--plot", ev.plot_dir, "Write per-preset bar charts here");
    ev_cmd->add_option("--aggregation", ev.aggregation, "median | mean")->capture_default_str();
    ev_cmd->add_flag("--ssim-full-frame", ev.full_frame, "SSIM over the whole frame");
    ev_cmd->add_flag("--ssim-per-channel", ev.per_channel, "Average per-channel SSIM");

    StudyArgs st;
    auto* st_cmd = app.add_subcommand("study", "Thurstone Case V scaling of preference counts");
    st_cmd->add_option("--prefs", st.prefs, "CSV winner,loser,count")->required();
    st_cmd->add_option("--out", st.out_path, "Scales JSON")->required();
    st.seed_opt = st_cmd->add_option("--seed", st.seed, "Bootstrap seed (default 42)");
    st_cmd->add_option("--resamples", st.resamples, "Bootstrap resamples")->capture_default_str();
    st_cmd->add_option("--level", st.level, "Interval level")->capture_default_str();

    ProbeArgs pr;
    auto* pr_cmd = app.add_subcommand("probe", "PCA and silhouette analysis of text embeddings");
    pr_cmd->add_option("--embeddings", pr.embeddings, "Embedding manifests")->required();
    pr_cmd->add_option("--configs", pr.configs, "Cluster config JSON")->required();
    pr_cmd->add_option("--out", pr.out_path, "Report JSON")->required();
    pr_cmd->add_option("--plots", pr.plots, "Write PCA scatter plots here");
    pr_cmd->add_option("--metric", pr.metric, "cosine | euclidean")->capture_default_str();
    pr_cmd->add_option("--pca-dims", pr.pca_dims, "PCA output dimensions")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err) == 0 ? 0 : 1;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        if (e.get_exit_code() != 0) {
            const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
            err << sub->help();
        }
        return 1;
    }

    try {
        if (planck_cmd->parsed()) return cmd_planck(planck, g, out);
        if (aug_cmd->parsed()) return cmd_augment(aug, g, out);
        if (edges_cmd->parsed()) return cmd_edges(edges, g, out);
        if (loss_cmd->parsed()) return cmd_loss_check(loss, g, out);
        if (ev_cmd->parsed()) return cmd_evaluate(ev, g, out);
        if (st_cmd->parsed()) return cmd_study(st, g, out);
        if (pr_cmd->parsed()) return cmd_probe(pr, g, out);
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.push_back("lumikit");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace lumikit::cli
