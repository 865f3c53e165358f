// Acceptance suite: one PASS/FAIL line per primary criterion. Exit status is
// nonzero if any criterion fails.

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "lumikit/color.hpp"
#include "lumikit/embed.hpp"
#include "lumikit/errors.hpp"
#include "lumikit/eval.hpp"
#include "lumikit/io.hpp"
#include "lumikit/loss.hpp"
#include "lumikit/relight.hpp"
#include "lumikit/study.hpp"

using namespace lumikit;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

fs::path test_data(const std::string& rel) { return fs::path(LUMIKIT_TEST_DATA_DIR) / rel; }
fs::path repo_data(const std::string& rel) { return fs::path(LUMIKIT_DATA_DIR) / rel; }

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

class ScratchDir {
public:
    ScratchDir() {
        path_ = fs::temp_directory_path() / ("lumikit_acceptance_" + std::to_string(::getpid()));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~ScratchDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

LinearImage random_image(int w, int h, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    LinearImage img(w, h);
    for (double& v : img.data()) v = u(rng);
    return img;
}

LinearImage step_image(int w, int h, double a, double b, bool vertical) {
    LinearImage img(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const bool left = vertical ? x < w / 2 : y < h / 2;
            for (int c = 0; c < 3; ++c) img.at(x, y, c) = left ? a : b;
        }
    }
    return img;
}

nlohmann::json read_json(const fs::path& p) {
    std::ifstream in(p);
    return nlohmann::json::parse(in);
}

// --- 1 ---------------------------------------------------------------------------------

void preset_fidelity(Outcome& o) {
    const auto t0 = Clock::now();
    const double expected[] = {2850, 3300, 3800, 4500, 6500, 7000, 7500};
    const auto presets = canonical_presets();
    o.check(presets.size() == 7, "seven presets");
    for (std::size_t i = 0; i < presets.size() && i < 7; ++i) {
        o.check(presets[i].kelvin == expected[i], "temperature of " + preset_id_string(presets[i].id));
        (void)kelvin_to_chromaticity(presets[i].temperature());
    }
    const auto a = kelvin_to_chromaticity(ColorTemperature(2856));
    const double elapsed = seconds_since(t0);
    o.check(std::abs(a.x() - 0.4476) <= 0.002 && std::abs(a.y() - 0.4074) <= 0.002, "2856K chromaticity");
    o.check(elapsed < 1.0, "runtime");
    o.detail << "2856K -> (" << a.x() << ", " << a.y() << "), " << elapsed * 1e3 << " ms";
}

// --- 2 ---------------------------------------------------------------------------------

void locus_monotonicity(Outcome& o) {
    int violations = 0;
    double prev_r = INFINITY, prev_b = -INFINITY;
    for (int t = 2000; t <= 10000; t += 100) {
        const auto g = chromaticity_to_illuminant_rgb(kelvin_to_chromaticity(ColorTemperature(t)));
        if (g[0] > prev_r) ++violations;
        if (g[2] < prev_b) ++violations;
        prev_r = g[0];
        prev_b = g[2];
    }
    o.check(violations == 0, "monotone gains");
    o.detail << violations << " violations over 81 temperatures";
}

// --- 3 ---------------------------------------------------------------------------------

void relight_round_trip(Outcome& o) {
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto img = random_image(32, 24, 1000 + seed);
        for (const auto& p : canonical_presets()) {
            const auto& g = preset_to_illuminant_rgb(p.id);
            const auto back = apply_flat_light(apply_flat_light(img, g).image, g.inverse()).image;
            for (std::size_t i = 0; i < img.data().size(); ++i) {
                worst = std::max(worst, std::abs(back.data()[i] - img.data()[i]));
            }
        }
    }
    o.check(worst <= 1e-6, "round trip within 1e-6");
    o.detail << "max deviation " << worst << " over 10 images x 7 presets";
}

// --- 4 ---------------------------------------------------------------------------------

void edge_invariance(Outcome& o) {
    double worst_natural = 0.0;
    std::size_t natural = 0;
    for (const auto& e : fs::directory_iterator(test_data("natural"))) {
        if (e.path().extension() != ".png") continue;
        const auto img = load_linear_image(e.path());
        for (const auto& p : canonical_presets()) {
            const auto inv = invariance_under_flat_light(img, preset_to_illuminant_rgb(p.id));
            worst_natural = std::max(worst_natural, inv.disagreement);
        }
        ++natural;
    }
    double worst_step = 0.0;
    const LinearImage steps[] = {step_image(64, 64, 0.1, 0.9, true), step_image(64, 48, 0.7, 0.05, false),
                                 step_image(40, 40, 0.02, 0.3, true)};
    for (const auto& img : steps) {
        for (const auto& p : canonical_presets()) {
            worst_step = std::max(worst_step, invariance_under_flat_light(img, preset_to_illuminant_rgb(p.id)).disagreement);
        }
    }
    o.check(natural >= 1, "natural fixtures present");
    o.check(worst_natural < 0.02, "natural disagreement < 2%");
    o.check(worst_step == 0.0, "step images exactly 0%");
    o.detail << natural << " natural images, worst " << worst_natural * 100.0 << "%; step images worst "
             << worst_step * 100.0 << "%";
}

// --- 5 ---------------------------------------------------------------------------------

void mrl_correctness(Outcome& o) {
    o.check(kDefaultMrlLambda == 0.2 && MrlParams().lambda() == 0.2, "default lambda 0.2");

    // Closed form: constant residual r on a mask with foreground fraction f gives
    // r * (lambda f + (1 - lambda)(1 - f)).
    double closed = 0.0;
    const int h = 6, w = 8, c = 4;
    const double value = 0.3;
    Tensor pred(h, w, c, std::vector<double>(h * w * c, value));
    Tensor target(h, w, c);
    const double r = value * value;
    std::vector<double> m(h * w, 0.0);
    for (int i = 0; i < 12; ++i) m[i] = 1.0;
    const SoftMask mask(w, h, m);
    const double f = 12.0 / 48.0;
    for (double lambda : {0.0, 0.5, 1.0}) {
        const double got = mrl(residual_map(pred, target), mask, MrlParams(lambda));
        closed = std::max(closed, std::abs(got - r * (lambda * f + (1.0 - lambda) * (1.0 - f))));
    }
    o.check(closed <= 1e-12, "closed form to 1e-12");

    std::mt19937_64 rng(2024);
    std::normal_distribution<double> n(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double grad = 0.0;
    for (int k = 0; k < 100; ++k) {
        Tensor p(8, 8, 4), t(8, 8, 4);
        for (double& v : p.data()) v = n(rng);
        for (double& v : t.data()) v = n(rng);
        std::vector<double> mk(64);
        for (double& v : mk) v = u(rng);
        grad = std::max(grad, check_mrl_gradient(p, t, SoftMask(8, 8, mk), MrlParams(u(rng))).max_relative_error);
    }
    o.check(grad < 1e-5, "gradient relative error < 1e-5");

    RegionResiduals regions{0.42, 0.17, 0.3};
    const auto lambdas = ablation_lambdas();
    const auto sweep = lambda_sweep(regions, lambdas);
    const double l0 = 0.7 * 0.17, l1 = 0.3 * 0.42;
    double affine = 0.0;
    for (const auto& s : sweep) affine = std::max(affine, std::abs(s.loss - (l0 + s.lambda * (l1 - l0))));
    o.check(affine <= 1e-10, "sweep affine to 1e-10");
    o.detail << "closed-form " << closed << ", gradient " << grad << " (100 cases), affine " << affine;
}

// --- 6 ---------------------------------------------------------------------------------

void pipeline_closure(Outcome& o, const fs::path& scratch) {
    const auto t0 = Clock::now();
    // Neutral textured source from a natural fixture, kept dark enough that no preset clips.
    const auto photo = load_linear_image(test_data("natural/astronaut.png"));
    const auto lum = photo.luminance();
    double peak = 0.0;
    for (double v : lum) peak = std::max(peak, v);
    LinearImage neutral(photo.width(), photo.height());
    for (std::size_t p = 0; p < photo.pixel_count(); ++p) {
        const double v = 0.02 + 0.38 * lum[p] / peak;
        for (int c = 0; c < 3; ++c) neutral.data()[3 * p + c] = v;
    }
    ForegroundMask mask(photo.width(), photo.height());
    for (int y = photo.height() / 5; y < 4 * photo.height() / 5; ++y) {
        for (int x = photo.width() / 5; x < 4 * photo.width() / 5; ++x) mask.set(x, y, true);
    }
    PromptTemplate prompt;
    prompt.class_noun = "person";
    std::vector<PresetId> all;
    for (const auto& p : canonical_presets()) all.push_back(p.id);
    const auto manifest = generate_variants(neutral, mask, prompt, all, scratch / "closure", "");
    const auto report = evaluate_manifest(manifest, WbMethod::gray_world());
    const double elapsed = seconds_since(t0);

    double worst_ae = 0.0, worst_mse = 0.0, worst_ssim = 1.0;
    for (const auto& r : report.records) {
        worst_ae = std::max(worst_ae, r.angular_error_deg);
        worst_mse = std::max(worst_mse, r.lab_mse);
        worst_ssim = std::min(worst_ssim, r.ssim);
    }
    o.check(report.records.size() == 7 && report.failures.empty(), "seven evaluated records");
    o.check(worst_ae < 2.0, "angular error < 2 deg");
    o.check(worst_mse < 5.0, "lab_mse < 5");
    o.check(worst_ssim > 0.98, "SSIM > 0.98");
    o.check(elapsed < 30.0, "runtime < 30 s");
    o.detail << "worst AE " << worst_ae << " deg, worst lab_mse " << worst_mse << ", min SSIM " << worst_ssim
             << ", " << elapsed << " s";
}

// --- 7 ---------------------------------------------------------------------------------

// Second brute-force silhouette, coded from the definition independently of the library.
double silhouette_reference(const Eigen::MatrixXd& x, const std::vector<int>& label, bool cosine) {
    const auto n = static_cast<std::size_t>(x.rows());
    auto d = [&](std::size_t i, std::size_t j) {
        if (!cosine) return (x.row(i) - x.row(j)).norm();
        return 1.0 - x.row(i).dot(x.row(j)) / (x.row(i).norm() * x.row(j).norm());
    };
    std::map<int, std::size_t> size;
    for (int l : label) ++size[l];
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (size[label[i]] < 2) continue;
        std::map<int, double> acc;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) acc[label[j]] += d(i, j);
        }
        const double a = acc[label[i]] / static_cast<double>(size[label[i]] - 1);
        double b = INFINITY;
        for (const auto& [l, s] : acc) {
            if (l != label[i]) b = std::min(b, s / static_cast<double>(size[l]));
        }
        sum += (b - a) / std::max(a, b);
    }
    return sum / static_cast<double>(n);
}

void metric_oracles(Outcome& o) {
    // SSIM against the committed reference values.
    double ssim_dev = 0.0;
    int ssim_cases = 0;
    const auto golden = read_json(test_data("ssim/ssim_golden.json"));
    for (const auto& pair : golden.at("pairs")) {
        const auto dir = test_data("ssim");
        const auto a = load_linear_image(dir / pair.at("a").get<std::string>());
        const auto b = load_linear_image(dir / pair.at("b").get<std::string>());
        std::optional<ForegroundMask> mask;
        if (pair.contains("mask")) mask = load_mask(dir / pair.at("mask").get<std::string>());
        ssim_dev = std::max(ssim_dev, std::abs(ssim(a, b, mask ? &*mask : nullptr) - pair.at("ssim").get<double>()));
        ++ssim_cases;
    }
    o.check(ssim_cases == 5 && ssim_dev <= 1e-4, "SSIM within 1e-4 on 5 fixtures");

    // Silhouette: exact agreement with the second implementation.
    Eigen::MatrixXd four(4, 1);
    four << 0.0, 0.1, 10.0, 10.1;
    const std::vector<int> four_groups{0, 0, 1, 1};
    const double s4 = silhouette_score(four, four_groups, DistanceMetric::euclidean);
    bool exact = s4 == silhouette_reference(four, four_groups, false);
    o.check(std::abs(s4 - 0.9900) <= 1e-4, "four-point silhouette 0.9900");
    const auto set = load_embeddings(test_data("embed/synthetic_token.json"))[0];
    const auto configs = parse_cluster_configs(read_text_file(test_data("embed/silhouette_configs.json")));
    const auto m = set.matrix();
    int sil_cases = 1;
    for (const auto& cfg : configs) {
        const auto groups = resolve_groups(set, cfg);
        std::vector<Eigen::Index> rows;
        std::vector<int> kept;
        for (std::size_t i = 0; i < groups.size(); ++i) {
            if (groups[i] >= 0) {
                rows.push_back(static_cast<Eigen::Index>(i));
                kept.push_back(groups[i]);
            }
        }
        Eigen::MatrixXd sub(static_cast<Eigen::Index>(rows.size()), m.cols());
        for (std::size_t i = 0; i < rows.size(); ++i) sub.row(static_cast<Eigen::Index>(i)) = m.row(rows[i]);
        for (bool cosine : {true, false}) {
            const auto metric = cosine ? DistanceMetric::cosine : DistanceMetric::euclidean;
            exact = exact && silhouette_score(set, cfg, metric) == silhouette_reference(sub, kept, cosine);
            ++sil_cases;
        }
    }
    o.check(exact, "silhouette matches brute force exactly");

    double phi = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double p = 0.001 + 0.998 * i / 999.0;
        phi = std::max(phi, std::abs(normal_cdf(inverse_normal_cdf(p)) - p));
    }
    o.check(phi < 1e-8, "inverse normal CDF to 1e-8");

    const auto even = thurstone_case_v(PreferenceMatrix({"A", "B"}, {{0, 50}, {50, 0}}));
    const auto sigma = thurstone_case_v(PreferenceMatrix({"A", "B"}, {{0, 8413}, {1587, 0}}));
    const double d_even = std::abs(even.scale[0] - even.scale[1]);
    const double d_sigma = sigma.scale[0] - sigma.scale[1];
    o.check(d_even <= 1e-3, "0.5 proportion gives zero difference");
    o.check(std::abs(d_sigma - 1.0) <= 1e-3, "0.8413 proportion gives unit difference");
    o.detail << "SSIM max dev " << ssim_dev << " (" << ssim_cases << " fixtures), silhouette 4-pt " << s4 << " ("
             << sil_cases << " exact cases), Phi^-1 " << phi << ", Thurstone " << d_even << " / " << d_sigma;
}

// --- 8 ---------------------------------------------------------------------------------

void pca_checks(Outcome& o) {
    Eigen::MatrixXd line(7, 3);
    for (int i = 0; i < 7; ++i) line.row(i) = (0.5 * i - 1.0) * Eigen::RowVector3d(2.0, -1.0, 0.5) + Eigen::RowVector3d(1, 2, 3);
    const auto r1 = pca_project(line, 2);
    const double ev = std::max(std::abs(r1.explained_variance_ratio[0] - 1.0), std::abs(r1.explained_variance_ratio[1]));
    o.check(ev <= 1e-9, "rank-1 explained variance 100%/0%");

    const auto set = load_embeddings(test_data("embed/synthetic_token.json"))[0];
    const auto wide = pca_project(set, 5);
    const Eigen::MatrixXd gram = wide.directions.transpose() * wide.directions;
    const double ortho = (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
    o.check(ortho <= 1e-10, "orthonormal directions");

    const auto j = read_json(test_data("pca_5x4.json"));
    Eigen::MatrixXd x(5, 4);
    for (int i = 0; i < 5; ++i) {
        for (int k = 0; k < 4; ++k) x(i, k) = j["data"][i][k].get<double>();
    }
    const auto r = pca_project(x, 4);
    double dev = 0.0;
    for (int i = 0; i < 5; ++i) {
        for (int k = 0; k < 4; ++k) dev = std::max(dev, std::abs(r.projections(i, k) - j["projections"][i][k].get<double>()));
    }
    o.check(dev <= 1e-8, "5x4 fixture within 1e-8");
    o.detail << "rank-1 dev " << ev << ", Gram dev " << ortho << ", fixture dev " << dev;
}

// --- 9 ---------------------------------------------------------------------------------

std::map<std::string, std::vector<std::uint8_t>> snapshot(const fs::path& dir) {
    std::map<std::string, std::vector<std::uint8_t>> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (e.is_regular_file()) files[fs::relative(e.path(), dir).generic_string()] = read_file_bytes(e.path());
    }
    return files;
}

void determinism(Outcome& o, const fs::path& scratch) {
    const auto photo = load_linear_image(test_data("natural/coffee.png"));
    ForegroundMask mask(photo.width(), photo.height());
    for (int y = 20; y < 100; ++y) {
        for (int x = 30; x < 110; ++x) mask.set(x, y, true);
    }
    PromptTemplate prompt;
    prompt.class_noun = "cup";
    std::vector<PresetId> all;
    for (const auto& p : canonical_presets()) all.push_back(p.id);
    auto sets = load_embeddings(test_data("embed/synthetic_token.json"));
    sets.push_back(load_embeddings(test_data("embed/synthetic_sentence.json"))[0]);
    const auto configs = parse_cluster_configs(read_text_file(repo_data("probe_configs.json")));
    const PreferenceMatrix prefs({"ours", "base", "alt"}, {{0, 61, 70}, {39, 0, 55}, {30, 45, 0}});

    std::vector<std::map<std::string, std::vector<std::uint8_t>>> runs;
    for (int threads : {1, 4, 8}) {
        const fs::path dir = scratch / ("det_" + std::to_string(threads));
        AugmentOptions aug;
        aug.threads = threads;
        const auto manifest = generate_variants(photo, mask, prompt, all, dir / "aug", "", aug);
        EvalOptions ev;
        ev.threads = threads;
        write_text_file(dir / "report.json",
                        report_to_json(evaluate_manifest(manifest, WbMethod::gray_world(), ev)).dump(2));
        ProbeOptions po;
        po.threads = threads;
        po.plot_dir = dir / "plots";
        write_text_file(dir / "probe.json", probe_report_to_json(run_probe_suite(sets, configs, po)).dump(2));
        const auto ci = bootstrap_case_v(prefs, 1000, 42);
        nlohmann::json bj = {{"lower", ci.lower}, {"upper", ci.upper}};
        write_text_file(dir / "study.json", bj.dump(2));
        runs.push_back(snapshot(dir));
    }
    o.check(runs[0] == runs[1] && runs[0] == runs[2], "byte-identical outputs");
    o.detail << runs[0].size() << " files compared across 1/4/8 threads";
}

}  // namespace

int main() {
    ScratchDir scratch;
    struct Criterion {
        int id;
        const char* name;
        std::function<void(Outcome&)> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "preset fidelity", preset_fidelity},
        {2, "locus monotonicity", locus_monotonicity},
        {3, "relight round-trip", relight_round_trip},
        {4, "edge invariance", edge_invariance},
        {5, "MRL correctness", mrl_correctness},
        {6, "synthetic pipeline closure", [&](Outcome& o) { pipeline_closure(o, scratch.path()); }},
        {7, "metric oracles", metric_oracles},
        {8, "PCA", pca_checks},
        {9, "determinism", [&](Outcome& o) { determinism(o, scratch.path()); }},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.str().c_str());
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
