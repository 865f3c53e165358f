#include <gtest/gtest.h>

#include <Eigen/SVD>

#include <cmath>
#include <fstream>
#include <map>
#include <random>

#include "lumikit/embed.hpp"
#include "lumikit/errors.hpp"
#include "lumikit/io.hpp"
#include "test_support.hpp"

using namespace lumikit;
using lumikit::testing::TempDir;

namespace {

nlohmann::json read_json(const std::filesystem::path& p) {
    std::ifstream in(p);
    return nlohmann::json::parse(in);
}

EmbeddingSet small_set() {
    return EmbeddingSet("enc", EmbeddingLevel::token, 3,
                        {{"tungsten", EmbeddingCategory::named_illuminant, {1.0f, 0.0f, 0.5f}},
                         {"2850K", EmbeddingCategory::kelvin_value, {0.0f, 1.0f, -0.25f}},
                         {"2850", EmbeddingCategory::generic_numeral, {0.1f, 0.9f, -0.2f}}});
}

// Independent brute force: explicit per-point loops over a label map.
double silhouette_oracle(const std::vector<std::vector<double>>& pts, const std::vector<int>& labels,
                         bool cosine) {
    auto dist = [&](std::size_t i, std::size_t j) {
        double s = 0.0, na = 0.0, nb = 0.0, d = 0.0;
        for (std::size_t k = 0; k < pts[i].size(); ++k) {
            const double diff = pts[i][k] - pts[j][k];
            s += diff * diff;
            d += pts[i][k] * pts[j][k];
            na += pts[i][k] * pts[i][k];
            nb += pts[j][k] * pts[j][k];
        }
        return cosine ? 1.0 - d / (std::sqrt(na) * std::sqrt(nb)) : std::sqrt(s);
    };
    std::map<int, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < labels.size(); ++i) groups[labels[i]].push_back(i);
    double total = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& own = groups[labels[i]];
        if (own.size() == 1) continue;
        double a = 0.0;
        for (auto j : own) a += j == i ? 0.0 : dist(i, j);
        a /= static_cast<double>(own.size() - 1);
        double b = INFINITY;
        for (const auto& [g, members] : groups) {
            if (g == labels[i]) continue;
            double m = 0.0;
            for (auto j : members) m += dist(i, j);
            b = std::min(b, m / static_cast<double>(members.size()));
        }
        total += (b - a) / std::max(a, b);
    }
    return total / static_cast<double>(pts.size());
}

}  // namespace

TEST(EmbeddingSet, Validation) {
    EXPECT_THROW(EmbeddingSet("e", EmbeddingLevel::token, 2, {{"a", EmbeddingCategory::kelvin_value, {1, 2}}}),
                 ValidationError);
    EXPECT_THROW(EmbeddingSet("e", EmbeddingLevel::token, 2,
                              {{"a", EmbeddingCategory::kelvin_value, {1, 2}},
                               {"a", EmbeddingCategory::kelvin_value, {1, 3}}}),
                 ValidationError);
    EXPECT_THROW(EmbeddingSet("e", EmbeddingLevel::token, 2,
                              {{"a", EmbeddingCategory::kelvin_value, {1, 2}},
                               {"b", EmbeddingCategory::kelvin_value, {NAN, 3}}}),
                 ValidationError);
    const auto s = small_set();
    EXPECT_EQ(s.find("2850K"), 1u);
    EXPECT_FALSE(s.find("nope"));
    EXPECT_EQ(s.matrix()(1, 2), -0.25);
}

TEST(EmbeddingIo, LoadsPythonWrittenFixture) {
    const auto sets = load_embeddings(lumikit::testing::test_data("embed/synthetic_token.json"));
    ASSERT_EQ(sets.size(), 1u);
    EXPECT_EQ(sets[0].encoder_id(), "synthetic-vit");
    EXPECT_EQ(sets[0].level(), EmbeddingLevel::token);
    EXPECT_EQ(sets[0].dim(), 32);
    EXPECT_EQ(sets[0].size(), 29u);
}

TEST(EmbeddingIo, RoundTripIsByteIdentical) {
    TempDir dir("embed_rt");
    const auto src = lumikit::testing::test_data("embed/synthetic_token.json");
    const auto sets = load_embeddings(src);
    write_embeddings(sets[0], dir / "copy.json");
    EXPECT_EQ(read_file_bytes(dir / "copy.f32"),
              read_file_bytes(lumikit::testing::test_data("embed/synthetic_token.f32")));
    const auto again = load_embeddings(dir / "copy.json");
    EXPECT_EQ(again[0].matrix(), sets[0].matrix());
}

class EmbeddingIoErrors : public ::testing::Test {
protected:
    void SetUp() override {
        write_embeddings(small_set(), dir_ / "m.json");
        manifest_ = read_json(dir_ / "m.json");
    }
    void rewrite() { write_text_file(dir_ / "m.json", manifest_.dump()); }
    std::string load_error() {
        try {
            load_embeddings(dir_ / "m.json");
        } catch (const ValidationError& e) {
            return e.what();
        }
        return {};
    }
    TempDir dir_{"embed_err"};
    nlohmann::json manifest_;
};

TEST_F(EmbeddingIoErrors, ShortRowNamesLabel) {
    auto bytes = read_file_bytes(dir_ / "m.f32");
    bytes.resize(bytes.size() - 4);
    write_file_bytes(dir_ / "m.f32", bytes);
    manifest_["checksum"] = sha256_hex(bytes);
    rewrite();
    const auto msg = load_error();
    EXPECT_NE(msg.find("2850"), std::string::npos) << msg;
    EXPECT_NE(msg.find("offset"), std::string::npos) << msg;
}

TEST_F(EmbeddingIoErrors, ChecksumMismatch) {
    manifest_["checksum"] = std::string(64, '0');
    rewrite();
    EXPECT_NE(load_error().find("checksum"), std::string::npos);
}

TEST_F(EmbeddingIoErrors, UnknownCategory) {
    manifest_["items"][1]["category"] = "colour_word";
    rewrite();
    EXPECT_NE(load_error().find("colour_word"), std::string::npos);
}

TEST_F(EmbeddingIoErrors, EmptyItems) {
    manifest_["items"] = nlohmann::json::array();
    manifest_["count"] = 0;
    rewrite();
    EXPECT_FALSE(load_error().empty());
}

TEST_F(EmbeddingIoErrors, DimMismatch) {
    manifest_["dim"] = 4;
    rewrite();
    EXPECT_FALSE(load_error().empty());
}

TEST_F(EmbeddingIoErrors, MissingDataFileIsIoError) {
    std::filesystem::remove(dir_ / "m.f32");
    EXPECT_THROW(load_embeddings(dir_ / "m.json"), IoError);
}

TEST(Pca, RankOneData) {
    Eigen::MatrixXd x(6, 3);
    for (int i = 0; i < 6; ++i) x.row(i) = (i - 2.5) * Eigen::RowVector3d(1.0, 2.0, -0.5) + Eigen::RowVector3d(3, 3, 3);
    const auto r = pca_project(x, 2);
    EXPECT_NEAR(r.explained_variance_ratio[0], 1.0, 1e-9);
    EXPECT_NEAR(r.explained_variance_ratio[1], 0.0, 1e-9);
    const Eigen::MatrixXd gram = r.directions.transpose() * r.directions;
    EXPECT_TRUE(gram.isApprox(Eigen::MatrixXd::Identity(2, 2), 1e-10));
}

TEST(Pca, PointPair) {
    Eigen::MatrixXd x(2, 2);
    x << 1, 0, -1, 0;
    const auto r = pca_project(x, 1);
    EXPECT_NEAR(r.directions(0, 0), 1.0, 1e-12);
    EXPECT_NEAR(r.directions(1, 0), 0.0, 1e-12);
    EXPECT_NEAR(r.projections(0, 0), 1.0, 1e-12);
    EXPECT_NEAR(r.projections(1, 0), -1.0, 1e-12);
}

TEST(Pca, Errors) {
    Eigen::MatrixXd same = Eigen::MatrixXd::Ones(4, 3);
    EXPECT_THROW(pca_project(same, 1), DegenerateError);
    Eigen::MatrixXd x = Eigen::MatrixXd::Random(3, 5);
    EXPECT_THROW(pca_project(x, 3), ValidationError);
    EXPECT_THROW(pca_project(x, 0), ValidationError);
}

TEST(Pca, FixtureMatchesOracles) {
    const auto j = read_json(lumikit::testing::test_data("pca_5x4.json"));
    Eigen::MatrixXd x(5, 4);
    for (int i = 0; i < 5; ++i) {
        for (int k = 0; k < 4; ++k) x(i, k) = j["data"][i][k].get<double>();
    }
    const auto r = pca_project(x, 4);
    for (int i = 0; i < 5; ++i) {
        for (int k = 0; k < 4; ++k) {
            EXPECT_NEAR(r.projections(i, k), j["projections"][i][k].get<double>(), 1e-8) << i << "," << k;
        }
    }
    for (int k = 0; k < 4; ++k) {
        EXPECT_NEAR(r.eigenvalues[k], j["eigenvalues"][k].get<double>(), 1e-8);
    }

    // Second oracle: SVD of the centred data.
    const Eigen::MatrixXd c = x.rowwise() - x.colwise().mean();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(c, Eigen::ComputeThinV);
    for (int k = 0; k < 4; ++k) {
        Eigen::VectorXd v = svd.matrixV().col(k);
        Eigen::Index arg;
        v.cwiseAbs().maxCoeff(&arg);
        if (v(arg) < 0) v = -v;
        const double eig = svd.singularValues()(k) * svd.singularValues()(k) / 4.0;
        EXPECT_NEAR(r.eigenvalues[k], eig, 1e-8);
        if (k < 3) EXPECT_TRUE(r.directions.col(k).isApprox(v, 1e-8)) << k;
    }
}

TEST(Pca, WideDataUsesGramRoute) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n;
    Eigen::MatrixXd x(6, 40);
    for (int i = 0; i < x.rows(); ++i) {
        for (int k = 0; k < x.cols(); ++k) x(i, k) = n(rng);
    }
    const auto r = pca_project(x, 3);
    const Eigen::MatrixXd gram = r.directions.transpose() * r.directions;
    EXPECT_TRUE(gram.isApprox(Eigen::MatrixXd::Identity(3, 3), 1e-10));
    const Eigen::MatrixXd c = x.rowwise() - x.colwise().mean();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(c);
    for (int k = 0; k < 3; ++k) {
        EXPECT_NEAR(r.eigenvalues[k], svd.singularValues()(k) * svd.singularValues()(k) / 5.0, 1e-9);
    }
    for (std::size_t k = 1; k < r.explained_variance_ratio.size(); ++k) {
        EXPECT_LE(r.explained_variance_ratio[k], r.explained_variance_ratio[k - 1]);
    }
}

TEST(Pca, TranslationAndRotationInvariance) {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> n;
    Eigen::MatrixXd x(10, 4);
    for (int i = 0; i < 10; ++i) {
        for (int k = 0; k < 4; ++k) x(i, k) = n(rng) * (k + 1);
    }
    const auto base = pca_project(x, 2);
    const Eigen::MatrixXd shifted = x.rowwise() + Eigen::RowVectorXd::Constant(4, 7.5);
    const auto t = pca_project(shifted, 2);
    EXPECT_TRUE(t.projections.isApprox(base.projections, 1e-10));
    Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(Eigen::MatrixXd::Random(4, 4)).householderQ();
    const auto rot = pca_project(x * q, 2);
    for (int k = 0; k < 2; ++k) {
        EXPECT_NEAR(rot.explained_variance_ratio[k], base.explained_variance_ratio[k], 1e-10);
    }
}

TEST(Silhouette, FourPointCase) {
    Eigen::MatrixXd p(4, 1);
    p << 0.0, 0.1, 10.0, 10.1;
    const std::vector<int> g{0, 0, 1, 1};
    const double s = silhouette_score(p, g, DistanceMetric::euclidean);
    EXPECT_NEAR(s, 0.9900, 1e-4);
    EXPECT_EQ(s, silhouette_oracle({{0.0}, {0.1}, {10.0}, {10.1}}, g, false));
}

TEST(Silhouette, EquidistantIsZeroAndSwapSymmetric) {
    Eigen::MatrixXd p(3, 3);
    p << 1, 0, 0, 0, 1, 0, 0, 0, 1;
    EXPECT_NEAR(silhouette_score(p, {0, 0, 1}, DistanceMetric::euclidean), 0.0, 1e-15);
    Eigen::MatrixXd q = Eigen::MatrixXd::Random(8, 3);
    const std::vector<int> a{0, 0, 0, 1, 1, 1, 1, 0};
    const std::vector<int> b{1, 1, 1, 0, 0, 0, 0, 1};
    EXPECT_EQ(silhouette_score(q, a, DistanceMetric::euclidean), silhouette_score(q, b, DistanceMetric::euclidean));
}

TEST(Silhouette, SingletonScoresZero) {
    Eigen::MatrixXd p(3, 1);
    p << 0.0, 0.2, 5.0;
    const double s = silhouette_score(p, {0, 0, 1}, DistanceMetric::euclidean);
    EXPECT_EQ(s, silhouette_oracle({{0.0}, {0.2}, {5.0}}, {0, 0, 1}, false));
}

TEST(Silhouette, CosineScaleInvariant) {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> n;
    Eigen::MatrixXd p(12, 5);
    for (int i = 0; i < 12; ++i) {
        for (int k = 0; k < 5; ++k) p(i, k) = n(rng) + (i < 6 ? 2.0 : -2.0);
    }
    std::vector<int> g(12);
    for (int i = 0; i < 12; ++i) g[i] = i % 3;
    Eigen::MatrixXd scaled = p;
    for (int i = 0; i < 12; ++i) scaled.row(i) *= 0.5 + i;
    EXPECT_NEAR(silhouette_score(p, g), silhouette_score(scaled, g), 1e-12);
}

TEST(Silhouette, MatchesBruteForceAndReferenceOnFixture) {
    const auto set = load_embeddings(lumikit::testing::test_data("embed/synthetic_token.json"))[0];
    const auto configs = parse_cluster_configs(read_text_file(lumikit::testing::test_data("embed/silhouette_configs.json")));
    const auto golden = read_json(lumikit::testing::test_data("embed/silhouette_golden.json"));
    ASSERT_EQ(configs.size(), golden["scores"].size());
    const auto m = set.matrix();
    for (std::size_t c = 0; c < configs.size(); ++c) {
        const auto labels = resolve_groups(set, configs[c]);
        std::vector<std::vector<double>> pts;
        std::vector<int> kept;
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (labels[i] < 0) continue;
            std::vector<double> row(static_cast<std::size_t>(m.cols()));
            for (Eigen::Index k = 0; k < m.cols(); ++k) row[k] = m(i, k);
            pts.push_back(std::move(row));
            kept.push_back(labels[i]);
        }
        for (auto metric : {DistanceMetric::cosine, DistanceMetric::euclidean}) {
            const bool cos = metric == DistanceMetric::cosine;
            const double s = silhouette_score(set, configs[c], metric);
            EXPECT_EQ(s, silhouette_oracle(pts, kept, cos)) << configs[c].name;
            EXPECT_NEAR(s, golden["scores"][c][cos ? "cosine" : "euclidean"].get<double>(), 1e-9)
                << configs[c].name;
        }
    }
}

TEST(Silhouette, FixtureEncodesKelvinNearNumerals) {
    const auto set = load_embeddings(lumikit::testing::test_data("embed/synthetic_token.json"))[0];
    const auto configs = parse_cluster_configs(read_text_file(lumikit::testing::test_data("embed/silhouette_configs.json")));
    auto by_name = [&](const std::string& n) {
        for (const auto& c : configs) {
            if (c.name == n) return silhouette_score(set, c);
        }
        throw std::runtime_error("missing config " + n);
    };
    EXPECT_LT(by_name("Kelvin vs General Numeric"), by_name("Kelvin vs Rest"));
}

TEST(ClusterConfig, ParseAndResolveErrors) {
    EXPECT_THROW(parse_cluster_configs("{\"configs\":[{\"name\":\"x\",\"groups\":{\"a\":[\"t\"]}}]}"),
                 ValidationError);
    EXPECT_THROW(parse_cluster_configs("not json"), ValidationError);
    const auto set = small_set();
    ClusterConfig missing{"m", {{"a", {"tungsten"}}, {"b", {"daylight"}}}};
    try {
        resolve_groups(set, missing);
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("daylight"), std::string::npos);
    }
    ClusterConfig overlap{"o", {{"a", {"tungsten", "2850"}}, {"b", {"2850"}}}};
    EXPECT_THROW(resolve_groups(set, overlap), ValidationError);
    ClusterConfig selector{"s", {{"a", {"@named_illuminant"}}, {"b", {"@kelvin_value", "2850"}}}};
    EXPECT_EQ(resolve_groups(set, selector), (std::vector<int>{0, 1, 1}));
    ClusterConfig bad_cat{"s", {{"a", {"@colour"}}, {"b", {"2850"}}}};
    EXPECT_THROW(resolve_groups(set, bad_cat), ValidationError);
}

TEST(ClusterConfig, DefaultFileHasFourConfigs) {
    const auto configs = parse_cluster_configs(read_text_file(lumikit::testing::repo_data("probe_configs.json")));
    ASSERT_EQ(configs.size(), 4u);
    const auto set = load_embeddings(lumikit::testing::test_data("embed/synthetic_token.json"))[0];
    for (const auto& c : configs) {
        const double s = silhouette_score(set, c);
        EXPECT_GE(s, -1.0);
        EXPECT_LE(s, 1.0);
    }
}

TEST(ProbeSuite, CardinalityAndCellErrors) {
    const auto set = small_set();
    ClusterConfig ok{"ok", {{"a", {"tungsten"}}, {"b", {"2850K", "2850"}}}};
    ClusterConfig bad{"bad", {{"a", {"tungsten"}}, {"b", {"missing"}}}};
    const auto one = run_probe_suite({set}, {ok});
    ASSERT_EQ(one.sets.size(), 1u);
    EXPECT_EQ(one.sets[0].silhouettes.size(), 1u);
    EXPECT_TRUE(one.sets[0].pca.has_value());
    const auto two = run_probe_suite({set}, {ok, bad});
    EXPECT_TRUE(two.sets[0].silhouettes[0].score.has_value());
    EXPECT_FALSE(two.sets[0].silhouettes[1].score.has_value());
    EXPECT_NE(two.sets[0].silhouettes[1].error.find("missing"), std::string::npos);
    const auto j = probe_report_to_json(two);
    EXPECT_EQ(j["metric"], "cosine");
    EXPECT_TRUE(j["sets"][0]["silhouettes"][1]["score"].is_null());
}

TEST(ProbeSuite, DeterministicAcrossThreadsAndPlots) {
    auto sets = load_embeddings(lumikit::testing::test_data("embed/synthetic_token.json"));
    auto more = load_embeddings(lumikit::testing::test_data("embed/synthetic_sentence.json"));
    sets.push_back(more[0]);
    const auto configs = parse_cluster_configs(read_text_file(lumikit::testing::repo_data("probe_configs.json")));
    TempDir dir("probe");
    std::string ref;
    for (int threads : {1, 4, 8}) {
        ProbeOptions opts;
        opts.threads = threads;
        opts.plot_dir = dir / ("plots" + std::to_string(threads));
        const auto text = probe_report_to_json(run_probe_suite(sets, configs, opts)).dump(2);
        if (ref.empty()) ref = text;
        EXPECT_EQ(text, ref);
    }
    EXPECT_EQ(read_file_bytes(dir / "plots1" / "synthetic-vit_token_pca.png"),
              read_file_bytes(dir / "plots8" / "synthetic-vit_token_pca.png"));
}
