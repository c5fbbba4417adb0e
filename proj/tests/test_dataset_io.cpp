#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "nondecomp/dataset_io.hpp"
#include "oracles.hpp"

using namespace nondecomp;

namespace {

SparseDataset parse(const std::string &text) {
    std::istringstream in(text);
    return parse_dataset(in);
}

std::string write(const SparseDataset &d) {
    std::ostringstream out;
    write_dataset(d, out);
    return out.str();
}

std::string parse_error(const std::string &text) {
    try {
        parse(text);
    } catch (const InputError &e) {
        return e.what();
    }
    return "";
}

SparseDataset random_dataset(std::mt19937_64 &rng) {
    std::uniform_int_distribution<int> dim(1, 9);
    std::bernoulli_distribution coin(0.35);
    std::normal_distribution<double> nd;
    SparseDataset d;
    d.n = dim(rng);
    d.d = dim(rng);
    d.L = dim(rng);
    d.features.resize(d.n);
    d.labels.resize(d.n);
    for (int i = 0; i < d.n; ++i) {
        for (int a = 0; a < d.d; ++a)
            if (coin(rng))
                d.features[i].push_back({a, nd(rng)});
        for (int j = 0; j < d.L; ++j)
            if (coin(rng))
                d.labels[i].push_back(j);
    }
    return d;
}

} // namespace

TEST_CASE("parse_dataset") {
    SUBCASE("hand-parsed example") {
        const auto d = parse("2 3 2\n0 0:1.0 2:-0.5\n1 1:2.0\n");
        CHECK(d.n == 2);
        CHECK(d.d == 3);
        CHECK(d.L == 2);
        CHECK(d.labels[0] == std::vector<int>{0});
        CHECK(d.labels[1] == std::vector<int>{1});
        REQUIRE(d.features[0].size() == 2);
        CHECK(d.features[0][1] == std::pair<int, double>{2, -0.5});
        const auto X = d.dense_features();
        CHECK(X(0, 0) == 1.0);
        CHECK(X(0, 1) == 0.0);
        CHECK(X(1, 1) == 2.0);
        const auto Y = d.label_matrix();
        CHECK(Y(0, 0) == 1.0);
        CHECK(Y(0, 1) == 0.0);
    }
    SUBCASE("empty label field and multi-label rows") {
        const auto d = parse("2 2 3\n 0:1\n2,0 1:3\n");
        CHECK(d.labels[0].empty());
        CHECK(d.labels[1] == std::vector<int>{0, 2});
    }
    SUBCASE("row with no features") {
        const auto d = parse("1 2 2\n1\n");
        CHECK(d.labels[0] == std::vector<int>{1});
        CHECK(d.features[0].empty());
    }
    SUBCASE("errors carry the line number") {
        CHECK(parse_error("2 3 2\n0 0:1 0:2\n1 1:1\n").find("line 2") != std::string::npos);
        CHECK(parse_error("2 3 2\n0 0:1\n1 1:x\n").find("line 3") != std::string::npos);
        CHECK(parse_error("2 3 2\n0 3:1\n1 1:1\n").find("line 2") != std::string::npos);
        CHECK(parse_error("2 3 2\n5 0:1\n1 1:1\n").find("line 2") != std::string::npos);
        CHECK(parse_error("2 3 2\n0,0 0:1\n1 1:1\n").find("duplicate") != std::string::npos);
        CHECK_FALSE(parse_error("2 3 2\n0 0:1\n").empty());
        CHECK_FALSE(parse_error("2 3\n").empty());
        CHECK_FALSE(parse_error("1 3 2\n0 0:1\n1 1:1\n").empty());
        CHECK_FALSE(parse_error("").empty());
    }
}

TEST_CASE("dataset write and parse round-trip") {
    std::mt19937_64 rng(31);
    for (int rep = 0; rep < 50; ++rep) {
        const auto d = random_dataset(rng);
        const std::string text = write(d);
        const auto back = parse(text);
        CHECK(back.n == d.n);
        CHECK(back.d == d.d);
        CHECK(back.L == d.L);
        CHECK(back.labels == d.labels);
        CHECK(back.features == d.features);
        CHECK(write(back) == text);
    }
    const std::string canonical = "2 3 2\n0 0:1 2:-0.5\n1 1:2\n";
    CHECK(write(parse(canonical)) == canonical);
    CHECK(write(parse("1 2 2\n 0:0.25\n")) == "1 2 2\n 0:0.25\n");
}

TEST_CASE("dataset_from_dense") {
    Eigen::MatrixXd X(2, 3), Y(2, 2);
    X << 1, 0, -0.5, 0, 2, 0;
    Y << 1, 0, 0, 1;
    const auto d = dataset_from_dense(X, Y);
    CHECK(d.dense_features() == X);
    CHECK(d.label_matrix() == Y);
    CHECK(d.features[0].size() == 2);
    Y(0, 0) = 0.5;
    CHECK_THROWS_AS(dataset_from_dense(X, Y), InputError);
}

TEST_CASE("mask_observations") {
    SUBCASE("ratio 1 covers every cell once") {
        std::mt19937_64 rng(32);
        const auto d = random_dataset(rng);
        const auto obs = mask_observations(d, 1.0, OmegaDistribution::uniform(), 1);
        CHECK(obs.size() == static_cast<std::size_t>(d.n) * d.L);
        std::set<std::pair<int, int>> seen;
        const auto Y = d.label_matrix();
        for (const auto &e : obs.entries()) {
            seen.insert({e.row, e.col});
            CHECK(e.y == Y(e.row, e.col));
        }
        CHECK(seen.size() == obs.size());
    }
    SUBCASE("ratio 0.2 on 1000 x 100") {
        const Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(1000, 100);
        const auto obs = mask_observations(Y, 0.2, OmegaDistribution::uniform(), 5);
        CHECK(obs.size() == 20000);
    }
    SUBCASE("fixed seed gives the same mask") {
        const Eigen::MatrixXd Y = Eigen::MatrixXd::Ones(40, 30);
        const auto a = mask_observations(Y, 0.3, OmegaDistribution::uniform(), 9);
        const auto b = mask_observations(Y, 0.3, OmegaDistribution::uniform(), 9);
        CHECK(a.cells() == b.cells());
    }
    SUBCASE("ratio out of range") {
        const Eigen::MatrixXd Y = Eigen::MatrixXd::Ones(4, 3);
        CHECK_THROWS_AS(mask_observations(Y, 0.0, OmegaDistribution::uniform(), 1), InputError);
        CHECK_THROWS_AS(mask_observations(Y, 1.5, OmegaDistribution::uniform(), 1), InputError);
    }
}

TEST_CASE("model save and load") {
    std::mt19937_64 rng(33);
    SUBCASE("dense 2x2") {
        Eigen::MatrixXd W(2, 2);
        W << 0.1, -1.0 / 3, 2.5e-17, 7;
        const Model m = DenseModel{W, 0.125, std::nullopt};
        std::stringstream s;
        save_model(m, s);
        const Model back = load_model(s);
        const auto &dm = std::get<DenseModel>(back);
        CHECK(dm.W == W);
        CHECK(*dm.theta == 0.125);
        CHECK_FALSE(dm.gamma_clip);
        const Eigen::MatrixXd X = oracle::gaussian_matrix(5, 2, rng);
        CHECK(predict_scores(X, back) == predict_scores(X, m));
    }
    SUBCASE("factored k = 3") {
        const FactoredModel f{oracle::gaussian_matrix(6, 3, rng), oracle::gaussian_matrix(4, 3, rng),
                              std::nullopt, 2.0};
        std::stringstream s;
        save_model(f, s);
        const Model back = load_model(s);
        const auto &fm = std::get<FactoredModel>(back);
        CHECK_FALSE(fm.theta);
        CHECK(*fm.gamma_clip == 2.0);
        const Eigen::MatrixXd X = oracle::gaussian_matrix(9, 6, rng);
        CHECK((predict_scores(X, back) - predict_scores(X, f)).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("corrupted or truncated input") {
        std::stringstream s;
        save_model(DenseModel{Eigen::MatrixXd::Ones(2, 3), std::nullopt, std::nullopt}, s);
        const std::string good = s.str();
        std::string bad_header = good;
        bad_header.replace(0, 9, "xondecomp");
        std::istringstream b1(bad_header);
        CHECK_THROWS_AS(load_model(b1), InputError);
        std::istringstream b2(good.substr(0, good.size() - 4));
        CHECK_THROWS_AS(load_model(b2), InputError);
        std::string bad_kind = good;
        bad_kind.replace(bad_kind.find("dense"), 5, "blob!");
        std::istringstream b3(bad_kind);
        CHECK_THROWS_AS(load_model(b3), InputError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_model_file("/nonexistent/dir/model.txt"), InputError);
        CHECK_THROWS_AS(read_dataset_file("/nonexistent/dir/data.txt"), InputError);
    }
}

TEST_CASE("results CSV") {
    const ResultTable one{{"algorithm1", "micro_f1", "test", 0.1 + 0.2, 0.01, "abc"}};
    std::ostringstream out;
    write_results_csv(one, out);
    const std::string text = out.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);
    CHECK(text.rfind("method,metric_name,split,value,stderr,config_hash\n", 0) == 0);

    std::mt19937_64 rng(34);
    std::normal_distribution<double> nd;
    ResultTable many;
    for (int k = 0; k < 20; ++k)
        many.push_back({"m" + std::to_string(k), "accuracy", "ratio=0.1", nd(rng) * 1e3,
                        std::abs(nd(rng)), "h"});
    std::stringstream s;
    write_results_csv(many, s);
    const auto back = parse_results_csv(s);
    REQUIRE(back.size() == many.size());
    for (std::size_t k = 0; k < many.size(); ++k) {
        CHECK(back[k].method == many[k].method);
        CHECK(std::abs(back[k].value - many[k].value) <= 1e-12 * std::abs(many[k].value));
        CHECK(back[k].std_error == many[k].std_error);
    }

    std::ostringstream sink;
    CHECK_THROWS_AS(write_results_csv({{"a,b", "m", "s", 1, 0, "h"}}, sink), InputError);
    CHECK_THROWS_AS(write_results_csv({{"a", "m", "s", NAN, 0, "h"}}, sink), InputError);
    CHECK_THROWS_AS(write_results_csv({{"a", "m", "s", 1, -1, "h"}}, sink), InputError);
}

TEST_CASE("SVG plot") {
    std::vector<PlotSeries> series{{"algorithm1", {}}, {"plugin", {}}};
    for (double r : {0.05, 0.1, 0.2, 0.3, 0.5}) {
        series[0].points.emplace_back(r, 0.9 + r / 10);
        series[1].points.emplace_back(r, 0.8 + r / 5);
    }
    std::ostringstream out;
    emit_plot(series, "sampling ratio", "micro_f1", out);
    const std::string svg = out.str();
    std::size_t count = 0;
    for (std::size_t p = svg.find("<polyline"); p != std::string::npos; p = svg.find("<polyline", p + 1))
        ++count;
    CHECK(count == 2);
    CHECK(svg.find("sampling ratio") != std::string::npos);
    CHECK(svg.find("micro_f1") != std::string::npos);
    CHECK(svg.rfind("<svg", 0) == 0);

    std::ostringstream again;
    emit_plot(series, "sampling ratio", "micro_f1", again);
    CHECK(again.str() == svg);

    std::ostringstream sink;
    CHECK_THROWS_AS(emit_plot({}, "x", "y", sink), InputError);
    CHECK_THROWS_AS(emit_plot({{"empty", {}}}, "x", "y", sink), InputError);
}

TEST_CASE("stable hash and number formatting") {
    CHECK(stable_hash("") == "cbf29ce484222325");
    CHECK(stable_hash("a") == "af63dc4c8601ec8c");
    CHECK(stable_hash("n=10\n") == stable_hash("n=10\n"));
    CHECK(stable_hash("n=10\n") != stable_hash("n=11\n"));
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(2.0) == "2");
    CHECK(std::stod(format_double(1.0 / 3)) == 1.0 / 3);
}
