#include <vector>

#include "doctest.h"
#include "topolm/classify.hpp"
#include "topolm/rng.hpp"

using namespace topolm;

namespace {

EmbeddingMatrix from_rows(const std::vector<std::vector<double>>& rows) {
    EmbeddingMatrix x(static_cast<std::int32_t>(rows.size()),
                      rows.empty() ? 0 : static_cast<std::int32_t>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        std::copy(rows[i].begin(), rows[i].end(), x.row(static_cast<std::int32_t>(i)));
    return x;
}

}  // namespace

TEST_CASE("1-nn reproduces training labels on training inputs") {
    const auto x = from_rows({{0.0, 1.0}, {2.0, 0.5}, {-1.0, -1.0}, {4.0, 4.0}});
    const LabelVector y{0, 1, 0, 2};
    const ClassifierModel m = train_knn(x, y, {1});
    CHECK(predict(m, x) == y);
}

TEST_CASE("knn majority vote with tie to the smallest class id") {
    const auto train = from_rows({{-1.0}, {1.0}});
    const ClassifierModel m = train_knn(train, {1, 0}, {2});
    // symmetric 2-NN tie between classes 0 and 1
    const auto probe = from_rows({{0.0}});
    CHECK(predict(m, probe) == LabelVector{0});
}

TEST_CASE("forest fits linearly separated data") {
    std::vector<std::vector<double>> rows;
    LabelVector y;
    Rng rng(77);
    for (int i = 0; i < 20; ++i) {
        const double v = rng.next_unit();
        rows.push_back({i < 10 ? v : v + 5.0});
        y.push_back(i < 10 ? 0 : 1);
    }
    const auto x = from_rows(rows);
    const ClassifierModel m = train_random_forest(x, y, {50, 8}, 9);
    CHECK(predict(m, x) == y);  // training accuracy 1.0
}

TEST_CASE("forests are reproducible from their seed") {
    Rng rng(3);
    EmbeddingMatrix x(30, 3);
    for (double& v : x.data) v = rng.next_unit();
    LabelVector y(30);
    for (int i = 0; i < 30; ++i) y[i] = i % 3;

    const ClassifierModel a = train_random_forest(x, y, {20, 6}, 42);
    const ClassifierModel b = train_random_forest(x, y, {20, 6}, 42);
    REQUIRE(a.trees.size() == b.trees.size());
    for (std::size_t t = 0; t < a.trees.size(); ++t) {
        REQUIRE(a.trees[t].size() == b.trees[t].size());
        for (std::size_t n = 0; n < a.trees[t].size(); ++n) {
            CHECK(a.trees[t][n].feature == b.trees[t][n].feature);
            CHECK(a.trees[t][n].threshold == b.trees[t][n].threshold);
            CHECK(a.trees[t][n].label == b.trees[t][n].label);
        }
    }
}

TEST_CASE("predict validates dimensions and handles empty input") {
    const auto x = from_rows({{0.0, 1.0}, {1.0, 0.0}});
    const ClassifierModel m = train_knn(x, {0, 1}, {1});
    CHECK(predict(m, EmbeddingMatrix(0, 2)).empty());
    CHECK_THROWS_AS(predict(m, from_rows({{1.0, 2.0, 3.0}})), std::invalid_argument);
    CHECK_THROWS_AS(train_knn(EmbeddingMatrix(0, 2), {}, {1}), std::invalid_argument);
}
