#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>

#include "ciarisk/ahp.hpp"
#include "ciarisk/error.hpp"
#include "ciarisk/text.hpp"
#include "support/oracles.hpp"

using namespace ciarisk;
using namespace ciarisk::ahp;

namespace {

JudgmentMatrix matrix_of(std::vector<std::vector<double>> values) {
    JudgmentMatrix m;
    for (std::size_t i = 0; i < values.size(); ++i) m.labels.push_back("x" + std::to_string(i));
    m.values = std::move(values);
    return m;
}

Errc code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    throw std::logic_error("expected an Error");
}

}  // namespace

TEST_CASE("validation accepts reciprocal matrices and rejects broken ones") {
    CHECK(validate(matrix_of({{1.0, 3.0}, {1.0 / 3.0, 1.0}})).empty());
    CHECK(validate(matrix_of({{1, 5, 9}, {1.0 / 5, 1, 3}, {1.0 / 9, 1.0 / 3, 1}})).empty());

    CHECK(code_of([] { validate(matrix_of({{1.0, 2.0}, {3.0, 1.0}})); }) == Errc::not_reciprocal);
    CHECK(code_of([] { validate(matrix_of({{2.0, 3.0}, {1.0 / 3.0, 1.0}})); }) == Errc::bad_diagonal);
    CHECK(code_of([] { validate(matrix_of({{1.0, -3.0}, {-1.0 / 3.0, 1.0}})); }) ==
          Errc::non_positive_entry);
    CHECK(code_of([] { validate(matrix_of({{1.0, 3.0}})); }) == Errc::not_square);
    CHECK(code_of([] { validate(matrix_of({})); }) == Errc::not_square);
}

TEST_CASE("off-scale entries warn unless strict mode") {
    JudgmentMatrix m = matrix_of({{1.0, 2.5}, {1.0 / 2.5, 1.0}});
    auto warnings = validate(m, false);
    REQUIRE(warnings.size() == 2);  // entry and its reciprocal
    CHECK(code_of([&] { validate(m, true); }) == Errc::scale_violation);
}

TEST_CASE("column sums") {
    CHECK(column_sums(matrix_of({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}})) ==
          std::vector<double>{3.0, 3.0, 3.0});
    auto sums = column_sums(matrix_of({{1.0, 3.0}, {1.0 / 3.0, 1.0}}));
    CHECK(sums[0] == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(sums[1] == 4.0);
    CHECK(column_sums(matrix_of({{1.0}})) == std::vector<double>{1.0});
}

TEST_CASE("normalization divides by column sums") {
    auto uniform = normalize(matrix_of({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}}));
    for (const auto& row : uniform)
        for (double v : row) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    auto grid = normalize(matrix_of({{1.0, 3.0}, {1.0 / 3.0, 1.0}}));
    CHECK(grid[0][0] == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(grid[0][1] == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(grid[1][0] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(grid[1][1] == doctest::Approx(0.25).epsilon(1e-15));

    CHECK(code_of([] { normalize(matrix_of({{0.0, 0.0}, {0.0, 0.0}})); }) == Errc::zero_column);
}

TEST_CASE("normalized columns sum to one for random valid matrices") {
    test_support::Rng rng(11);
    for (int round = 0; round < 200; ++round) {
        auto m = test_support::random_saaty_matrix(rng, static_cast<std::size_t>(rng.uniform_int(2, 9)));
        auto grid = normalize(m);
        for (std::size_t j = 0; j < m.size(); ++j) {
            double sum = 0.0;
            for (std::size_t i = 0; i < m.size(); ++i) sum += grid[i][j];
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("priority vector from the shipped normalized grid") {
    std::ifstream in(std::filesystem::path(CIARISK_DATA_DIR) / "criteria_normalized_grid.txt");
    REQUIRE(in.good());
    std::vector<std::string> labels;
    std::vector<std::vector<double>> grid;
    std::string line;
    while (std::getline(in, line)) {
        auto trimmed = std::string(ciarisk::text::trim(line));
        if (trimmed.empty() || trimmed.front() == '#') continue;
        if (trimmed.starts_with("labels:")) {
            labels = ciarisk::text::split_ws(std::string_view(trimmed).substr(7));
            continue;
        }
        std::vector<double> row;
        for (const auto& token : ciarisk::text::split_ws(trimmed))
            row.push_back(ciarisk::text::parse_double(token, "grid entry"));
        grid.push_back(std::move(row));
    }
    REQUIRE(labels.size() == 5);
    REQUIRE(grid.size() == 5);

    PriorityVector weights = priority_vector_from_normalized(labels, grid);
    const double expected[5] = {0.055, 0.143, 0.248, 0.521, 0.032};
    double sum = 0.0;
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(std::abs(weights.weights[i] - expected[i]) <= 0.001);
        sum += weights.weights[i];
    }
    CHECK(sum >= 0.997);
    CHECK(sum <= 1.003);
}

TEST_CASE("priority vector simple grids") {
    auto uniform = priority_vector_from_normalized(
        {"a", "b", "c"}, {{1.0 / 3, 1.0 / 3, 1.0 / 3}, {1.0 / 3, 1.0 / 3, 1.0 / 3},
                          {1.0 / 3, 1.0 / 3, 1.0 / 3}});
    for (double w : uniform.weights) CHECK(w == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    auto two = priority_vector_from_normalized({"a", "b"}, {{0.75, 0.75}, {0.25, 0.25}});
    CHECK(two.weights[0] == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(two.weights[1] == doctest::Approx(0.25).epsilon(1e-15));

    CHECK(code_of([] {
        priority_vector_from_normalized({"a", "b"}, {{0.9, 0.5}, {0.3, 0.5}});
    }) == Errc::invariant_violation);
}

TEST_CASE("consistent matrices recover their weights exactly") {
    std::vector<double> w = {0.5, 0.3, 0.2};
    PriorityVector recovered = priority_vector(test_support::consistent_matrix(w));
    for (std::size_t i = 0; i < w.size(); ++i)
        CHECK(std::abs(recovered.weights[i] - w[i]) <= 1e-9);

    test_support::Rng rng(17);
    for (int round = 0; round < 50; ++round) {
        auto weights = test_support::random_weights(rng, static_cast<std::size_t>(rng.uniform_int(3, 7)));
        PriorityVector pv = priority_vector(test_support::consistent_matrix(weights));
        for (std::size_t i = 0; i < weights.size(); ++i)
            CHECK(std::abs(pv.weights[i] - weights[i]) <= 1e-9);
    }
}

TEST_CASE("priority weights always sum to one") {
    test_support::Rng rng(23);
    for (int round = 0; round < 100; ++round) {
        auto m = test_support::random_saaty_matrix(rng, static_cast<std::size_t>(rng.uniform_int(2, 8)));
        PriorityVector pv = priority_vector(m);
        CHECK(std::accumulate(pv.weights.begin(), pv.weights.end(), 0.0) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("ranking combines criteria and local weights") {
    SUBCASE("total indifference gives every alternative 1/k") {
        DecisionModel model;
        model.criteria = matrix_of({{1, 1}, {1, 1}});
        model.criteria.labels = {"c1", "c2"};
        JudgmentMatrix alt = matrix_of({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}});
        alt.labels = {"a", "b", "c"};
        model.alternatives = {alt, alt};
        PriorityVector ranking = rank_alternatives(model);
        for (double w : ranking.weights) CHECK(w == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    }
    SUBCASE("opposed preferences with equal criteria weights balance out") {
        DecisionModel model;
        model.criteria = matrix_of({{1, 1}, {1, 1}});
        model.criteria.labels = {"c1", "c2"};
        JudgmentMatrix first = matrix_of({{1.0, 9.0}, {1.0 / 9.0, 1.0}});
        first.labels = {"a", "b"};
        JudgmentMatrix second = matrix_of({{1.0, 1.0 / 9.0}, {9.0, 1.0}});
        second.labels = {"a", "b"};
        model.alternatives = {first, second};
        PriorityVector ranking = rank_alternatives(model);
        // Local weights are (0.9, 0.1) and (0.1, 0.9); equal criteria weights
        // average them to one half each.
        CHECK(ranking.weights[0] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(ranking.weights[1] == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("label sets must match across criteria") {
        DecisionModel model;
        model.criteria = matrix_of({{1, 1}, {1, 1}});
        model.criteria.labels = {"c1", "c2"};
        JudgmentMatrix first = matrix_of({{1, 1}, {1, 1}});
        first.labels = {"a", "b"};
        JudgmentMatrix second = matrix_of({{1, 1}, {1, 1}});
        second.labels = {"a", "zzz"};
        model.alternatives = {first, second};
        CHECK(code_of([&] { rank_alternatives(model); }) == Errc::label_mismatch);
    }
}

TEST_CASE("ranking is invariant under alternative permutations") {
    test_support::Rng rng(37);
    for (int round = 0; round < 30; ++round) {
        const std::size_t criteria_count = static_cast<std::size_t>(rng.uniform_int(2, 4));
        const std::size_t alt_count = static_cast<std::size_t>(rng.uniform_int(2, 5));
        DecisionModel model;
        model.criteria = test_support::random_saaty_matrix(rng, criteria_count);
        for (std::size_t c = 0; c < criteria_count; ++c)
            model.alternatives.push_back(test_support::random_saaty_matrix(rng, alt_count));

        PriorityVector base = rank_alternatives(model);

        std::vector<std::size_t> perm(alt_count);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng.engine());

        DecisionModel permuted = model;
        for (auto& alt : permuted.alternatives) {
            JudgmentMatrix p;
            p.labels.resize(alt_count);
            p.values.assign(alt_count, std::vector<double>(alt_count, 0.0));
            for (std::size_t i = 0; i < alt_count; ++i) {
                p.labels[i] = alt.labels[perm[i]];
                for (std::size_t j = 0; j < alt_count; ++j)
                    p.values[i][j] = alt.values[perm[i]][perm[j]];
            }
            alt = std::move(p);
        }

        PriorityVector shuffled = rank_alternatives(permuted);
        for (std::size_t i = 0; i < alt_count; ++i) {
            CHECK(shuffled.labels[i] == base.labels[perm[i]]);
            CHECK(shuffled.weights[i] == doctest::Approx(base.weights[perm[i]]).epsilon(1e-12));
        }
    }
}

TEST_CASE("argmax is robust to rescaling one criterion's local weights") {
    test_support::Rng rng(41);
    for (int round = 0; round < 30; ++round) {
        const std::size_t criteria_count = static_cast<std::size_t>(rng.uniform_int(2, 4));
        const std::size_t alt_count = static_cast<std::size_t>(rng.uniform_int(2, 5));
        DecisionModel model;
        model.criteria = test_support::random_saaty_matrix(rng, criteria_count);
        for (std::size_t c = 0; c < criteria_count; ++c)
            model.alternatives.push_back(test_support::random_saaty_matrix(rng, alt_count));

        PriorityVector criteria_weights = priority_vector(model.criteria);
        std::vector<PriorityVector> locals;
        for (const auto& alt : model.alternatives) locals.push_back(priority_vector(alt));

        auto combine = [&](const std::vector<PriorityVector>& local_vectors) {
            std::vector<double> global(alt_count, 0.0);
            for (std::size_t c = 0; c < criteria_count; ++c)
                for (std::size_t a = 0; a < alt_count; ++a)
                    global[a] += criteria_weights.weights[c] * local_vectors[c].weights[a];
            return global;
        };

        auto argmax = [](const std::vector<double>& v) {
            return std::max_element(v.begin(), v.end()) - v.begin();
        };

        std::vector<double> base = combine(locals);
        CHECK(argmax(base) ==
              argmax(rank_alternatives(model).weights));  // combine() mirrors production

        auto scaled = locals;
        const std::size_t c = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(criteria_count) - 1));
        const double k = rng.uniform(0.1, 10.0);
        double sum = 0.0;
        for (double& w : scaled[c].weights) {
            w *= k;
            sum += w;
        }
        for (double& w : scaled[c].weights) w /= sum;
        CHECK(argmax(combine(scaled)) == argmax(base));
    }
}

TEST_CASE("consistency ratio") {
    CHECK(consistency_ratio(matrix_of({{1.0, 7.0}, {1.0 / 7.0, 1.0}})) == 0.0);

    CHECK(consistency_ratio(test_support::consistent_matrix(std::vector<double>{0.5, 0.3, 0.2})) <=
          1e-9);

    // A deliberately cyclic judgment set: a > b > c but c > a.
    JudgmentMatrix cyclic = matrix_of({{1.0, 9.0, 1.0 / 9.0}, {1.0 / 9.0, 1.0, 9.0},
                                       {9.0, 1.0 / 9.0, 1.0}});
    CHECK(consistency_ratio(cyclic) > 0.1);

    JudgmentMatrix big;
    for (int i = 0; i < 11; ++i) big.labels.push_back("x" + std::to_string(i));
    big.values.assign(11, std::vector<double>(11, 1.0));
    CHECK(code_of([&] { consistency_ratio(big); }) == Errc::unsupported_size);
}

TEST_CASE("reciprocity closure holds for validated matrices") {
    test_support::Rng rng(53);
    for (int round = 0; round < 100; ++round) {
        auto m = test_support::random_saaty_matrix(rng, static_cast<std::size_t>(rng.uniform_int(2, 9)));
        validate(m);
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t j = 0; j < m.size(); ++j)
                CHECK(std::abs(m.values[i][j] * m.values[j][i] - 1.0) <= 1e-9);
    }
}

TEST_CASE("decision files parse with derived lower triangles") {
    std::istringstream in(R"(# comment
criteria: cost quality
alternatives: a b c
criteria-matrix:
1 3
- 1
matrix cost:
1 2 4
- 1 2
- - 1
matrix quality:
1 1/2 1/4
2 1 1/2
4 2 1
)");
    DecisionModel model = load_decision_model(in);
    CHECK(model.criteria.size() == 2);
    CHECK(model.criteria.values[1][0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    REQUIRE(model.alternatives.size() == 2);
    CHECK(model.alternatives[0].values[2][0] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(validate(model.alternatives[0]).empty());
    CHECK(validate(model.alternatives[1]).empty());
    PriorityVector ranking = rank_alternatives(model);
    CHECK(std::accumulate(ranking.weights.begin(), ranking.weights.end(), 0.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("decision file errors") {
    auto parse = [](const std::string& content) {
        std::istringstream in(content);
        return load_decision_model(in);
    };
    // missing alternative matrix
    CHECK(code_of([&] { parse("criteria: c1\nalternatives: a b\ncriteria-matrix:\n1\n"); }) ==
          Errc::parse_error);
    // matrix for unknown criterion
    CHECK(code_of([&] {
        parse("criteria: c1\nalternatives: a b\ncriteria-matrix:\n1\nmatrix nope:\n1 1\n1 1\n");
    }) == Errc::parse_error);
    // '-' on both sides of the diagonal
    CHECK(code_of([&] {
        parse("criteria: c1 c2\nalternatives: a b\ncriteria-matrix:\n1 -\n- 1\n"
              "matrix c1:\n1 1\n1 1\nmatrix c2:\n1 1\n1 1\n");
    }) == Errc::parse_error);
    // wrong row width
    CHECK(code_of([&] { parse("criteria: c1 c2\nalternatives: a\ncriteria-matrix:\n1 2 3\n"); }) ==
          Errc::parse_error);
}

TEST_CASE("shipped example decision file ranks cleanly") {
    std::ifstream in(std::filesystem::path(CIARISK_DATA_DIR) / "cloud_provider_judgments.txt");
    REQUIRE(in.good());
    DecisionModel model = load_decision_model(in);
    CHECK(validate(model.criteria).empty());  // all judgments on-scale
    PriorityVector ranking = rank_alternatives(model, true);
    CHECK(ranking.labels.size() == 3);
    CHECK(std::accumulate(ranking.weights.begin(), ranking.weights.end(), 0.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
}
