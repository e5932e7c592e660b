#include <doctest.h>

#include <cmath>
#include <random>

#include "aldag/infotheo.hpp"
#include "oracles.hpp"

using namespace aldag;

namespace {

CategoricalDataset from_codes(std::vector<int> cards, std::vector<int> codes) {
    std::vector<VariableMeta> vars(cards.size());
    for (std::size_t j = 0; j < cards.size(); ++j) {
        vars[j].name = "V" + std::to_string(j + 1);
        for (int c = 0; c < cards[j]; ++c) vars[j].levels.push_back(std::to_string(c));
    }
    return CategoricalDataset(std::move(vars), std::move(codes));
}

}  // namespace

TEST_SUITE_BEGIN("infotheo");

TEST_CASE("entropy of a constant column is zero") {
    const auto data = from_codes({2}, {0, 0, 0, 0});
    CHECK(empirical_entropy(data, std::vector<int>{0}) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("entropy of a uniform binary column is ln 2") {
    const auto data = from_codes({2}, {0, 1});
    CHECK(empirical_entropy(data, std::vector<int>{0}) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("entropy matches a direct frequency tally") {
    std::mt19937_64 rng(23);
    std::vector<int> codes(20);
    std::array<int, 3> tally{0, 0, 0};
    for (auto& c : codes) {
        c = std::uniform_int_distribution<int>(0, 2)(rng);
        ++tally[static_cast<std::size_t>(c)];
    }
    const auto data = from_codes({3}, std::move(codes));
    double expected = 0.0;
    for (int t : tally)
        if (t > 0) expected -= (t / 20.0) * std::log(t / 20.0);
    CHECK(empirical_entropy(data, std::vector<int>{0}) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("cmi vanishes on an exactly independent table") {
    const auto data = from_codes({2, 2}, {0, 0, 0, 1, 1, 0, 1, 1});
    CHECK(conditional_mutual_information(data, 0, 1, std::vector<int>{}).value ==
          doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("cmi of a deterministic copy is ln 2") {
    const auto data = from_codes({2, 2}, {0, 0, 1, 1});
    CHECK(conditional_mutual_information(data, 0, 1, std::vector<int>{}).value ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("conditional cmi matches the brute-force triple sum") {
    const auto data = from_codes({2, 2, 2}, {0, 0, 0,  //
                                             0, 1, 0,  //
                                             1, 0, 0,  //
                                             1, 1, 1,  //
                                             0, 0, 1,  //
                                             1, 1, 1,  //
                                             1, 0, 1,  //
                                             0, 1, 0});
    const double got = conditional_mutual_information(data, 0, 1, std::vector<int>{2}).value;
    CHECK(got == doctest::Approx(oracles::brute_cmi(data, 0, 1, {2})).epsilon(1e-12));
    CHECK(got >= -1e-12);
}

TEST_CASE("cmi is symmetric in its first two arguments") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        const CategoricalDataset data = oracles::random_dataset(rng, 4, 30);
        const std::vector<int> cond{3};
        const double ab = conditional_mutual_information(data, 0, 1, cond).value;
        const double ba = conditional_mutual_information(data, 1, 0, cond).value;
        CHECK(std::abs(ab - ba) <= 1e-12);
    }
}

TEST_CASE("cmi equals the entropy decomposition on random data") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const CategoricalDataset data = oracles::random_dataset(rng, 4, 40);
        const std::vector<int> c{2, 3};
        const std::vector<int> ac{0, 2, 3};
        const std::vector<int> bc{1, 2, 3};
        const std::vector<int> abc{0, 1, 2, 3};
        const double decomposition = empirical_entropy(data, ac) + empirical_entropy(data, bc) -
                                     empirical_entropy(data, abc) - empirical_entropy(data, c);
        const double direct = conditional_mutual_information(data, 0, 1, c).value;
        CHECK(std::abs(direct - decomposition) <= 1e-10);
        CHECK(direct >= -1e-10);
    }
}

TEST_CASE("cmi is exactly zero when the joint factorizes given c") {
    // Within each level of V3 the (V1, V2) counts form an outer product,
    // so every log ratio in the sum is exactly ln 1.
    std::vector<int> codes;
    auto emit = [&](int x, int y, int z, int copies) {
        for (int i = 0; i < copies; ++i) {
            codes.push_back(x);
            codes.push_back(y);
            codes.push_back(z);
        }
    };
    // z = 0 block: row sums (1,2) x column sums (1,1).
    emit(0, 0, 0, 1);
    emit(0, 1, 0, 1);
    emit(1, 0, 0, 2);
    emit(1, 1, 0, 2);
    // z = 1 block: row sums (3,1) x column sums (1,2).
    emit(0, 0, 1, 3);
    emit(0, 1, 1, 6);
    emit(1, 0, 1, 1);
    emit(1, 1, 1, 2);
    const auto data = from_codes({2, 2, 2}, std::move(codes));
    CHECK(conditional_mutual_information(data, 0, 1, std::vector<int>{2}).value == 0.0);
}

TEST_CASE("cmi rejects overlapping arguments") {
    const auto data = from_codes({2, 2}, {0, 0, 1, 1});
    CHECK_THROWS_AS(conditional_mutual_information(data, 0, 0, std::vector<int>{}),
                    std::invalid_argument);
    CHECK_THROWS_AS(conditional_mutual_information(data, 0, 1, std::vector<int>{1}),
                    std::invalid_argument);
}

TEST_SUITE_END();
