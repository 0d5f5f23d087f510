#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "gbsk/error.hpp"
#include "gbsk/hafnian.hpp"
#include "oracles.hpp"

using namespace gbsk;

namespace {

Matrix k_n(std::size_t n) {
    Matrix a(n, n, 1.0);
    for (std::size_t i = 0; i < n; i++) {
        a(i, i) = 0.0;
    }
    return a;
}

ErrorKind kind_of(const std::function<void()> &fn) {
    try {
        fn();
    } catch (const Error &e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::OutOfRange;
}

double double_factorial_odd(std::size_t n) {
    double r = 1.0;
    for (std::size_t k = n; k > 1; k -= 2) {
        r *= static_cast<double>(k);
    }
    return r;
}

Matrix random_symmetric_zero_diag(std::mt19937_64 &rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; i++) {
        for (std::size_t j = i + 1; j < n; j++) {
            a(i, j) = a(j, i) = u(rng);
        }
    }
    return a;
}

}  // namespace

TEST_CASE("pair partitions of 4 elements") {
    auto parts = pair_partitions(4);
    REQUIRE(parts.size() == 3);
    CHECK(parts[0] == SetPartition{{0, 1}, {2, 3}});
    CHECK(parts[1] == SetPartition{{0, 2}, {1, 3}});
    CHECK(parts[2] == SetPartition{{0, 3}, {1, 2}});
    CHECK(pair_partitions(0).size() == 1);
    CHECK(pair_partitions(0).front().empty());
    CHECK(pair_partitions(6).size() == 15);
}

TEST_CASE("pair partition counts and coverage") {
    for (std::size_t n : {0, 2, 4, 6, 8, 10}) {
        std::size_t seen = 0;
        for_each_pair_partition(n, [&](std::span<const Block> p) {
            seen++;
            std::vector<int> hit(n, 0);
            for (auto [u, v] : p) {
                CHECK(u < v);
                hit[u]++;
                hit[v]++;
            }
            CHECK(std::all_of(hit.begin(), hit.end(), [](int h) { return h == 1; }));
        });
        CHECK(static_cast<double>(seen) == double_factorial_odd(n - 1 + (n == 0 ? 2 : 0)));
        CHECK(pair_partition_count(n) == seen);
    }
    CHECK(kind_of([] { pair_partitions(3); }) == ErrorKind::OddSize);
    CHECK(kind_of([] { pair_partitions(22); }) == ErrorKind::TooLarge);
}

TEST_CASE("partitions into blocks of size one or two") {
    CHECK(partitions_up_to_two(4).size() == 10);
    auto one = partitions_up_to_two(1);
    REQUIRE(one.size() == 1);
    CHECK(one[0] == SetPartition{{0, 0}});
    auto two = partitions_up_to_two(2);
    REQUIRE(two.size() == 2);
    std::set<SetPartition> got(two.begin(), two.end());
    CHECK(got.count(SetPartition{{0, 1}}) == 1);
    CHECK(got.count(SetPartition{{0, 0}, {1, 1}}) == 1);
    const std::size_t involutions[] = {1, 1, 2, 4, 10, 26, 76, 232, 764};
    for (std::size_t n = 0; n < 9; n++) {
        CHECK(partitions_up_to_two(n).size() == involutions[n]);
        CHECK(involution_count(n) == involutions[n]);
    }
    CHECK(kind_of([] { partitions_up_to_two(17); }) == ErrorKind::TooLarge);
}

TEST_CASE("hafnian examples") {
    CHECK(hafnian(k_n(4)) == 3.0);
    CHECK(hafnian(Matrix{{0, 1, 2}, {1, 0, 3}, {2, 3, 0}}) == 0.0);
    CHECK(hafnian(Matrix{{0, 0.7}, {0.7, 0}}) == 0.7);
    CHECK(hafnian(Matrix()) == 1.0);
    CHECK(kind_of([] { hafnian(Matrix{{0, 1}, {2, 0}}); }) == ErrorKind::NotSymmetric);
    CHECK(hafnian(k_n(6)) == 15.0);
}

TEST_CASE("loop hafnian examples") {
    CHECK(loop_hafnian(Matrix{{0.4}}) == 0.4);
    const double b1 = 0.3;
    const double b2 = -1.7;
    const double a = 0.9;
    CHECK(loop_hafnian(Matrix{{b1, a}, {a, b2}}) == doctest::Approx(a + b1 * b2).epsilon(1e-15));
    CHECK(loop_hafnian(k_n(4)) == 3.0);
    CHECK(kind_of([] { loop_hafnian(Matrix{{0, 1}, {2, 0}}); }) == ErrorKind::NotSymmetric);
}

TEST_CASE("property: hafnian agrees with the permutation-sum definition") {
    std::mt19937_64 rng(17);
    for (std::size_t n = 0; n <= 8; n += 2) {
        for (int t = 0; t < 5; t++) {
            Matrix a = random_symmetric_zero_diag(rng, n);
            CHECK(hafnian(a) == doctest::Approx(oracle::hafnian_by_permutations(a)).epsilon(1e-10));
        }
    }
}

TEST_CASE("property: loop hafnian with zero diagonal equals hafnian exactly") {
    std::mt19937_64 rng(19);
    for (std::size_t n = 0; n <= 8; n++) {
        Matrix a = random_symmetric_zero_diag(rng, n);
        CHECK(loop_hafnian(a) == hafnian(a));
    }
}

TEST_CASE("property: loop hafnian expands over singleton subsets") {
    // lhaf(B) = sum over subsets S left as singletons of prod_{i in S} b_i * haf(B without S)
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t n = 1; n <= 7; n++) {
        Matrix b = random_symmetric_zero_diag(rng, n);
        std::vector<double> diag(n);
        for (std::size_t i = 0; i < n; i++) {
            diag[i] = u(rng);
            b(i, i) = diag[i];
        }
        double expected = 0.0;
        for (std::uint32_t s = 0; s < (1U << n); s++) {
            double prod = 1.0;
            std::vector<std::size_t> rest;
            for (std::size_t i = 0; i < n; i++) {
                if (s >> i & 1U) {
                    prod *= diag[i];
                } else {
                    rest.push_back(i);
                }
            }
            Matrix sub = select(b, rest);
            for (std::size_t i = 0; i < sub.rows(); i++) {
                sub(i, i) = 0.0;
            }
            expected += prod * oracle::hafnian_by_permutations(sub);
        }
        CHECK(loop_hafnian(b) == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("count_r_matchings examples") {
    Graph k3 = validate_graph(k_n(3));
    Graph k4 = validate_graph(k_n(4));
    CHECK(count_r_matchings(k3, 1) == 3.0);
    CHECK(count_r_matchings(k4, 2) == 3.0);
    CHECK(count_r_matchings(k3, 0) == 1.0);
    CHECK(count_r_matchings(k4, 3) == 0.0);
    Graph w = validate_graph(Matrix{{0, 2, 0}, {2, 0, 3}, {0, 3, 0}});
    CHECK(count_r_matchings(w, 1) == 5.0);
}

TEST_CASE("hafnian counts perfect matchings of every graph up to six nodes") {
    const std::size_t classes[] = {1, 2, 4, 11, 34, 156};
    for (std::size_t n = 1; n <= 6; n++) {
        auto graphs = oracle::non_isomorphic_graphs(n);
        CHECK(graphs.size() == classes[n - 1]);
        for (const auto &a : graphs) {
            auto expected = static_cast<double>(oracle::perfect_matchings_by_edge_subsets(a));
            CHECK(hafnian(a) == expected);
            if (n % 2 == 0) {
                CHECK(count_r_matchings(validate_graph(a), n / 2) == expected);
            }
        }
    }
}

TEST_CASE("property: doubled hafnian squares") {
    std::mt19937_64 rng(29);
    for (int t = 0; t < 30; t++) {
        std::size_t n = 2 * (1 + t % 4);
        Matrix a = oracle::random_graph(rng, n, 0.7, true);
        double h = hafnian(a);
        CHECK(hafnian(direct_sum(a, a)) == doctest::Approx(h * h).epsilon(1e-9));
    }
}

TEST_CASE("matching polynomial examples") {
    auto k3 = matching_polynomial(validate_graph(k_n(3)));
    CHECK(k3.coefficients == std::vector<double>{1, 3, 0});
    // the path on three nodes; coefficients run to r = ceil(M/2)
    auto p3 = matching_polynomial(validate_graph(Matrix{{0, 1, 0}, {1, 0, 1}, {0, 1, 0}}));
    CHECK(p3.coefficients == std::vector<double>{1, 2, 0});
    auto single = matching_polynomial(validate_graph(Matrix(1, 1)));
    CHECK(single.coefficients == std::vector<double>{1, 0});
    // mu(K3, x) = x^3 - 3x
    CHECK(k3.evaluate(2.0) == doctest::Approx(2.0));
    CHECK(kind_of([] { matching_polynomial(validate_graph(Matrix(21, 21))); }) == ErrorKind::TooLarge);
}

TEST_CASE("GBS polynomial examples") {
    auto k3 = gbs_polynomial(validate_graph(k_n(3)));
    CHECK(k3.coefficients[0] == 1.0);
    CHECK(k3.coefficients[1] == 3.0);
    auto k4 = gbs_polynomial(validate_graph(k_n(4)));
    CHECK(k4.coefficients[2] == 9.0);
    std::mt19937_64 rng(31);
    for (int t = 0; t < 10; t++) {
        Graph g = validate_graph(oracle::random_graph(rng, 3 + t % 6, 0.5));
        auto gp = gbs_polynomial(g);
        auto mp = matching_polynomial(g);
        CHECK(gp.coefficients[1] == static_cast<double>(g.num_edges()));
        CHECK(mp.coefficients[1] == static_cast<double>(g.num_edges()));
        for (double v : gp.coefficients) {
            CHECK(v >= 0.0);
        }
    }
}

TEST_CASE("property: matching coefficients agree with backtracking") {
    std::mt19937_64 rng(37);
    for (int t = 0; t < 25; t++) {
        Matrix a = oracle::random_graph(rng, 2 + t % 7, 0.6, true);
        Graph g = validate_graph(a);
        auto mp = matching_polynomial(g);
        REQUIRE(mp.coefficients.size() == (g.num_nodes() + 1) / 2 + 1);
        for (std::size_t r = 0; r < mp.coefficients.size(); r++) {
            std::vector<bool> used(g.num_nodes(), false);
            double expected = oracle::r_matchings(a, r, used, 0);
            CHECK(mp.coefficients[r] == doctest::Approx(expected).epsilon(1e-9));
            CHECK(count_r_matchings(g, r) == doctest::Approx(expected).epsilon(1e-9));
        }
    }
}

TEST_CASE("isserlis examples") {
    Matrix id = Matrix::identity(2);
    std::vector<std::size_t> i01{0, 1};
    std::vector<std::size_t> i00{0, 0};
    CHECK(isserlis_moment(id, i01) == 0.0);
    CHECK(isserlis_moment(id, i00) == 1.0);
    Matrix cov{{2, 1}, {1, 2}};
    std::vector<std::size_t> i0011{0, 0, 1, 1};
    CHECK(isserlis_moment(cov, i0011) == 6.0);
    std::vector<std::size_t> odd{0, 1, 1};
    CHECK(isserlis_moment(cov, odd) == 0.0);
    CHECK(kind_of([&] { isserlis_moment(Matrix{{1, 2}, {2, 1}}, i01); }) == ErrorKind::NotPositiveDefinite);
    CHECK(kind_of([&] { isserlis_moment(cov, std::vector<std::size_t>{}); }) == ErrorKind::OutOfRange);
    CHECK(kind_of([&] { isserlis_moment(cov, std::vector<std::size_t>{0, 2}); }) == ErrorKind::OutOfRange);
}

TEST_CASE("isserlis three-pairing formula for distinct indices") {
    // integer-valued covariances keep every product exact
    Matrix cov{{6, 1, 2, -1}, {1, 5, 0, 2}, {2, 0, 7, 1}, {-1, 2, 1, 4}};
    std::vector<std::size_t> idx{0, 1, 2, 3};
    double expected = cov(0, 1) * cov(2, 3) + cov(0, 2) * cov(1, 3) + cov(0, 3) * cov(1, 2);
    CHECK(isserlis_moment(cov, idx) == expected);
}

TEST_CASE("isserlis agrees with a Monte Carlo estimate") {
    Matrix cov{{2, 1}, {1, 2}};
    auto mc = oracle::monte_carlo_moments(cov, {{0, 0, 1, 1}}, 1'000'000, 99);
    std::vector<std::size_t> idx{0, 0, 1, 1};
    CHECK(std::abs(mc[0].mean - isserlis_moment(cov, idx)) < 4.0 * mc[0].standard_error);
}
