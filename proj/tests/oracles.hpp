#pragma once

// Reference implementations used only by tests. None of them calls into the
// Hafnian or encoding code they are compared against.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "gbsk/graph.hpp"
#include "gbsk/linalg.hpp"

namespace oracle {

using gbsk::Matrix;

/// Perfect matchings by checking every subset of n/2 edges for disjointness.
inline std::uint64_t perfect_matchings_by_edge_subsets(const Matrix &a) {
    const std::size_t n = a.rows();
    if (n % 2 == 1) {
        return 0;
    }
    if (n == 0) {
        return 1;
    }
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < n; i++) {
        for (std::size_t j = i + 1; j < n; j++) {
            if (a(i, j) != 0.0) {
                edges.emplace_back(i, j);
            }
        }
    }
    const std::size_t r = n / 2;
    if (edges.size() < r) {
        return 0;
    }
    std::uint64_t count = 0;
    std::vector<bool> pick(edges.size(), false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(r), true);
    do {
        std::vector<int> used(n, 0);
        bool ok = true;
        for (std::size_t e = 0; e < edges.size() && ok; e++) {
            if (pick[e]) {
                ok = used[edges[e].first]++ == 0 && used[edges[e].second]++ == 0;
            }
        }
        count += ok ? 1 : 0;
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return count;
}

/// Weighted r-matchings by recursion over the lowest remaining vertex.
inline double r_matchings(const Matrix &a, std::size_t r, std::vector<bool> &used, std::size_t from) {
    if (r == 0) {
        return 1.0;
    }
    const std::size_t n = a.rows();
    double total = 0.0;
    for (std::size_t i = from; i < n; i++) {
        if (used[i]) {
            continue;
        }
        used[i] = true;
        for (std::size_t j = i + 1; j < n; j++) {
            if (!used[j] && a(i, j) != 0.0) {
                used[j] = true;
                total += a(i, j) * r_matchings(a, r - 1, used, i + 1);
                used[j] = false;
            }
        }
        used[i] = false;
    }
    return total;
}

/// Hafnian as a sum over all n! permutations: haf(A) = sum_sigma prod A(s(2i), s(2i+1)) / (2^(n/2) (n/2)!).
inline double hafnian_by_permutations(const Matrix &a) {
    const std::size_t n = a.rows();
    if (n % 2 == 1) {
        return 0.0;
    }
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    double total = 0.0;
    do {
        double prod = 1.0;
        for (std::size_t i = 0; i < n; i += 2) {
            prod *= a(p[i], p[i + 1]);
        }
        total += prod;
    } while (std::next_permutation(p.begin(), p.end()));
    double norm = 1.0;
    for (std::size_t i = 1; i <= n / 2; i++) {
        norm *= 2.0 * static_cast<double>(i);
    }
    return total / norm;
}

inline Matrix from_mask(std::uint32_t mask, std::size_t n) {
    Matrix a(n, n);
    std::size_t bit = 0;
    for (std::size_t i = 0; i < n; i++) {
        for (std::size_t j = i + 1; j < n; j++, bit++) {
            if (mask >> bit & 1U) {
                a(i, j) = 1.0;
                a(j, i) = 1.0;
            }
        }
    }
    return a;
}

/// One representative of every isomorphism class of simple graphs on n nodes.
inline std::vector<Matrix> non_isomorphic_graphs(std::size_t n) {
    const std::size_t bits = n * (n - 1) / 2;
    std::vector<std::vector<std::size_t>> perms;
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    do {
        perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    // bit position of each pair
    std::vector<std::vector<std::size_t>> pos(n, std::vector<std::size_t>(n));
    std::size_t bit = 0;
    for (std::size_t i = 0; i < n; i++) {
        for (std::size_t j = i + 1; j < n; j++, bit++) {
            pos[i][j] = pos[j][i] = bit;
        }
    }
    std::vector<bool> seen(std::size_t{1} << bits, false);
    std::vector<Matrix> out;
    for (std::uint32_t m = 0; m < (1U << bits); m++) {
        if (seen[m]) {
            continue;
        }
        out.push_back(from_mask(m, n));
        for (const auto &q : perms) {
            std::uint32_t image = 0;
            for (std::size_t i = 0; i < n; i++) {
                for (std::size_t j = i + 1; j < n; j++) {
                    if (m >> pos[i][j] & 1U) {
                        image |= 1U << pos[q[i]][q[j]];
                    }
                }
            }
            seen[image] = true;
        }
    }
    return out;
}

/// Largest singular value of a symmetric matrix by power iteration on A^2.
inline double spectral_norm(const Matrix &a, int iterations = 2000) {
    const std::size_t n = a.rows();
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; i++) {
        v[i] = 1.0 + 0.1 * static_cast<double>(i);
    }
    double lambda = 0.0;
    for (int it = 0; it < iterations; it++) {
        std::vector<double> w(n, 0.0);
        for (std::size_t i = 0; i < n; i++) {
            for (std::size_t j = 0; j < n; j++) {
                w[i] += a(i, j) * v[j];
            }
        }
        std::vector<double> u(n, 0.0);
        for (std::size_t i = 0; i < n; i++) {
            for (std::size_t j = 0; j < n; j++) {
                u[i] += a(i, j) * w[j];
            }
        }
        double norm = std::sqrt(std::inner_product(u.begin(), u.end(), u.begin(), 0.0));
        if (norm == 0.0) {
            return 0.0;
        }
        lambda = std::sqrt(norm / std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0)));
        for (std::size_t i = 0; i < n; i++) {
            v[i] = u[i] / norm;
        }
    }
    return lambda;
}

inline double poisson(double lambda, int n) {
    return std::exp(-lambda + n * std::log(lambda) - std::lgamma(n + 1.0));
}

/// Two-mode squeezed vacuum from K2 at scale c: p(n, n) = (1 - c^2) c^(2n).
inline double two_mode_squeezed(double c, int n) { return (1.0 - c * c) * std::pow(c, 2 * n); }

inline Matrix random_graph(std::mt19937_64 &rng, std::size_t n, double p, bool weighted = false) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; i++) {
        for (std::size_t j = i + 1; j < n; j++) {
            if (u(rng) < p) {
                double w = weighted ? 0.2 + u(rng) : 1.0;
                a(i, j) = w;
                a(j, i) = w;
            }
        }
    }
    return a;
}

inline Matrix random_pd(std::mt19937_64 &rng, std::size_t n) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix b(n, n);
    for (std::size_t i = 0; i < n; i++) {
        for (std::size_t j = 0; j < n; j++) {
            b(i, j) = g(rng);
        }
    }
    Matrix c(n, n);
    for (std::size_t i = 0; i < n; i++) {
        for (std::size_t j = 0; j < n; j++) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; k++) {
                s += b(i, k) * b(j, k);
            }
            c(i, j) = s / static_cast<double>(n) + (i == j ? 0.5 : 0.0);
        }
    }
    return c;
}

inline Matrix cholesky_lower(const Matrix &a) {
    const std::size_t n = a.rows();
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; j++) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; k++) {
            d -= l(j, k) * l(j, k);
        }
        l(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; i++) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; k++) {
                s -= l(i, k) * l(j, k);
            }
            l(i, j) = s / l(j, j);
        }
    }
    return l;
}

struct MonteCarloMoment {
    double mean = 0.0;
    double standard_error = 0.0;
};

/// E[x_i x_j x_k x_l ...] for x ~ N(0, cov) by sampling x = L z.
inline std::vector<MonteCarloMoment> monte_carlo_moments(const Matrix &cov,
                                                         const std::vector<std::vector<std::size_t>> &tuples,
                                                         std::size_t draws, std::uint64_t seed) {
    const std::size_t n = cov.rows();
    Matrix l = cholesky_lower(cov);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> z(n);
    std::vector<double> x(n);
    std::vector<double> sum(tuples.size(), 0.0);
    std::vector<double> sum_sq(tuples.size(), 0.0);
    for (std::size_t d = 0; d < draws; d++) {
        for (auto &v : z) {
            v = g(rng);
        }
        for (std::size_t i = 0; i < n; i++) {
            double s = 0.0;
            for (std::size_t k = 0; k <= i; k++) {
                s += l(i, k) * z[k];
            }
            x[i] = s;
        }
        for (std::size_t t = 0; t < tuples.size(); t++) {
            double prod = 1.0;
            for (std::size_t i : tuples[t]) {
                prod *= x[i];
            }
            sum[t] += prod;
            sum_sq[t] += prod * prod;
        }
    }
    std::vector<MonteCarloMoment> out(tuples.size());
    const double nd = static_cast<double>(draws);
    for (std::size_t t = 0; t < tuples.size(); t++) {
        double mean = sum[t] / nd;
        double var = (sum_sq[t] / nd - mean * mean) * nd / (nd - 1.0);
        out[t] = {mean, std::sqrt(var / nd)};
    }
    return out;
}

/// Leave-one-out nearest-centroid accuracy on feature rows.
inline double nearest_centroid_accuracy(const std::vector<std::vector<double>> &rows, const std::vector<int> &labels) {
    std::size_t correct = 0;
    for (std::size_t held = 0; held < rows.size(); held++) {
        std::map<int, std::vector<double>> centroid;
        std::map<int, double> count;
        for (std::size_t i = 0; i < rows.size(); i++) {
            if (i == held) {
                continue;
            }
            auto &c = centroid[labels[i]];
            c.resize(rows[i].size(), 0.0);
            for (std::size_t j = 0; j < rows[i].size(); j++) {
                c[j] += rows[i][j];
            }
            count[labels[i]] += 1.0;
        }
        int best = 0;
        double best_dist = INFINITY;
        for (auto &[label, c] : centroid) {
            double d = 0.0;
            for (std::size_t j = 0; j < c.size(); j++) {
                double diff = rows[held][j] - c[j] / count[label];
                d += diff * diff;
            }
            if (d < best_dist) {
                best_dist = d;
                best = label;
            }
        }
        correct += best == labels[held] ? 1 : 0;
    }
    return static_cast<double>(correct) / static_cast<double>(rows.size());
}

/// Number of events in an orbit: multinomial M! / ((M - parts)! prod mult!).
inline double orbit_event_count(const std::vector<int> &partition, std::size_t modes) {
    std::map<int, int> mult;
    for (int p : partition) {
        mult[p]++;
    }
    double r = 1.0;
    for (std::size_t i = 0; i < partition.size(); i++) {
        r *= static_cast<double>(modes - i);
    }
    for (auto &[p, m] : mult) {
        r /= std::tgamma(m + 1.0);
    }
    return r;
}

/// Integer partitions of t into at most `parts` parts, each non-increasing.
inline std::vector<std::vector<int>> partitions(int t, std::size_t parts, int max_part) {
    if (t == 0) {
        return {{}};
    }
    std::vector<std::vector<int>> out;
    if (parts == 0) {
        return out;
    }
    for (int first = std::min(t, max_part); first >= 1; first--) {
        for (auto rest : partitions(t - first, parts - 1, first)) {
            rest.insert(rest.begin(), first);
            out.push_back(rest);
        }
    }
    return out;
}

}  // namespace oracle
