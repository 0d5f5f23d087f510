#include "gbsk/hafnian.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <string>

#include "gbsk/error.hpp"
#include "kahan.hpp"

namespace gbsk {

namespace {

void check_enumeration_bound(std::size_t n, std::size_t bound, const char *what) {
    if (n > bound) {
        throw Error(ErrorKind::TooLarge,
                    std::string(what) + " of size " + std::to_string(n) + " exceeds bound " + std::to_string(bound));
    }
}

void check_symmetric(const Matrix &m) {
    if (!m.is_square()) {
        throw Error(ErrorKind::DimensionMismatch, "matrix is not square");
    }
    if (!is_symmetric(m, 1e-12 * std::max(1.0, max_abs(m)))) {
        throw Error(ErrorKind::NotSymmetric, "matrix is not symmetric");
    }
}

struct PartitionWalker {
    std::size_t n;
    bool allow_singletons;
    const std::function<void(std::span<const Block>)> &visit;
    std::vector<Block> blocks;

    void walk(std::uint32_t remaining) {
        if (remaining == 0) {
            visit(blocks);
            return;
        }
        auto i = static_cast<std::size_t>(std::countr_zero(remaining));
        std::uint32_t rest = remaining & ~(std::uint32_t{1} << i);
        if (allow_singletons) {
            blocks.emplace_back(i, i);
            walk(rest);
            blocks.pop_back();
        }
        for (std::uint32_t partners = rest; partners != 0; partners &= partners - 1) {
            auto j = static_cast<std::size_t>(std::countr_zero(partners));
            blocks.emplace_back(i, j);
            walk(rest & ~(std::uint32_t{1} << j));
            blocks.pop_back();
        }
    }
};

std::uint32_t full_mask(std::size_t n) { return n == 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << n) - 1; }

// Same traversal order as PartitionWalker, but only accumulates the running
// product and skips zero entries.
class HafnianSum {
   public:
    HafnianSum(const Matrix &m, bool loops) : m_(m), loops_(loops) {}

    double run() {
        walk(full_mask(m_.rows()), 1.0);
        return sum_.value();
    }

   private:
    void walk(std::uint32_t remaining, double prod) {
        if (remaining == 0) {
            sum_.add(prod);
            return;
        }
        auto i = static_cast<std::size_t>(std::countr_zero(remaining));
        std::uint32_t rest = remaining & ~(std::uint32_t{1} << i);
        auto row = m_.row(i);
        if (loops_ && row[i] != 0.0) {
            walk(rest, prod * row[i]);
        }
        for (std::uint32_t partners = rest; partners != 0; partners &= partners - 1) {
            auto j = static_cast<std::size_t>(std::countr_zero(partners));
            if (row[j] == 0.0) {
                continue;
            }
            walk(rest & ~(std::uint32_t{1} << j), prod * row[j]);
        }
    }

    const Matrix &m_;
    bool loops_;
    KahanSum sum_;
};

}  // namespace

std::size_t pair_partition_count(std::size_t n) {
    if (n % 2 == 1) {
        return 0;
    }
    std::size_t c = 1;
    for (std::size_t k = n; k > 1; k -= 2) {
        c *= k - 1;
    }
    return c;
}

std::size_t involution_count(std::size_t n) {
    // I(n) = I(n-1) + (n-1) I(n-2)
    std::size_t a = 1;
    std::size_t b = 1;
    for (std::size_t k = 2; k <= n; k++) {
        std::size_t c = b + (k - 1) * a;
        a = b;
        b = c;
    }
    return b;
}

void for_each_pair_partition(std::size_t n, const std::function<void(std::span<const Block>)> &visit) {
    if (n % 2 == 1) {
        throw Error(ErrorKind::OddSize, "cannot pair an index set of odd size " + std::to_string(n));
    }
    check_enumeration_bound(n, kMaxPairEnumeration, "pair partition");
    PartitionWalker w{n, false, visit, {}};
    w.blocks.reserve(n / 2);
    w.walk(full_mask(n));
}

std::vector<SetPartition> pair_partitions(std::size_t n) {
    std::vector<SetPartition> out;
    for_each_pair_partition(n, [&](std::span<const Block> p) { out.emplace_back(p.begin(), p.end()); });
    return out;
}

void for_each_partition_up_to_two(std::size_t n, const std::function<void(std::span<const Block>)> &visit) {
    check_enumeration_bound(n, kMaxLoopEnumeration, "loop partition");
    PartitionWalker w{n, true, visit, {}};
    w.blocks.reserve(n);
    w.walk(full_mask(n));
}

std::vector<SetPartition> partitions_up_to_two(std::size_t n) {
    std::vector<SetPartition> out;
    for_each_partition_up_to_two(n, [&](std::span<const Block> p) { out.emplace_back(p.begin(), p.end()); });
    return out;
}

double hafnian(const Matrix &m) {
    check_symmetric(m);
    const std::size_t n = m.rows();
    if (n % 2 == 1) {
        return 0.0;
    }
    check_enumeration_bound(n, kMaxPairEnumeration, "hafnian");
    return HafnianSum(m, false).run();
}

double loop_hafnian(const Matrix &m) {
    check_symmetric(m);
    check_enumeration_bound(m.rows(), kMaxLoopEnumeration, "loop hafnian");
    return HafnianSum(m, true).run();
}

double count_r_matchings(const Graph &g, std::size_t r) {
    const std::size_t n = g.num_nodes();
    if (r == 0) {
        return 1.0;
    }
    if (2 * r > n) {
        return 0.0;
    }
    struct Edge {
        std::size_t u, v;
        double w;
    };
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; i++) {
        for (std::size_t j = i + 1; j < n; j++) {
            if (g.weight(i, j) != 0.0) {
                edges.push_back({i, j, g.weight(i, j)});
            }
        }
    }
    std::vector<bool> used(n, false);
    KahanSum total;
    std::function<void(std::size_t, std::size_t, double)> extend = [&](std::size_t start, std::size_t left,
                                                                         double prod) {
        if (left == 0) {
            total.add(prod);
            return;
        }
        for (std::size_t e = start; e + left <= edges.size(); e++) {
            const auto &edge = edges[e];
            if (used[edge.u] || used[edge.v]) {
                continue;
            }
            used[edge.u] = used[edge.v] = true;
            extend(e + 1, left - 1, prod * edge.w);
            used[edge.u] = used[edge.v] = false;
        }
    };
    extend(0, r, 1.0);
    return total.value();
}

namespace {

std::vector<double> single_photon_sums(const Graph &g, int power) {
    const std::size_t n = g.num_nodes();
    check_enumeration_bound(n, kMaxPairEnumeration, "polynomial graph");
    std::vector<KahanSum> sums((n + 1) / 2 + 1);
    sums[0].add(1.0);
    std::vector<std::size_t> idx;
    for (std::uint32_t s = 1; s <= full_mask(n); s++) {
        int pc = std::popcount(s);
        if (pc % 2 == 1) {
            continue;
        }
        idx.clear();
        for (std::uint32_t t = s; t != 0; t &= t - 1) {
            idx.push_back(static_cast<std::size_t>(std::countr_zero(t)));
        }
        double h = HafnianSum(select(g.adjacency(), idx), false).run();
        sums[static_cast<std::size_t>(pc / 2)].add(power == 2 ? h * h : h);
        if (s == full_mask(n)) {
            break;
        }
    }
    std::vector<double> out;
    out.reserve(sums.size());
    for (const auto &k : sums) {
        out.push_back(k.value());
    }
    return out;
}

double signed_evaluate(std::size_t m, std::span<const double> coef, double x) {
    double s = 0.0;
    for (std::size_t r = 0; r < coef.size(); r++) {
        if (coef[r] == 0.0) {
            continue;
        }
        double term = coef[r] * std::pow(x, static_cast<double>(m) - 2.0 * static_cast<double>(r));
        s += (r % 2 == 0) ? term : -term;
    }
    return s;
}

}  // namespace

double MatchingPolynomial::evaluate(double x) const { return signed_evaluate(num_nodes, coefficients, x); }

double GbsPolynomial::evaluate(double x) const { return signed_evaluate(num_nodes, coefficients, x); }

MatchingPolynomial matching_polynomial(const Graph &g) {
    return {g.num_nodes(), single_photon_sums(g, 1)};
}

GbsPolynomial gbs_polynomial(const Graph &g) { return {g.num_nodes(), single_photon_sums(g, 2)}; }

double isserlis_moment(const Matrix &cov, std::span<const std::size_t> indices) {
    check_symmetric(cov);
    if (indices.empty()) {
        throw Error(ErrorKind::OutOfRange, "moment needs at least one index");
    }
    for (auto i : indices) {
        if (i >= cov.rows()) {
            throw Error(ErrorKind::OutOfRange, "index " + std::to_string(i) + " outside covariance");
        }
    }
    cholesky(cov);
    if (indices.size() % 2 == 1) {
        return 0.0;
    }
    return hafnian(select(cov, indices));
}

}  // namespace gbsk
