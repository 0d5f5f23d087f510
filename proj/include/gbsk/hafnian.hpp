#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "gbsk/graph.hpp"
#include "gbsk/linalg.hpp"

namespace gbsk {

/// One block of a set partition. Singletons are stored as (u, u).
using Block = std::pair<std::size_t, std::size_t>;
using SetPartition = std::vector<Block>;

inline constexpr std::size_t kMaxPairEnumeration = 20;
inline constexpr std::size_t kMaxLoopEnumeration = 16;

/// (n-1)!! for even n, 0 for odd n.
std::size_t pair_partition_count(std::size_t n);

/// Number of partitions of {0..n-1} into blocks of size 1 or 2 (involution numbers).
std::size_t involution_count(std::size_t n);

/// Visits every partition of {0..n-1} into unordered pairs. Partners of the
/// lowest unmatched index are tried in ascending order.
void for_each_pair_partition(std::size_t n, const std::function<void(std::span<const Block>)> &visit);
std::vector<SetPartition> pair_partitions(std::size_t n);

/// Visits every partition of {0..n-1} into blocks of size at most two.
void for_each_partition_up_to_two(std::size_t n, const std::function<void(std::span<const Block>)> &visit);
std::vector<SetPartition> partitions_up_to_two(std::size_t n);

/// Sum over perfect matchings of the products of paired entries. The diagonal
/// is ignored. Sums are compensated (Kahan) in enumeration order and zero
/// entries are skipped, so the result is deterministic.
double hafnian(const Matrix &m);

/// Like hafnian() but singletons (u) contribute m(u, u).
double loop_hafnian(const Matrix &m);

/// Backtracking count of r pairwise vertex-disjoint edges, weighted by the
/// product of edge weights. Independent of the Hafnian code path.
double count_r_matchings(const Graph &g, std::size_t r);

/// Coefficients m(G, r) or g(G, r) for r = 0 .. ceil(M/2).
struct MatchingPolynomial {
    std::size_t num_nodes = 0;
    std::vector<double> coefficients;

    /// sum_r (-1)^r m(G, r) x^(M - 2r)
    double evaluate(double x) const;
};

struct GbsPolynomial {
    std::size_t num_nodes = 0;
    std::vector<double> coefficients;

    double evaluate(double x) const;
};

/// m(G, r) = sum over node subsets S with |S| = 2r of haf(A_S).
MatchingPolynomial matching_polynomial(const Graph &g);

/// g(G, r) = sum over node subsets S with |S| = 2r of haf(A_S)^2.
GbsPolynomial gbs_polynomial(const Graph &g);

/// Zero-mean Gaussian moment E[x_{i1} x_{i2} ...] by Isserlis' theorem, i.e.
/// the Hafnian of the covariance with rows repeated per multiplicity.
/// Indices are 0-based.
double isserlis_moment(const Matrix &cov, std::span<const std::size_t> indices);

}  // namespace gbsk
