#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gbsk/encoding.hpp"
#include "gbsk/graph.hpp"

namespace gbsk {

/// Permutation class of photon events, identified by its non-increasing
/// partition of the total photon number. The empty partition is the vacuum.
struct Orbit {
    std::vector<int> partition;

    int total() const;
    int max_count() const { return partition.empty() ? 0 : partition.front(); }
    bool is_single_photon() const;
    /// e.g. "o[2,1]", vacuum "o[]"
    std::string label() const;

    bool operator==(const Orbit &) const = default;
};

/// All orbits with `total` photons whose largest count is exactly max_count.
struct MetaOrbit {
    int total = 0;
    int max_count = 0;

    bool contains(const Orbit &o) const { return o.total() == total && o.max_count() == max_count; }
    /// e.g. "m[4,2]", vacuum "m[0,0]"
    std::string label() const;

    bool operator==(const MetaOrbit &) const = default;
};

/// Integer partitions of 0..k with at most `modes` parts, ordered by total
/// ascending and then lexicographically descending ([3], [2,1], [1,1,1]).
std::vector<Orbit> enumerate_orbits(int k, std::size_t modes);

/// Meta-orbits (t, s) reachable with at most `modes` parts, ordered by total
/// ascending and then s descending, matching the orbit order.
std::vector<MetaOrbit> enumerate_meta_orbits(int k, std::size_t modes);

/// Number of distinct photon events in an orbit over `modes` modes.
double orbit_size(const Orbit &o, std::size_t modes);

/// Visits each event of the orbit as a length-`modes` count vector, in
/// lexicographic order of the count vectors.
void for_each_orbit_event(const Orbit &o, std::size_t modes, const std::function<void(std::span<const int>)> &visit);

/// Pure-state probability: haf^2(A_n) / (sqrt(det Q) n!) without displacement,
/// alpha * lhaf^2(B_n) with it, where B_n carries b_j on its diagonal.
/// Throws LossyEncodingRequiresGeneralPath for lossy encodings.
double event_probability(const GbsEncoding &e, const PhotonEvent &n);

/// Mixed-state probability haf(C_n) / (sqrt(det Q) n!), where C_n repeats both
/// index j and index M + j of A~ n_j times. Requires zero displacement.
double lossy_event_probability(const GbsEncoding &e, const PhotonEvent &n);

/// Dispatches to event_probability() or lossy_event_probability().
double probability(const GbsEncoding &e, const PhotonEvent &n);

/// Sum of event probabilities over the orbit, in for_each_orbit_event order.
double orbit_probability(const GbsEncoding &e, const Orbit &o);

/// orbit_probability() for each orbit; orbits are spread over `jobs` threads
/// and each sum stays sequential, so results do not depend on `jobs`.
std::vector<double> orbit_probabilities(const GbsEncoding &e, std::span<const Orbit> orbits, std::size_t jobs = 1);

double meta_orbit_probability(const GbsEncoding &e, const MetaOrbit &mo);

/// Probability of observing at most k photons in total.
double truncated_mass(const GbsEncoding &e, int k, std::size_t jobs = 1);

}  // namespace gbsk
