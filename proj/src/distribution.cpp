#include "gbsk/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gbsk/error.hpp"
#include "gbsk/hafnian.hpp"
#include "gbsk/parallel.hpp"
#include "kahan.hpp"

namespace gbsk {

int Orbit::total() const { return std::accumulate(partition.begin(), partition.end(), 0); }

bool Orbit::is_single_photon() const {
    return std::all_of(partition.begin(), partition.end(), [](int p) { return p == 1; });
}

std::string Orbit::label() const {
    std::string s = "o[";
    for (std::size_t i = 0; i < partition.size(); i++) {
        if (i > 0) {
            s += ',';
        }
        s += std::to_string(partition[i]);
    }
    return s + "]";
}

std::string MetaOrbit::label() const { return "m[" + std::to_string(total) + "," + std::to_string(max_count) + "]"; }

std::vector<Orbit> enumerate_orbits(int k, std::size_t modes) {
    std::vector<Orbit> out;
    if (k < 0) {
        return out;
    }
    out.push_back(Orbit{});
    for (int t = 1; t <= k; t++) {
        // reverse lexicographic walk starting from [t]
        std::vector<int> p{t};
        while (true) {
            if (p.size() <= modes) {
                out.push_back(Orbit{p});
            }
            auto it = std::find_if(p.rbegin(), p.rend(), [](int x) { return x > 1; });
            if (it == p.rend()) {
                break;
            }
            std::size_t pos = static_cast<std::size_t>(std::distance(it, p.rend())) - 1;
            int rest = 0;
            for (std::size_t i = pos; i < p.size(); i++) {
                rest += p[i];
            }
            int part = p[pos] - 1;
            p.resize(pos);
            while (rest > 0) {
                int take = std::min(part, rest);
                p.push_back(take);
                rest -= take;
            }
        }
    }
    return out;
}

std::vector<MetaOrbit> enumerate_meta_orbits(int k, std::size_t modes) {
    std::vector<MetaOrbit> out;
    if (k < 0) {
        return out;
    }
    out.push_back(MetaOrbit{0, 0});
    for (int t = 1; t <= k; t++) {
        for (int s = t; s >= 1; s--) {
            // the fewest parts for a partition of t with largest part s
            auto parts = static_cast<std::size_t>((t + s - 1) / s);
            if (parts <= modes) {
                out.push_back(MetaOrbit{t, s});
            }
        }
    }
    return out;
}

double orbit_size(const Orbit &o, std::size_t modes) {
    if (o.partition.size() > modes) {
        return 0.0;
    }
    // modes! / ((modes - len)! prod mult!)
    double lg = std::lgamma(static_cast<double>(modes) + 1.0) -
                std::lgamma(static_cast<double>(modes - o.partition.size()) + 1.0);
    std::size_t i = 0;
    while (i < o.partition.size()) {
        std::size_t j = i;
        while (j < o.partition.size() && o.partition[j] == o.partition[i]) {
            j++;
        }
        lg -= std::lgamma(static_cast<double>(j - i) + 1.0);
        i = j;
    }
    return std::round(std::exp(lg));
}

void for_each_orbit_event(const Orbit &o, std::size_t modes, const std::function<void(std::span<const int>)> &visit) {
    if (o.partition.size() > modes) {
        return;
    }
    std::vector<int> counts(modes, 0);
    std::copy(o.partition.begin(), o.partition.end(), counts.end() - static_cast<std::ptrdiff_t>(o.partition.size()));
    std::sort(counts.begin(), counts.end());
    do {
        visit(counts);
    } while (std::next_permutation(counts.begin(), counts.end()));
}

namespace {

double log_factorial(std::span<const int> counts) {
    double s = 0.0;
    for (int c : counts) {
        if (c > 1) {
            s += std::lgamma(static_cast<double>(c) + 1.0);
        }
    }
    return s;
}

int total_of(std::span<const int> counts) { return std::accumulate(counts.begin(), counts.end(), 0); }

// Evaluates event probabilities for one encoding; reused across all events
// of an orbit.
class EventEvaluator {
   public:
    explicit EventEvaluator(const GbsEncoding &e) : e_(e), m_(e.modes()) {
        if (e.is_pure()) {
            block_ = Matrix(m_, m_);
            for (std::size_t i = 0; i < m_; i++) {
                for (std::size_t j = 0; j < m_; j++) {
                    block_(i, j) = e.a_tilde()(i, j);
                }
            }
        }
    }

    double pure(std::span<const int> counts) const {
        if (!e_.is_pure()) {
            throw Error(ErrorKind::LossyEncodingRequiresGeneralPath,
                        "encoding has loss " + std::to_string(e_.loss()) + "; use lossy_event_probability");
        }
        check_length(counts);
        const int total = total_of(counts);
        const bool displaced = e_.displacement() != 0.0;
        if (!displaced && total % 2 == 1) {
            return 0.0;
        }
        expand(counts, false);
        Matrix sub = select(block_, idx_);
        double h;
        double log_norm = -0.5 * e_.log_det_q() - log_factorial(counts);
        if (displaced) {
            for (std::size_t i = 0; i < idx_.size(); i++) {
                sub(i, i) = e_.b()[idx_[i]];
            }
            h = loop_hafnian(sub);
            log_norm += e_.alpha_exp();
        } else {
            h = hafnian(sub);
        }
        if (h == 0.0) {
            return 0.0;
        }
        return std::exp(2.0 * std::log(std::abs(h)) + log_norm);
    }

    double lossy(std::span<const int> counts) const {
        if (e_.displacement() != 0.0) {
            throw Error(ErrorKind::DisplacedLossUnsupported, "loss combined with displacement is not supported");
        }
        check_length(counts);
        expand(counts, true);
        double h = hafnian(select(e_.a_tilde(), idx_));
        if (h == 0.0) {
            return 0.0;
        }
        double log_norm = -0.5 * e_.log_det_q() - log_factorial(counts);
        return std::copysign(std::exp(std::log(std::abs(h)) + log_norm), h);
    }

    double any(std::span<const int> counts) const { return e_.is_pure() ? pure(counts) : lossy(counts); }

   private:
    void check_length(std::span<const int> counts) const {
        if (counts.size() != m_) {
            throw Error(ErrorKind::LengthMismatch, "event has " + std::to_string(counts.size()) +
                                                       " modes, encoding has " + std::to_string(m_));
        }
    }

    void expand(std::span<const int> counts, bool doubled) const {
        idx_.clear();
        for (std::size_t j = 0; j < counts.size(); j++) {
            idx_.insert(idx_.end(), static_cast<std::size_t>(counts[j]), j);
        }
        if (doubled) {
            std::size_t half = idx_.size();
            for (std::size_t i = 0; i < half; i++) {
                idx_.push_back(idx_[i] + m_);
            }
        }
    }

    const GbsEncoding &e_;
    std::size_t m_;
    Matrix block_;
    mutable std::vector<std::size_t> idx_;
};

}  // namespace

double event_probability(const GbsEncoding &e, const PhotonEvent &n) { return EventEvaluator(e).pure(n.counts); }

double lossy_event_probability(const GbsEncoding &e, const PhotonEvent &n) {
    return EventEvaluator(e).lossy(n.counts);
}

double probability(const GbsEncoding &e, const PhotonEvent &n) { return EventEvaluator(e).any(n.counts); }

double orbit_probability(const GbsEncoding &e, const Orbit &o) {
    if (e.is_pure() && e.displacement() == 0.0 && o.total() % 2 == 1) {
        return 0.0;
    }
    EventEvaluator eval(e);
    KahanSum sum;
    for_each_orbit_event(o, e.modes(), [&](std::span<const int> counts) { sum.add(eval.any(counts)); });
    return sum.value();
}

std::vector<double> orbit_probabilities(const GbsEncoding &e, std::span<const Orbit> orbits, std::size_t jobs) {
    std::vector<double> out(orbits.size(), 0.0);
    parallel_for(orbits.size(), jobs, [&](std::size_t i) { out[i] = orbit_probability(e, orbits[i]); });
    return out;
}

double meta_orbit_probability(const GbsEncoding &e, const MetaOrbit &mo) {
    KahanSum sum;
    for (const auto &o : enumerate_orbits(mo.total, e.modes())) {
        if (mo.contains(o)) {
            sum.add(orbit_probability(e, o));
        }
    }
    return sum.value();
}

double truncated_mass(const GbsEncoding &e, int k, std::size_t jobs) {
    auto orbits = enumerate_orbits(k, e.modes());
    auto probs = orbit_probabilities(e, orbits, jobs);
    KahanSum sum;
    for (double p : probs) {
        sum.add(p);
    }
    return sum.value();
}

}  // namespace gbsk
