#include "gbsk/bench.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include "gbsk/error.hpp"
#include "gbsk/hafnian.hpp"
#include "gbsk/parallel.hpp"
#include "json.hpp"

namespace gbsk {

namespace {

constexpr double kTau = 1e-12;

bool at_upper(double a, double c) { return a >= c; }
bool at_lower(double a) { return a <= 0.0; }

}  // namespace

double SvmModel::decision(std::span<const double> k_row) const {
    if (k_row.size() != alpha.size()) {
        throw Error(ErrorKind::DimensionMismatch, "kernel row has " + std::to_string(k_row.size()) +
                                                      " entries, model has " + std::to_string(alpha.size()));
    }
    double s = bias;
    for (std::size_t i = 0; i < alpha.size(); i++) {
        if (alpha[i] != 0.0) {
            s += alpha[i] * labels[i] * k_row[i];
        }
    }
    return s;
}

SvmModel svm_train(const Matrix &gram, std::span<const int> labels, double c_penalty, const SvmOptions &options) {
    const std::size_t n = labels.size();
    if (gram.rows() != n || gram.cols() != n) {
        throw Error(ErrorKind::DimensionMismatch, "Gram matrix does not match the label count");
    }
    if (!(c_penalty > 0.0) || !std::isfinite(c_penalty)) {
        throw Error(ErrorKind::OutOfRange, "C must be positive");
    }
    bool has_pos = false;
    bool has_neg = false;
    for (int y : labels) {
        if (y == 1) {
            has_pos = true;
        } else if (y == -1) {
            has_neg = true;
        } else {
            throw Error(ErrorKind::OutOfRange, "binary SVM labels must be +1 or -1");
        }
    }
    if (!has_pos || !has_neg) {
        throw Error(ErrorKind::DegenerateLabels, "training labels contain a single class");
    }
    if (options.check_psd && !is_psd(gram, options.psd_tol)) {
        throw Error(ErrorKind::NotPsd, "Gram matrix has an eigenvalue below -" + std::to_string(options.psd_tol));
    }

    const double c = c_penalty;
    std::vector<double> y(labels.begin(), labels.end());
    std::vector<double> alpha(n, 0.0);
    // gradient of 1/2 a^T Q a - e^T a with Q_ij = y_i y_j K_ij
    std::vector<double> grad(n, -1.0);
    auto q = [&](std::size_t i, std::size_t j) { return y[i] * y[j] * gram(i, j); };

    std::size_t iter = 0;
    while (true) {
        double g_max = -std::numeric_limits<double>::infinity();
        double g_min = std::numeric_limits<double>::infinity();
        std::size_t i = n;
        std::size_t j = n;
        for (std::size_t t = 0; t < n; t++) {
            double v = -y[t] * grad[t];
            bool up = y[t] > 0 ? !at_upper(alpha[t], c) : !at_lower(alpha[t]);
            bool low = y[t] > 0 ? !at_lower(alpha[t]) : !at_upper(alpha[t], c);
            if (up && v > g_max) {
                g_max = v;
                i = t;
            }
            if (low && v < g_min) {
                g_min = v;
                j = t;
            }
        }
        if (i == n || j == n || g_max - g_min < options.tol) {
            break;
        }
        if (++iter > options.max_iterations) {
            throw Error(ErrorKind::NotConverged, "SMO exceeded " + std::to_string(options.max_iterations) +
                                                     " iterations (violation " + std::to_string(g_max - g_min) + ")");
        }

        const double old_i = alpha[i];
        const double old_j = alpha[j];
        const double qii = gram(i, i);
        const double qjj = gram(j, j);
        const double qij = q(i, j);
        if (y[i] != y[j]) {
            double quad = qii + qjj + 2.0 * qij;
            if (quad <= 0.0) {
                quad = kTau;
            }
            double delta = (-grad[i] - grad[j]) / quad;
            double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0.0) {
                if (alpha[j] < 0.0) {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if (diff > 0.0) {
                if (alpha[i] > c) {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if (alpha[j] > c) {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            double quad = qii + qjj - 2.0 * qij;
            if (quad <= 0.0) {
                quad = kTau;
            }
            double delta = (grad[i] - grad[j]) / quad;
            double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > c) {
                if (alpha[i] > c) {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if (alpha[j] < 0.0) {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if (sum > c) {
                if (alpha[j] > c) {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }
        const double di = alpha[i] - old_i;
        const double dj = alpha[j] - old_j;
        for (std::size_t t = 0; t < n; t++) {
            grad[t] += q(i, t) * di + q(j, t) * dj;
        }
    }

    // offset as in libsvm: average over free vectors, else midpoint of the feasible interval
    double ub = std::numeric_limits<double>::infinity();
    double lb = -std::numeric_limits<double>::infinity();
    double sum_free = 0.0;
    std::size_t n_free = 0;
    for (std::size_t t = 0; t < n; t++) {
        double yg = y[t] * grad[t];
        if (at_upper(alpha[t], c)) {
            if (y[t] < 0) {
                ub = std::min(ub, yg);
            } else {
                lb = std::max(lb, yg);
            }
        } else if (at_lower(alpha[t])) {
            if (y[t] > 0) {
                ub = std::min(ub, yg);
            } else {
                lb = std::max(lb, yg);
            }
        } else {
            n_free++;
            sum_free += yg;
        }
    }
    double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : 0.5 * (ub + lb);

    SvmModel model;
    model.alpha = std::move(alpha);
    model.labels.assign(labels.begin(), labels.end());
    model.bias = -rho;
    model.c_penalty = c;
    model.iterations = iter;
    return model;
}

std::vector<int> KernelClassifier::predict(const Matrix &cross) const {
    std::vector<int> out(cross.rows());
    if (classes.size() == 1) {
        std::fill(out.begin(), out.end(), classes.front());
        return out;
    }
    std::vector<double> scores(classes.size());
    for (std::size_t r = 0; r < cross.rows(); r++) {
        auto row = cross.row(r);
        if (classes.size() == 2) {
            double f = models.front().decision(row);
            scores[0] = -f;
            scores[1] = f;
        } else {
            for (std::size_t k = 0; k < classes.size(); k++) {
                scores[k] = models[k].decision(row);
            }
        }
        std::size_t best = 0;
        for (std::size_t k = 1; k < scores.size(); k++) {
            if (scores[k] > scores[best]) {
                best = k;
            }
        }
        out[r] = classes[best];
    }
    return out;
}

KernelClassifier train_classifier(const Matrix &gram, std::span<const int> labels, double c_penalty,
                                  const SvmOptions &options) {
    KernelClassifier clf;
    clf.classes.assign(labels.begin(), labels.end());
    std::sort(clf.classes.begin(), clf.classes.end());
    clf.classes.erase(std::unique(clf.classes.begin(), clf.classes.end()), clf.classes.end());
    if (clf.classes.empty()) {
        throw Error(ErrorKind::EmptyDataset, "no training labels");
    }
    if (clf.classes.size() == 1) {
        return clf;
    }
    SvmOptions opts = options;
    if (opts.check_psd && !is_psd(gram, opts.psd_tol)) {
        throw Error(ErrorKind::NotPsd, "Gram matrix has an eigenvalue below -" + std::to_string(opts.psd_tol));
    }
    opts.check_psd = false;
    std::vector<int> y(labels.size());
    const std::size_t n_models = clf.classes.size() == 2 ? 1 : clf.classes.size();
    for (std::size_t k = 0; k < n_models; k++) {
        int positive = clf.classes.size() == 2 ? clf.classes[1] : clf.classes[k];
        for (std::size_t i = 0; i < labels.size(); i++) {
            y[i] = labels[i] == positive ? 1 : -1;
        }
        clf.models.push_back(svm_train(gram, y, c_penalty, opts));
    }
    return clf;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0) || !(hi >= lo) || n == 0) {
        throw Error(ErrorKind::OutOfRange, "log grid needs 0 < lo <= hi and n >= 1");
    }
    if (n == 1) {
        return {lo};
    }
    std::vector<double> out(n);
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (std::size_t i = 0; i < n; i++) {
        out[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

std::vector<std::size_t> stratified_folds(std::span<const int> labels, std::size_t folds, CounterRng rng) {
    if (folds < 2) {
        throw Error(ErrorKind::OutOfRange, "need at least two folds");
    }
    if (labels.size() < folds) {
        throw Error(ErrorKind::TooFewGraphs, std::to_string(labels.size()) + " samples cannot fill " +
                                                 std::to_string(folds) + " folds");
    }
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); i++) {
        by_class[labels[i]].push_back(i);
    }
    std::vector<std::size_t> out(labels.size());
    std::size_t next = 0;
    for (auto &[label, idx] : by_class) {
        for (std::size_t i = idx.size(); i > 1; i--) {
            std::swap(idx[i - 1], idx[rng.below(i)]);
        }
        for (std::size_t i : idx) {
            out[i] = next;
            next = (next + 1) % folds;
        }
    }
    return out;
}

namespace {

Matrix sub_gram(const Matrix &gram, std::span<const std::size_t> rows, std::span<const std::size_t> cols) {
    Matrix out(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); i++) {
        for (std::size_t j = 0; j < cols.size(); j++) {
            out(i, j) = gram(rows[i], cols[j]);
        }
    }
    return out;
}

std::vector<int> pick(std::span<const int> labels, std::span<const std::size_t> idx) {
    std::vector<int> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) {
        out.push_back(labels[i]);
    }
    return out;
}

/// Number of correct predictions on `test` after training on `train`.
std::size_t score(const Matrix &gram, std::span<const int> labels, std::span<const std::size_t> train,
                  std::span<const std::size_t> test, double c, const SvmOptions &opts) {
    auto y_train = pick(labels, train);
    auto clf = train_classifier(sub_gram(gram, train, train), y_train, c, opts);
    auto pred = clf.predict(sub_gram(gram, test, train));
    std::size_t correct = 0;
    for (std::size_t i = 0; i < test.size(); i++) {
        correct += pred[i] == labels[test[i]] ? 1 : 0;
    }
    return correct;
}

void split_by_fold(std::span<const std::size_t> fold_of, std::span<const std::size_t> members, std::size_t f,
                   std::vector<std::size_t> &train, std::vector<std::size_t> &test) {
    train.clear();
    test.clear();
    for (std::size_t i = 0; i < members.size(); i++) {
        (fold_of[i] == f ? test : train).push_back(members[i]);
    }
}

std::uint64_t outer_stream(std::size_t repeat) { return static_cast<std::uint64_t>(repeat) << 20; }

std::uint64_t inner_stream(std::size_t repeat, std::size_t fold) { return outer_stream(repeat) + 1 + fold; }

}  // namespace

CvResult cross_validate_gram(const Matrix &gram, std::span<const int> labels, const CvProtocol &protocol) {
    const std::size_t n = labels.size();
    if (gram.rows() != n || gram.cols() != n) {
        throw Error(ErrorKind::DimensionMismatch, "Gram matrix does not match the label count");
    }
    if (n < 20) {
        throw Error(ErrorKind::TooFewGraphs, "double cross-validation needs at least 20 graphs, got " +
                                                 std::to_string(n));
    }
    std::vector<int> distinct(labels.begin(), labels.end());
    std::sort(distinct.begin(), distinct.end());
    if (std::unique(distinct.begin(), distinct.end()) - distinct.begin() < 2) {
        throw Error(ErrorKind::DegenerateLabels, "dataset contains a single class");
    }
    if (protocol.repeats < 1 || protocol.c_grid.empty()) {
        throw Error(ErrorKind::OutOfRange, "protocol needs at least one repeat and one C value");
    }
    if (protocol.svm.check_psd && !is_psd(gram, protocol.svm.psd_tol)) {
        throw Error(ErrorKind::NotPsd, "Gram matrix has an eigenvalue below -" + std::to_string(protocol.svm.psd_tol));
    }
    SvmOptions opts = protocol.svm;
    opts.check_psd = false;

    const CounterRng base(protocol.seed);
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    std::vector<std::vector<std::size_t>> outer_fold_of(protocol.repeats);
    for (std::size_t r = 0; r < protocol.repeats; r++) {
        outer_fold_of[r] = stratified_folds(labels, protocol.outer_folds, base.split(outer_stream(r)));
    }

    CvResult result;
    result.fold_accuracies.assign(protocol.repeats, std::vector<double>(protocol.outer_folds));
    result.selected_c.assign(protocol.repeats, std::vector<double>(protocol.outer_folds));
    std::vector<std::vector<std::size_t>> correct(protocol.repeats, std::vector<std::size_t>(protocol.outer_folds));

    parallel_for(protocol.repeats * protocol.outer_folds, protocol.jobs, [&](std::size_t task) {
        const std::size_t r = task / protocol.outer_folds;
        const std::size_t f = task % protocol.outer_folds;
        std::vector<std::size_t> train;
        std::vector<std::size_t> test;
        split_by_fold(outer_fold_of[r], all, f, train, test);

        auto y_train = pick(labels, train);
        auto inner_fold_of = stratified_folds(y_train, protocol.inner_folds, base.split(inner_stream(r, f)));
        double best_c = protocol.c_grid.front();
        std::size_t best_correct = 0;
        bool first = true;
        std::vector<std::size_t> inner_train;
        std::vector<std::size_t> inner_test;
        for (double c : protocol.c_grid) {
            std::size_t total = 0;
            for (std::size_t g = 0; g < protocol.inner_folds; g++) {
                split_by_fold(inner_fold_of, train, g, inner_train, inner_test);
                total += score(gram, labels, inner_train, inner_test, c, opts);
            }
            if (first || total > best_correct) {
                best_correct = total;
                best_c = c;
                first = false;
            }
        }
        correct[r][f] = score(gram, labels, train, test, best_c, opts);
        result.fold_accuracies[r][f] = static_cast<double>(correct[r][f]) / static_cast<double>(test.size());
        result.selected_c[r][f] = best_c;
    });

    for (std::size_t r = 0; r < protocol.repeats; r++) {
        std::size_t total = std::accumulate(correct[r].begin(), correct[r].end(), std::size_t{0});
        result.repeat_accuracies.push_back(static_cast<double>(total) / static_cast<double>(n));
    }
    const double reps = static_cast<double>(protocol.repeats);
    result.mean = std::accumulate(result.repeat_accuracies.begin(), result.repeat_accuracies.end(), 0.0) / reps;
    if (protocol.repeats > 1) {
        double ss = 0.0;
        for (double a : result.repeat_accuracies) {
            ss += (a - result.mean) * (a - result.mean);
        }
        result.stddev = std::sqrt(ss / (reps - 1.0));
    }
    return result;
}

Matrix bundle_gram(const DatasetBundle &bundle, const FeatureConfig &cfg, const BenchOptions &options,
                   std::size_t jobs) {
    cfg.validate();
    std::vector<FeatureVector> features(bundle.graphs.size());
    parallel_for(features.size(), jobs, [&](std::size_t i) { features[i] = feature_vector(bundle.graphs[i], cfg); });
    if (options.standardize) {
        return gram_from_rows(standardized_rows(features), options.kernel, cfg.rbf_delta, jobs);
    }
    return gram_matrix(features, options.kernel, jobs).values;
}

CvResult double_cross_validate(const DatasetBundle &bundle, const FeatureConfig &cfg, const CvProtocol &protocol,
                               const BenchOptions &options) {
    if (bundle.graphs.size() < 20) {
        throw Error(ErrorKind::TooFewGraphs, "double cross-validation needs at least 20 graphs, got " +
                                                 std::to_string(bundle.graphs.size()));
    }
    Matrix gram = bundle_gram(bundle, cfg, options, protocol.jobs);
    return cross_validate_gram(gram, bundle.labels, protocol);
}

std::string cv_report(const std::string &dataset, const FeatureConfig &cfg, const BenchOptions &options,
                      const CvProtocol &protocol, const CvResult &result) {
    nlohmann::ordered_json j;
    j["dataset"] = dataset;
    j["config"] = {{"k", cfg.k},
                   {"displacement", cfg.displacement},
                   {"coarse", std::string(to_string(cfg.coarse))},
                   {"loss", cfg.loss},
                   {"rbf_delta", cfg.rbf_delta},
                   {"kernel", std::string(to_string(options.kernel))},
                   {"standardize", options.standardize}};
    j["protocol"] = {{"outer_folds", protocol.outer_folds},
                     {"inner_folds", protocol.inner_folds},
                     {"repeats", protocol.repeats},
                     {"c_grid", protocol.c_grid},
                     {"seed", protocol.seed},
                     {"stratified", true},
                     {"multiclass", "one-vs-rest, argmax, ties to lowest class"},
                     {"c_selection", "pooled inner accuracy, ties to smallest C"},
                     {"svm_tol", protocol.svm.tol}};
    j["mean"] = result.mean;
    j["std"] = result.stddev;
    j["repeat_accuracies"] = result.repeat_accuracies;
    j["fold_accuracies"] = result.fold_accuracies;
    j["selected_c"] = result.selected_c;
    return j.dump(2);
}

namespace {

/// Bit index of pair (i, j), i < j, in an s-node edge mask.
std::size_t pair_bit(std::size_t i, std::size_t j, std::size_t s) {
    std::size_t before = i * s - i * (i + 1) / 2;
    return before + (j - i - 1);
}

std::uint32_t permute_mask(std::uint32_t mask, std::span<const std::size_t> perm, std::size_t s) {
    std::uint32_t out = 0;
    for (std::size_t i = 0; i < s; i++) {
        for (std::size_t j = i + 1; j < s; j++) {
            if (mask >> pair_bit(i, j, s) & 1U) {
                auto a = std::min(perm[i], perm[j]);
                auto b = std::max(perm[i], perm[j]);
                out |= 1U << pair_bit(a, b, s);
            }
        }
    }
    return out;
}

struct GraphletTable {
    std::size_t s = 0;
    /// edge mask -> class index
    std::vector<std::size_t> class_of;
    std::size_t num_classes = 0;
};

GraphletTable build_table(std::size_t s) {
    const std::size_t bits = s * (s - 1) / 2;
    const std::uint32_t masks = 1U << bits;
    std::vector<std::uint32_t> canon(masks);
    std::vector<std::size_t> perm(s);
    for (std::uint32_t m = 0; m < masks; m++) {
        std::iota(perm.begin(), perm.end(), 0);
        std::uint32_t best = m;
        do {
            best = std::min(best, permute_mask(m, perm, s));
        } while (std::next_permutation(perm.begin(), perm.end()));
        canon[m] = best;
    }
    std::vector<std::uint32_t> reps(canon.begin(), canon.end());
    std::sort(reps.begin(), reps.end(), [](std::uint32_t a, std::uint32_t b) {
        int pa = std::popcount(a);
        int pb = std::popcount(b);
        return pa != pb ? pa < pb : a < b;
    });
    reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
    GraphletTable t;
    t.s = s;
    t.num_classes = reps.size();
    t.class_of.resize(masks);
    for (std::uint32_t m = 0; m < masks; m++) {
        auto it = std::find(reps.begin(), reps.end(), canon[m]);
        t.class_of[m] = static_cast<std::size_t>(it - reps.begin());
    }
    return t;
}

const GraphletTable &graphlet_table(std::size_t s) {
    if (s < 3 || s > 5) {
        throw Error(ErrorKind::UnsupportedSize, "graphlet size must be 3, 4 or 5, got " + std::to_string(s));
    }
    static const std::array<GraphletTable, 3> tables = {build_table(3), build_table(4), build_table(5)};
    return tables[s - 3];
}

}  // namespace

std::size_t graphlet_class_count(std::size_t s) { return graphlet_table(s).num_classes; }

std::vector<double> graphlet_count_features(const Graph &g, std::span<const std::size_t> sizes) {
    std::vector<double> out;
    const std::size_t n = g.num_nodes();
    for (std::size_t s : sizes) {
        const auto &table = graphlet_table(s);
        std::vector<double> counts(table.num_classes, 0.0);
        if (n >= s) {
            // subsets in lexicographic order via a selection vector
            std::vector<bool> chosen(n, false);
            std::fill(chosen.begin(), chosen.begin() + static_cast<std::ptrdiff_t>(s), true);
            std::vector<std::size_t> nodes(s);
            do {
                std::size_t k = 0;
                for (std::size_t v = 0; v < n; v++) {
                    if (chosen[v]) {
                        nodes[k++] = v;
                    }
                }
                std::uint32_t mask = 0;
                for (std::size_t i = 0; i < s; i++) {
                    for (std::size_t j = i + 1; j < s; j++) {
                        if (g.weight(nodes[i], nodes[j]) != 0.0) {
                            mask |= 1U << pair_bit(i, j, s);
                        }
                    }
                }
                counts[table.class_of[mask]] += 1.0;
            } while (std::prev_permutation(chosen.begin(), chosen.end()));
        }
        out.insert(out.end(), counts.begin(), counts.end());
    }
    return out;
}

double gbs_feature_as_squared_matchings(const ScaledGraph &g, const Orbit &o) {
    if (!o.is_single_photon()) {
        throw Error(ErrorKind::NotSinglePhotonOrbit, o.label() + " has a mode with more than one photon");
    }
    const std::size_t n = g.num_nodes();
    const std::size_t t = static_cast<std::size_t>(o.total());
    if (t > n) {
        throw Error(ErrorKind::KExceedsModes, o.label() + " needs more modes than the graph has");
    }
    if (t == 0) {
        return 1.0;
    }
    if (t % 2 == 1) {
        return 0.0;
    }
    const double weight = std::pow(g.scale(), static_cast<double>(t));
    const Matrix &a = g.graph().adjacency();
    double total = 0.0;
    std::vector<bool> chosen(n, false);
    std::fill(chosen.begin(), chosen.begin() + static_cast<std::ptrdiff_t>(t), true);
    std::vector<std::size_t> nodes(t);
    do {
        std::size_t k = 0;
        for (std::size_t v = 0; v < n; v++) {
            if (chosen[v]) {
                nodes[k++] = v;
            }
        }
        double pm = count_r_matchings(validate_graph(select(a, nodes)), t / 2);
        total += pm * pm;
    } while (std::prev_permutation(chosen.begin(), chosen.end()));
    return total * weight;
}

}  // namespace gbsk
