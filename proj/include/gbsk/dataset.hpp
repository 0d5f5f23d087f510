#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gbsk/graph.hpp"
#include "gbsk/linalg.hpp"

namespace gbsk {

/// Undirected edge between 0-based local node ids, u < v.
struct RawEdge {
    std::size_t u = 0;
    std::size_t v = 0;
    std::optional<int> label;

    auto operator<=>(const RawEdge &) const = default;
};

struct RawGraph {
    std::size_t num_nodes = 0;
    std::vector<RawEdge> edges;  // sorted by (u, v)

    bool operator==(const RawGraph &) const = default;
};

/// Graphs exactly as stored in the benchmark files, before any selection.
struct RawDataset {
    std::string name;
    std::vector<RawGraph> graphs;
    std::vector<int> labels;
    bool has_edge_labels = false;

    bool operator==(const RawDataset &) const = default;
};

/// Reads <name>_A.txt, <name>_graph_indicator.txt, <name>_graph_labels.txt
/// and, if present, <name>_edge_labels.txt from `dir`. Node labels and
/// attributes are ignored. Each undirected edge may be listed in one or both
/// directions.
RawDataset parse_tu_dataset(const std::filesystem::path &dir, const std::string &name);

/// Writes the same four-file layout, listing every edge in both directions.
void write_tu_dataset(const RawDataset &data, const std::filesystem::path &dir);

enum class LabelRuleKind { None, Bond, Valence, Fingerprint, WeightMap };

/// Edge-label to weight translation plus class selection.
struct LabelTranslationRule {
    LabelRuleKind kind = LabelRuleKind::None;
    /// Bond rule only: the label meaning "no chemical bond" (weight 0).
    std::optional<int> no_bond_label;
    /// WeightMap only.
    std::map<int, double> weights;

    static LabelTranslationRule none() { return {}; }
    static LabelTranslationRule bond(std::optional<int> no_bond_label = std::nullopt);
    static LabelTranslationRule valence();
    static LabelTranslationRule fingerprint();
    /// Parses "label,weight" lines.
    static LabelTranslationRule from_weight_file(const std::filesystem::path &path);

    std::string name() const;
    double weight(const std::optional<int> &label) const;
    bool keeps_class(int graph_label) const;
};

/// Accepts "none", "bond", "bond-md" (label 0 = no bond), "valence", "fingerprint".
LabelTranslationRule rule_from_name(std::string_view name);

struct PreprocessOptions {
    std::size_t min_nodes = 6;
    std::size_t max_nodes = 25;
    std::optional<double> scale_override;
};

struct PreprocessReport {
    std::string dataset;
    std::string rule;
    std::size_t total_graphs = 0;
    std::size_t excluded_by_size = 0;
    std::size_t excluded_by_class = 0;
    std::size_t retained = 0;
    std::size_t min_nodes = 0;
    std::size_t max_nodes = 0;
    double max_singular_value = 0.0;
    double scale = 1.0;
    bool scale_overridden = false;

    double excluded_fraction() const;
    /// JSON text.
    std::string to_text() const;
};

struct DatasetBundle {
    std::string name;
    std::vector<ScaledGraph> graphs;
    std::vector<int> labels;
    /// 1-based position of each retained graph in the source files.
    std::vector<std::size_t> source_ids;
    PreprocessReport report;
    /// The retained graphs in raw form; preprocessing them again reproduces this bundle.
    RawDataset retained_raw;

    std::vector<Graph> unscaled_graphs() const;
};

/// Builds the weighted adjacency of one raw graph under `rule`.
Matrix weighted_adjacency(const RawGraph &g, const LabelTranslationRule &rule);

/// Size selection, label translation and dataset-wide rescaling.
DatasetBundle preprocess(const RawDataset &raw, const LabelTranslationRule &rule,
                         const PreprocessOptions &options = {});

/// Dense comma-separated adjacency matrix, one row per line.
Matrix read_adjacency_csv(const std::filesystem::path &path);
void write_adjacency_csv(const Matrix &m, const std::filesystem::path &path);

}  // namespace gbsk
