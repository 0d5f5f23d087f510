#include "gbsk/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include "json.hpp"
#include <string>

#include "gbsk/error.hpp"
#include "gbsk/text.hpp"

namespace gbsk {

namespace {

std::filesystem::path file_for(const std::filesystem::path &dir, const std::string &name, const char *suffix) {
    return dir / (name + "_" + suffix + ".txt");
}

[[noreturn]] void malformed(const std::filesystem::path &file, std::size_t line, const std::string &what) {
    throw Error(ErrorKind::MalformedLine, file.filename().string() + ":" + std::to_string(line) + ": " + what);
}

long long single_int(const std::filesystem::path &file, std::size_t line_no, const std::string &line) {
    long long v = 0;
    if (!parse_int(line, v)) {
        malformed(file, line_no, "expected one integer, got '" + line + "'");
    }
    return v;
}

}  // namespace

RawDataset parse_tu_dataset(const std::filesystem::path &dir, const std::string &name) {
    const auto a_path = file_for(dir, name, "A");
    const auto ind_path = file_for(dir, name, "graph_indicator");
    const auto lab_path = file_for(dir, name, "graph_labels");
    const auto elab_path = file_for(dir, name, "edge_labels");

    auto a_lines = read_lines(a_path);
    auto ind_lines = read_lines(ind_path);
    auto lab_lines = read_lines(lab_path);

    RawDataset out;
    out.name = name;
    for (std::size_t i = 0; i < lab_lines.size(); i++) {
        out.labels.push_back(static_cast<int>(single_int(lab_path, i + 1, lab_lines[i])));
    }
    const std::size_t num_graphs = out.labels.size();
    out.graphs.resize(num_graphs);

    // global node id (1-based) -> (graph, local id)
    std::vector<std::size_t> node_graph(ind_lines.size());
    std::vector<std::size_t> node_local(ind_lines.size());
    for (std::size_t i = 0; i < ind_lines.size(); i++) {
        long long g = single_int(ind_path, i + 1, ind_lines[i]);
        if (g < 1 || static_cast<std::size_t>(g) > num_graphs) {
            malformed(ind_path, i + 1,
                      "graph id " + std::to_string(g) + " outside 1.." + std::to_string(num_graphs) +
                          " (graph label count)");
        }
        auto gi = static_cast<std::size_t>(g - 1);
        node_graph[i] = gi;
        node_local[i] = out.graphs[gi].num_nodes++;
    }

    std::vector<std::string> elab_lines;
    if (std::filesystem::exists(elab_path)) {
        elab_lines = read_lines(elab_path);
        if (elab_lines.size() != a_lines.size()) {
            malformed(elab_path, std::min(elab_lines.size(), a_lines.size()) + 1,
                      "edge label count " + std::to_string(elab_lines.size()) + " differs from edge count " +
                          std::to_string(a_lines.size()));
        }
        out.has_edge_labels = true;
    }

    // per graph: (u, v) with u < v -> label; first direction seen wins, reverse must agree
    std::vector<std::map<std::pair<std::size_t, std::size_t>, std::optional<int>>> edges(num_graphs);
    for (std::size_t i = 0; i < a_lines.size(); i++) {
        auto fields = split(a_lines[i], ',');
        long long u = 0;
        long long v = 0;
        if (fields.size() != 2 || !parse_int(fields[0], u) || !parse_int(fields[1], v)) {
            malformed(a_path, i + 1, "expected 'node, node', got '" + a_lines[i] + "'");
        }
        for (long long node : {u, v}) {
            if (node < 1 || static_cast<std::size_t>(node) > node_graph.size()) {
                throw Error(ErrorKind::DanglingNode, a_path.filename().string() + ":" + std::to_string(i + 1) +
                                                         ": node " + std::to_string(node) + " belongs to no graph");
            }
        }
        auto gu = node_graph[static_cast<std::size_t>(u - 1)];
        auto gv = node_graph[static_cast<std::size_t>(v - 1)];
        if (gu != gv) {
            malformed(a_path, i + 1, "edge joins nodes of different graphs");
        }
        if (u == v) {
            malformed(a_path, i + 1, "self-loop on node " + std::to_string(u));
        }
        std::optional<int> label;
        if (out.has_edge_labels) {
            label = static_cast<int>(single_int(elab_path, i + 1, elab_lines[i]));
        }
        auto lu = node_local[static_cast<std::size_t>(u - 1)];
        auto lv = node_local[static_cast<std::size_t>(v - 1)];
        auto key = std::minmax(lu, lv);
        auto [it, inserted] = edges[gu].emplace(key, label);
        if (!inserted && it->second != label) {
            throw Error(ErrorKind::AsymmetricEdgeLabels, a_path.filename().string() + ":" + std::to_string(i + 1) +
                                                             ": conflicting labels for edge " + std::to_string(u) +
                                                             "-" + std::to_string(v));
        }
    }
    for (std::size_t g = 0; g < num_graphs; g++) {
        for (const auto &[key, label] : edges[g]) {
            out.graphs[g].edges.push_back(RawEdge{key.first, key.second, label});
        }
    }
    return out;
}

void write_tu_dataset(const RawDataset &data, const std::filesystem::path &dir) {
    std::filesystem::create_directories(dir);
    std::ofstream a(file_for(dir, data.name, "A"));
    std::ofstream ind(file_for(dir, data.name, "graph_indicator"));
    std::ofstream lab(file_for(dir, data.name, "graph_labels"));
    std::ofstream elab;
    if (data.has_edge_labels) {
        elab.open(file_for(dir, data.name, "edge_labels"));
    }
    std::size_t offset = 1;
    for (std::size_t g = 0; g < data.graphs.size(); g++) {
        const auto &graph = data.graphs[g];
        for (std::size_t i = 0; i < graph.num_nodes; i++) {
            ind << (g + 1) << '\n';
        }
        for (const auto &e : graph.edges) {
            a << (offset + e.u) << ", " << (offset + e.v) << '\n';
            a << (offset + e.v) << ", " << (offset + e.u) << '\n';
            if (data.has_edge_labels) {
                int l = e.label.value_or(0);
                elab << l << '\n' << l << '\n';
            }
        }
        offset += graph.num_nodes;
    }
    for (int l : data.labels) {
        lab << l << '\n';
    }
    if (!a || !ind || !lab) {
        throw Error(ErrorKind::MissingFile, "failed writing dataset to " + dir.string());
    }
}

LabelTranslationRule LabelTranslationRule::bond(std::optional<int> no_bond_label) {
    LabelTranslationRule r;
    r.kind = LabelRuleKind::Bond;
    r.no_bond_label = no_bond_label;
    return r;
}

LabelTranslationRule LabelTranslationRule::valence() {
    LabelTranslationRule r;
    r.kind = LabelRuleKind::Valence;
    return r;
}

LabelTranslationRule LabelTranslationRule::fingerprint() {
    LabelTranslationRule r;
    r.kind = LabelRuleKind::Fingerprint;
    return r;
}

LabelTranslationRule LabelTranslationRule::from_weight_file(const std::filesystem::path &path) {
    LabelTranslationRule r;
    r.kind = LabelRuleKind::WeightMap;
    auto lines = read_lines(path);
    for (std::size_t i = 0; i < lines.size(); i++) {
        auto fields = split(lines[i], ',');
        long long label = 0;
        double w = 0.0;
        if (fields.size() != 2 || !parse_int(fields[0], label) || !parse_double(fields[1], w)) {
            malformed(path, i + 1, "expected 'label,weight'");
        }
        r.weights[static_cast<int>(label)] = w;
    }
    return r;
}

std::string LabelTranslationRule::name() const {
    switch (kind) {
        case LabelRuleKind::None: return "none";
        case LabelRuleKind::Bond: return no_bond_label ? "bond(no_bond=" + std::to_string(*no_bond_label) + ")" : "bond";
        case LabelRuleKind::Valence: return "valence";
        case LabelRuleKind::Fingerprint: return "fingerprint";
        case LabelRuleKind::WeightMap: return "weight-map";
    }
    return "unknown";
}

double LabelTranslationRule::weight(const std::optional<int> &label) const {
    switch (kind) {
        case LabelRuleKind::Bond:
            return (label && no_bond_label && *label == *no_bond_label) ? 0.0 : 1.0;
        case LabelRuleKind::WeightMap: {
            if (!label) {
                return 1.0;
            }
            auto it = weights.find(*label);
            if (it == weights.end()) {
                throw Error(ErrorKind::UnknownRule, "weight map has no entry for edge label " + std::to_string(*label));
            }
            return it->second;
        }
        default:
            // unweighted, valence 0/1/2 and fingerprint edges all map to 1
            return 1.0;
    }
}

bool LabelTranslationRule::keeps_class(int graph_label) const {
    if (kind != LabelRuleKind::Fingerprint) {
        return true;
    }
    return graph_label == 0 || graph_label == 4 || graph_label == 5;
}

LabelTranslationRule rule_from_name(std::string_view name) {
    if (name == "none") return LabelTranslationRule::none();
    if (name == "bond") return LabelTranslationRule::bond();
    if (name == "bond-md") return LabelTranslationRule::bond(0);
    if (name == "valence") return LabelTranslationRule::valence();
    if (name == "fingerprint") return LabelTranslationRule::fingerprint();
    throw Error(ErrorKind::UnknownRule, "unknown label translation rule '" + std::string(name) + "'");
}

double PreprocessReport::excluded_fraction() const {
    if (total_graphs == 0) {
        return 0.0;
    }
    return static_cast<double>(excluded_by_size + excluded_by_class) / static_cast<double>(total_graphs);
}

std::string PreprocessReport::to_text() const {
    nlohmann::ordered_json j;
    j["dataset"] = dataset;
    j["rule"] = rule;
    j["total_graphs"] = total_graphs;
    j["excluded_by_size"] = excluded_by_size;
    j["excluded_by_class"] = excluded_by_class;
    j["retained"] = retained;
    j["excluded_fraction"] = excluded_fraction();
    j["node_range"] = {min_nodes, max_nodes};
    j["max_singular_value"] = max_singular_value;
    j["scale"] = scale;
    j["scale_overridden"] = scale_overridden;
    return j.dump(2);
}

std::vector<Graph> DatasetBundle::unscaled_graphs() const {
    std::vector<Graph> out;
    out.reserve(graphs.size());
    for (const auto &g : graphs) {
        out.push_back(g.graph());
    }
    return out;
}

Matrix weighted_adjacency(const RawGraph &g, const LabelTranslationRule &rule) {
    Matrix a(g.num_nodes, g.num_nodes);
    for (const auto &e : g.edges) {
        double w = rule.weight(e.label);
        a(e.u, e.v) = w;
        a(e.v, e.u) = w;
    }
    return a;
}

DatasetBundle preprocess(const RawDataset &raw, const LabelTranslationRule &rule, const PreprocessOptions &options) {
    DatasetBundle out;
    out.name = raw.name;
    out.report.dataset = raw.name;
    out.report.rule = rule.name();
    out.report.total_graphs = raw.graphs.size();
    out.report.min_nodes = options.min_nodes;
    out.report.max_nodes = options.max_nodes;
    out.retained_raw.name = raw.name;
    out.retained_raw.has_edge_labels = raw.has_edge_labels;

    std::vector<Graph> kept;
    for (std::size_t i = 0; i < raw.graphs.size(); i++) {
        const auto &g = raw.graphs[i];
        if (g.num_nodes < options.min_nodes || g.num_nodes > options.max_nodes) {
            out.report.excluded_by_size++;
            continue;
        }
        if (!rule.keeps_class(raw.labels[i])) {
            out.report.excluded_by_class++;
            continue;
        }
        kept.push_back(validate_graph(weighted_adjacency(g, rule)));
        out.labels.push_back(raw.labels[i]);
        out.source_ids.push_back(i + 1);
        out.retained_raw.graphs.push_back(g);
        out.retained_raw.labels.push_back(raw.labels[i]);
    }
    out.report.retained = kept.size();
    if (kept.empty()) {
        throw Error(ErrorKind::EmptyDataset, "no graphs left after selection in " + raw.name);
    }
    for (const auto &g : kept) {
        out.report.max_singular_value = std::max(out.report.max_singular_value, max_singular_value(g));
    }
    double c = options.scale_override ? *options.scale_override : dataset_scale_factor(kept);
    out.report.scale = c;
    out.report.scale_overridden = options.scale_override.has_value();
    out.graphs.reserve(kept.size());
    for (auto &g : kept) {
        out.graphs.emplace_back(std::move(g), c);
    }
    return out;
}

Matrix read_adjacency_csv(const std::filesystem::path &path) {
    auto lines = read_lines(path);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < lines.size(); i++) {
        std::vector<double> row;
        for (auto field : split(lines[i], ',')) {
            double v = 0.0;
            if (!parse_double(field, v)) {
                malformed(path, i + 1, "non-numeric entry '" + std::string(field) + "'");
            }
            row.push_back(v);
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            malformed(path, i + 1, "row length differs from first row");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw Error(ErrorKind::EmptyMatrix, path.string() + " holds no rows");
    }
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); i++) {
        std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
    }
    return m;
}

void write_adjacency_csv(const Matrix &m, const std::filesystem::path &path) {
    std::ofstream out(path);
    for (std::size_t i = 0; i < m.rows(); i++) {
        for (std::size_t j = 0; j < m.cols(); j++) {
            out << (j ? "," : "") << format_double(m(i, j));
        }
        out << '\n';
    }
    if (!out) {
        throw Error(ErrorKind::MissingFile, "failed writing " + path.string());
    }
}

}  // namespace gbsk
