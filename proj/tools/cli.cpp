#include "cli.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "gbsk/bench.hpp"
#include "gbsk/dataset.hpp"
#include "gbsk/distribution.hpp"
#include "gbsk/error.hpp"
#include "gbsk/features.hpp"
#include "gbsk/parallel.hpp"
#include "gbsk/text.hpp"
#include "json.hpp"

namespace gbsk::cli {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

std::string hex_digest(const unsigned char *data, std::size_t len) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int md_len = 0;
    if (EVP_Digest(data, len, md, &md_len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 failed");
    }
    std::ostringstream s;
    for (unsigned int i = 0; i < md_len; i++) {
        s << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    }
    return s.str();
}

}  // namespace

std::string text_digest(const std::string &text) {
    return hex_digest(reinterpret_cast<const unsigned char *>(text.data()), text.size());
}

std::string file_digest(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::MissingFile, "cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return text_digest(buf.str());
}

namespace {

std::string utc_now() {
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Everything except the timestamps is a function of the command line and
/// the input bytes; run_id hashes exactly that part.
class Manifest {
   public:
    Manifest(std::string command, json config) : start_(std::chrono::steady_clock::now()), started_at_(utc_now()) {
        det_["command"] = std::move(command);
        det_["config"] = std::move(config);
        det_["inputs"] = json::array();
        det_["version"] = kVersion;
    }

    void add_input(const fs::path &p) {
        det_["inputs"].push_back({{"path", p.string()}, {"sha256", file_digest(p)}});
    }

    std::string run_id() const { return text_digest(det_.dump()); }

    void add_output(const fs::path &p) { outputs_.push_back({{"path", p.string()}, {"sha256", file_digest(p)}}); }

    void write(const fs::path &p) const {
        json j;
        j["run_id"] = run_id();
        for (const auto &[k, v] : det_.items()) {
            j[k] = v;
        }
        j["started_at"] = started_at_;
        j["wall_clock_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        j["outputs"] = outputs_;
        write_text(p, j.dump(2) + "\n");
    }

    static void write_text(const fs::path &p, const std::string &text) {
        std::ofstream out(p, std::ios::binary);
        out << text;
        if (!out) {
            throw Error(ErrorKind::MissingFile, "cannot write " + p.string());
        }
    }

   private:
    json det_;
    json outputs_ = json::array();
    std::chrono::steady_clock::time_point start_;
    std::string started_at_;
};

fs::path manifest_path(const fs::path &out) { return fs::path(out.string() + ".manifest.json"); }

struct GraphInput {
    std::string dataset_dir;
    std::string name;
    std::string rule = "none";
    std::string weight_map;
    std::string graph_file;
    std::optional<double> scale;
    std::size_t min_nodes = 6;
    std::size_t max_nodes = 25;

    void add_flags(CLI::App *cmd, bool allow_dataset = true) {
        if (allow_dataset) {
            cmd->add_option("--dataset", dataset_dir, "TU-format dataset directory");
            cmd->add_option("--name", name, "dataset name (file prefix); defaults to the directory name");
            cmd->add_option("--rule", rule, "edge label rule: none, bond, bond-md, valence, fingerprint")
                ->capture_default_str();
            cmd->add_option("--weight-map", weight_map, "file of 'label,weight' lines (overrides --rule)");
            cmd->add_option("--min-nodes", min_nodes)->capture_default_str();
            cmd->add_option("--max-nodes", max_nodes)->capture_default_str();
            cmd->add_option("--scale-override", scale, "rescaling constant c instead of the dataset rule");
        }
        cmd->add_option("--graph", graph_file, "single-graph adjacency CSV");
        if (!allow_dataset) {
            cmd->add_option("--scale", scale, "rescaling constant c (default 1/(s_max + 1e-8))");
        }
    }

    json to_json() const {
        json j;
        if (!graph_file.empty()) {
            j["graph"] = graph_file;
        } else {
            j["dataset"] = dataset_dir;
            j["name"] = dataset_name();
            j["rule"] = weight_map.empty() ? rule : "weight-map";
            j["min_nodes"] = min_nodes;
            j["max_nodes"] = max_nodes;
        }
        j["scale"] = scale ? json(*scale) : json(nullptr);
        return j;
    }

    std::string dataset_name() const {
        if (!name.empty()) {
            return name;
        }
        return fs::path(dataset_dir).lexically_normal().filename().string().empty()
                   ? fs::path(dataset_dir).lexically_normal().parent_path().filename().string()
                   : fs::path(dataset_dir).lexically_normal().filename().string();
    }

    void add_inputs(Manifest &m) const {
        if (!graph_file.empty()) {
            m.add_input(graph_file);
            return;
        }
        auto n = dataset_name();
        for (const char *suffix : {"A", "graph_indicator", "graph_labels", "edge_labels"}) {
            fs::path p = fs::path(dataset_dir) / (n + "_" + suffix + ".txt");
            if (fs::exists(p)) {
                m.add_input(p);
            }
        }
        if (!weight_map.empty()) {
            m.add_input(weight_map);
        }
    }

    DatasetBundle load() const {
        if (graph_file.empty() == dataset_dir.empty()) {
            throw CLI::ValidationError("exactly one of --dataset or --graph is required");
        }
        if (!graph_file.empty()) {
            Graph g = validate_graph(read_adjacency_csv(graph_file));
            double c = scale ? *scale : dataset_scale_factor(std::span<const Graph>(&g, 1));
            DatasetBundle b;
            b.name = fs::path(graph_file).stem().string();
            b.report.dataset = b.name;
            b.report.rule = "none";
            b.report.total_graphs = 1;
            b.report.retained = 1;
            b.report.max_singular_value = max_singular_value(g);
            b.report.scale = c;
            b.report.scale_overridden = scale.has_value();
            b.graphs.emplace_back(std::move(g), c);
            b.labels.push_back(0);
            b.source_ids.push_back(1);
            return b;
        }
        RawDataset raw = parse_tu_dataset(dataset_dir, dataset_name());
        LabelTranslationRule r =
            weight_map.empty() ? rule_from_name(rule) : LabelTranslationRule::from_weight_file(weight_map);
        PreprocessOptions opts;
        opts.min_nodes = min_nodes;
        opts.max_nodes = max_nodes;
        opts.scale_override = scale;
        return preprocess(raw, r, opts);
    }
};

struct FeatureFlags {
    FeatureConfig cfg;
    std::string coarse = "orbit";
    std::uint64_t seed = 0;
    std::size_t samples = 0;

    void add_flags(CLI::App *cmd) {
        cmd->add_option("--k", cfg.k, "maximum photon number")->capture_default_str();
        cmd->add_option("--displacement", cfg.displacement, "uniform displacement d")->capture_default_str();
        cmd->add_option("--coarse", coarse, "coarse-graining: orbit or meta")
            ->check(CLI::IsMember({"orbit", "meta"}))
            ->capture_default_str();
        cmd->add_option("--loss", cfg.loss, "photon loss nu in [0, 1]")->capture_default_str();
        cmd->add_option("--seed", seed, "seed for sampled features")->capture_default_str();
        cmd->add_option("--samples", samples, "estimate features from this many samples (0 = exact)")
            ->capture_default_str();
    }

    FeatureConfig config() const {
        FeatureConfig c = cfg;
        c.coarse = coarse == "meta" ? CoarseGraining::MetaOrbit : CoarseGraining::Orbit;
        c.validate();
        return c;
    }

    json to_json() const {
        FeatureConfig c = config();
        return json{{"k", c.k},       {"displacement", c.displacement}, {"coarse", std::string(to_string(c.coarse))},
                    {"loss", c.loss}, {"rbf_delta", c.rbf_delta},       {"seed", seed},
                    {"samples", samples}};
    }
};

std::size_t resolve_jobs(std::size_t flag) { return flag > 0 ? flag : default_jobs(); }

std::vector<FeatureVector> compute_features(const DatasetBundle &b, const FeatureFlags &flags, std::size_t jobs) {
    const FeatureConfig cfg = flags.config();
    std::vector<FeatureVector> out(b.graphs.size());
    parallel_for(out.size(), jobs, [&](std::size_t i) {
        if (flags.samples == 0) {
            out[i] = feature_vector(b.graphs[i], cfg);
            return;
        }
        if (static_cast<std::size_t>(cfg.k) > b.graphs[i].num_nodes()) {
            throw Error(ErrorKind::KExceedsModes, "k exceeds the number of modes");
        }
        if (cfg.loss > 0.0 && cfg.displacement > 0.0) {
            throw Error(ErrorKind::DisplacedLossUnsupported, "loss combined with displacement is not supported");
        }
        GbsEncoding e = encode(b.graphs[i], cfg.displacement);
        if (cfg.loss > 0.0) {
            e = apply_loss(e, cfg.loss);
        }
        std::uint64_t graph_seed = CounterRng(flags.seed, i).next();
        out[i] = empirical_features(sample_events(e, cfg, flags.samples, graph_seed), cfg);
    });
    return out;
}

std::string feature_csv(const std::string &run_id, const DatasetBundle &b, const std::vector<FeatureVector> &fv,
                        const FeatureConfig &cfg) {
    std::size_t modes = b.graphs.front().num_nodes();
    for (const auto &g : b.graphs) {
        modes = std::min(modes, g.num_nodes());
    }
    FeatureIndex index = feature_index(cfg, modes);
    std::ostringstream s;
    s << "# run_id=" << run_id << '\n';
    s << "graph_id";
    for (const auto &l : index.labels()) {
        s << ',' << csv_field(l);
    }
    s << ",overflow\n";
    for (std::size_t i = 0; i < fv.size(); i++) {
        s << b.source_ids[i];
        for (double v : fv[i].values) {
            s << ',' << format_double(v);
        }
        s << ',' << format_double(fv[i].overflow) << '\n';
    }
    return s.str();
}

std::string gram_csv(const std::string &run_id, const std::vector<std::string> &ids, const Matrix &g) {
    std::ostringstream s;
    s << "# run_id=" << run_id << '\n';
    s << "graph_id";
    for (const auto &id : ids) {
        s << ',' << id;
    }
    s << '\n';
    for (std::size_t i = 0; i < g.rows(); i++) {
        s << ids[i];
        for (std::size_t j = 0; j < g.cols(); j++) {
            s << ',' << format_double(g(i, j));
        }
        s << '\n';
    }
    return s.str();
}

struct FeatureTable {
    std::vector<std::string> ids;
    Matrix rows;
};

FeatureTable read_feature_csv(const fs::path &path) {
    auto lines = read_lines(path);
    std::size_t at = 0;
    while (at < lines.size() && !lines[at].empty() && lines[at][0] == '#') {
        at++;
    }
    if (at >= lines.size()) {
        throw Error(ErrorKind::MalformedLine, path.string() + ": missing header");
    }
    auto header = split_csv(lines[at]);
    if (header.size() < 2 || trim(header[0]) != "graph_id") {
        throw Error(ErrorKind::MalformedLine, path.filename().string() + ":" + std::to_string(at + 1) +
                                                  ": header must start with graph_id");
    }
    const bool has_overflow = trim(header.back()) == "overflow";
    const std::size_t d = header.size() - 1 - (has_overflow ? 1 : 0);
    FeatureTable t;
    std::vector<std::vector<double>> rows;
    for (std::size_t i = at + 1; i < lines.size(); i++) {
        auto fields = split_csv(lines[i]);
        if (fields.size() != header.size()) {
            throw Error(ErrorKind::MalformedLine, path.filename().string() + ":" + std::to_string(i + 1) +
                                                      ": expected " + std::to_string(header.size()) + " fields");
        }
        t.ids.emplace_back(trim(fields[0]));
        std::vector<double> row(d);
        for (std::size_t j = 0; j < d; j++) {
            if (!parse_double(fields[j + 1], row[j])) {
                throw Error(ErrorKind::MalformedLine,
                            path.filename().string() + ":" + std::to_string(i + 1) + ": non-numeric feature");
            }
        }
        rows.push_back(std::move(row));
    }
    t.rows = Matrix(rows.size(), d);
    for (std::size_t i = 0; i < rows.size(); i++) {
        std::copy(rows[i].begin(), rows[i].end(), t.rows.row(i).begin());
    }
    return t;
}

std::vector<int> parse_counts(const std::string &text) {
    std::vector<int> out;
    for (auto f : split(text, ',')) {
        long long v = 0;
        if (!parse_int(f, v)) {
            throw CLI::ValidationError("expected comma-separated integers, got '" + text + "'");
        }
        out.push_back(static_cast<int>(v));
    }
    return out;
}

KernelKind kernel_from(const std::string &s) { return s == "linear" ? KernelKind::Linear : KernelKind::Rbf; }

// --- commands

int cmd_features(const GraphInput &in, const FeatureFlags &flags, const std::string &out_path, std::size_t jobs,
                 std::ostream &out) {
    const FeatureConfig cfg = flags.config();
    json config = flags.to_json();
    config["input"] = in.to_json();
    Manifest m("features", config);
    in.add_inputs(m);
    DatasetBundle b = in.load();
    auto fv = compute_features(b, flags, jobs);
    Manifest::write_text(out_path, feature_csv(m.run_id(), b, fv, cfg));
    m.add_output(out_path);
    if (in.graph_file.empty()) {
        fs::path report = out_path + ".report.json";
        Manifest::write_text(report, b.report.to_text() + "\n");
        m.add_output(report);
    }
    m.write(manifest_path(out_path));
    out << "wrote " << fv.size() << " feature rows to " << out_path << '\n';
    return kExitOk;
}

int cmd_kernel(const GraphInput &in, const FeatureFlags &flags, const std::string &features_file,
               const std::string &kernel, double delta, const std::string &out_path, std::size_t jobs,
               std::ostream &out) {
    const KernelKind kind = kernel_from(kernel);
    json config{{"kernel", kernel}, {"delta", delta}};
    Matrix gram;
    std::vector<std::string> ids;
    std::optional<Manifest> m;
    if (!features_file.empty()) {
        if (!in.dataset_dir.empty() || !in.graph_file.empty()) {
            throw CLI::ValidationError("--features excludes --dataset and --graph");
        }
        config["features"] = features_file;
        m.emplace("kernel", config);
        m->add_input(features_file);
        FeatureTable t = read_feature_csv(features_file);
        gram = gram_from_rows(t.rows, kind, delta, jobs);
        ids = t.ids;
    } else {
        config["features"] = flags.to_json();
        config["input"] = in.to_json();
        m.emplace("kernel", config);
        in.add_inputs(*m);
        DatasetBundle b = in.load();
        FeatureFlags f = flags;
        f.cfg.rbf_delta = delta;
        auto fv = compute_features(b, f, jobs);
        gram = gram_matrix(fv, kind, jobs).values;
        for (auto id : b.source_ids) {
            ids.push_back(std::to_string(id));
        }
    }
    Manifest::write_text(out_path, gram_csv(m->run_id(), ids, gram));
    m->add_output(out_path);
    m->write(manifest_path(out_path));
    out << "wrote " << gram.rows() << "x" << gram.cols() << " Gram matrix to " << out_path << '\n';
    return kExitOk;
}

int cmd_probe(const GraphInput &in, const std::string &event, const std::string &orbit, double displacement,
              double loss, std::ostream &out) {
    if (event.empty() == orbit.empty()) {
        throw CLI::ValidationError("exactly one of --event or --orbit is required");
    }
    DatasetBundle b = in.load();
    const ScaledGraph &g = b.graphs.front();
    if (loss > 0.0 && displacement > 0.0) {
        throw Error(ErrorKind::DisplacedLossUnsupported, "loss combined with displacement is not supported");
    }
    GbsEncoding e = encode(g, displacement);
    if (loss > 0.0) {
        e = apply_loss(e, loss);
    }
    double p = 0.0;
    if (!event.empty()) {
        PhotonEvent n(parse_counts(event));
        if (n.modes() != g.num_nodes()) {
            throw Error(ErrorKind::DimensionMismatch, "event has " + std::to_string(n.modes()) +
                                                          " modes, graph has " + std::to_string(g.num_nodes()));
        }
        p = probability(e, n);
    } else {
        Orbit o{parse_counts(orbit)};
        if (std::any_of(o.partition.begin(), o.partition.end(), [](int v) { return v <= 0; })) {
            throw Error(ErrorKind::OutOfRange, "orbit parts must be positive");
        }
        std::sort(o.partition.rbegin(), o.partition.rend());
        if (o.partition.size() > g.num_nodes()) {
            throw Error(ErrorKind::KExceedsModes, "orbit has more parts than the graph has modes");
        }
        p = orbit_probability(e, o);
    }
    out << format_double(p) << '\n';
    return kExitOk;
}

int cmd_bench(const GraphInput &in, const FeatureFlags &flags, const std::string &kernel, double delta,
              bool standardize, CvProtocol protocol, const std::string &out_path, std::ostream &out) {
    if (!in.graph_file.empty()) {
        throw CLI::ValidationError("bench needs --dataset");
    }
    FeatureConfig cfg = flags.config();
    cfg.rbf_delta = delta;
    BenchOptions opts;
    opts.kernel = kernel_from(kernel);
    opts.standardize = standardize;
    json config = flags.to_json();
    config["rbf_delta"] = delta;
    config["input"] = in.to_json();
    config["kernel"] = kernel;
    config["standardize"] = standardize;
    config["outer_folds"] = protocol.outer_folds;
    config["inner_folds"] = protocol.inner_folds;
    config["repeats"] = protocol.repeats;
    config["cv_seed"] = protocol.seed;
    Manifest m("bench", config);
    in.add_inputs(m);
    DatasetBundle b = in.load();
    CvResult r = double_cross_validate(b, cfg, protocol, opts);

    std::map<int, std::size_t> counts;
    for (int l : b.labels) {
        counts[l]++;
    }
    std::size_t majority = 0;
    for (const auto &[l, c] : counts) {
        majority = std::max(majority, c);
    }
    json j;
    j["run_id"] = m.run_id();
    json report = json::parse(cv_report(b.name, cfg, opts, protocol, r));
    for (const auto &[k, v] : report.items()) {
        j[k] = v;
    }
    j["graphs"] = b.graphs.size();
    j["majority_baseline"] = static_cast<double>(majority) / static_cast<double>(b.labels.size());
    Manifest::write_text(out_path, j.dump(2) + "\n");
    m.add_output(out_path);
    m.write(manifest_path(out_path));
    out << "accuracy " << format_double(r.mean) << " +- " << format_double(r.stddev) << " over " << protocol.repeats
        << " repeats\n";
    return kExitOk;
}

Graph random_graph(std::uint64_t seed, std::size_t nodes, double edge_prob) {
    CounterRng rng(seed);
    Matrix a(nodes, nodes);
    for (std::size_t i = 0; i < nodes; i++) {
        for (std::size_t j = i + 1; j < nodes; j++) {
            if (rng.uniform() < edge_prob) {
                a(i, j) = 1.0;
                a(j, i) = 1.0;
            }
        }
    }
    return validate_graph(a);
}

int cmd_loss_demo(const GraphInput &in, std::optional<std::uint64_t> random_seed, std::size_t nodes,
                  double edge_prob, double nu, int k, const std::string &out_path, std::size_t jobs,
                  std::ostream &out) {
    json config{{"nu", nu}, {"k", k}};
    std::optional<ScaledGraph> g;
    if (random_seed) {
        if (!in.graph_file.empty()) {
            throw CLI::ValidationError("--random-seed excludes --graph");
        }
        config["random_seed"] = *random_seed;
        config["nodes"] = nodes;
        config["edge_prob"] = edge_prob;
        Graph rg = random_graph(*random_seed, nodes, edge_prob);
        double c = in.scale ? *in.scale : dataset_scale_factor(std::span<const Graph>(&rg, 1));
        g.emplace(std::move(rg), c);
    } else {
        g.emplace(in.load().graphs.front());
    }
    config["scale"] = g->scale();
    Manifest m("loss-demo", config);
    if (!random_seed) {
        in.add_inputs(m);
    }
    FeatureConfig cfg;
    cfg.k = k;
    cfg.loss = nu;
    cfg.validate();
    if (static_cast<std::size_t>(k) > g->num_nodes()) {
        throw Error(ErrorKind::KExceedsModes, "k exceeds the number of modes");
    }
    GbsEncoding pure = encode(*g);
    GbsEncoding lossy = apply_loss(pure, nu);
    auto orbits = enumerate_orbits(k, g->num_nodes());
    auto p0 = orbit_probabilities(pure, orbits, jobs);
    auto p1 = orbit_probabilities(lossy, orbits, jobs);
    std::ostringstream s;
    s << "# run_id=" << m.run_id() << '\n';
    s << "orbit,lossless,lossy\n";
    for (std::size_t i = 0; i < orbits.size(); i++) {
        s << csv_field(orbits[i].label()) << ',' << format_double(p0[i]) << ',' << format_double(p1[i]) << '\n';
    }
    Manifest::write_text(out_path, s.str());
    m.add_output(out_path);
    m.write(manifest_path(out_path));
    out << "wrote " << orbits.size() << " orbits to " << out_path << '\n';
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Gaussian boson sampling graph features, kernels and benchmarks", "gbsk"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    std::size_t jobs_flag = 0;
    app.add_option("--jobs", jobs_flag, "worker threads (default: GBSK_JOBS or all cores)");

    GraphInput in;
    FeatureFlags flags;
    std::string out_path;

    auto *features = app.add_subcommand("features", "orbit or meta-orbit feature matrix as CSV");
    in.add_flags(features);
    flags.add_flags(features);
    features->add_option("--out", out_path, "output CSV")->required();
    features->add_option("--jobs", jobs_flag, "worker threads");

    std::string features_file;
    std::string kernel = "rbf";
    double delta = 1.0;
    auto *kernel_cmd = app.add_subcommand("kernel", "Gram matrix as CSV");
    in.add_flags(kernel_cmd);
    flags.add_flags(kernel_cmd);
    kernel_cmd->add_option("--features", features_file, "feature CSV written by 'features'");
    kernel_cmd->add_option("--kernel", kernel)->check(CLI::IsMember({"linear", "rbf"}))->capture_default_str();
    kernel_cmd->add_option("--delta", delta, "rbf width")->capture_default_str();
    kernel_cmd->add_option("--out", out_path, "output CSV")->required();
    kernel_cmd->add_option("--jobs", jobs_flag, "worker threads");

    std::string event;
    std::string orbit;
    double displacement = 0.0;
    double loss = 0.0;
    GraphInput probe_in;
    auto *probe = app.add_subcommand("probe", "probability of one event or orbit");
    probe_in.add_flags(probe, false);
    probe->add_option("--event", event, "photon counts per mode, e.g. 1,1,0");
    probe->add_option("--orbit", orbit, "orbit partition, e.g. 2,1");
    probe->add_option("--displacement", displacement)->capture_default_str();
    probe->add_option("--loss", loss)->capture_default_str();

    CvProtocol protocol;
    bool standardize = false;
    auto *bench = app.add_subcommand("bench", "double cross-validated SVM accuracy");
    in.add_flags(bench);
    flags.add_flags(bench);
    bench->add_option("--kernel", kernel)->check(CLI::IsMember({"linear", "rbf"}))->capture_default_str();
    bench->add_option("--delta", delta, "rbf width")->capture_default_str();
    bench->add_flag("--standardize", standardize, "standardize feature columns before the kernel");
    bench->add_option("--outer", protocol.outer_folds)->capture_default_str();
    bench->add_option("--inner", protocol.inner_folds)->capture_default_str();
    bench->add_option("--repeats", protocol.repeats)->capture_default_str();
    bench->add_option("--cv-seed", protocol.seed)->capture_default_str();
    bench->add_option("--out", out_path, "output JSON")->required();
    bench->add_option("--jobs", jobs_flag, "worker threads");

    GraphInput demo_in;
    std::optional<std::uint64_t> random_seed;
    std::size_t nodes = 10;
    double edge_prob = 0.5;
    double nu = 0.5;
    int demo_k = 6;
    auto *demo = app.add_subcommand("loss-demo", "orbit distribution with and without loss");
    demo_in.add_flags(demo, false);
    demo->add_option("--random-seed", random_seed, "use a seeded random graph instead of --graph");
    demo->add_option("--nodes", nodes)->capture_default_str();
    demo->add_option("--edge-prob", edge_prob)->capture_default_str();
    demo->add_option("--nu", nu)->capture_default_str();
    demo->add_option("--k", demo_k)->capture_default_str();
    demo->add_option("--out", out_path, "output CSV")->required();
    demo->add_option("--jobs", jobs_flag, "worker threads");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
        const std::size_t jobs = resolve_jobs(jobs_flag);
        if (features->parsed()) {
            return cmd_features(in, flags, out_path, jobs, out);
        }
        if (kernel_cmd->parsed()) {
            return cmd_kernel(in, flags, features_file, kernel, delta, out_path, jobs, out);
        }
        if (probe->parsed()) {
            return cmd_probe(probe_in, event, orbit, displacement, loss, out);
        }
        if (bench->parsed()) {
            protocol.jobs = jobs;
            return cmd_bench(in, flags, kernel, delta, standardize, protocol, out_path, out);
        }
        if (demo->parsed()) {
            return cmd_loss_demo(demo_in, random_seed, nodes, edge_prob, nu, demo_k, out_path, jobs, out);
        }
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return exit_code(e.family());
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitUnexpected;
    }
    return kExitUsage;
}

}  // namespace gbsk::cli
