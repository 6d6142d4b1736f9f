// webclust: batch clustering of web-usage session logs.
//
// Subcommands: stats (corpus statistics), tolerance (threshold clustering),
// fcm (fuzzy c-means with entropy init and feature weighting), eval
// (cluster-quality metrics). JSON output carries a metadata block with the
// tool version, a digest of each input file and an echo of the semantic
// configuration, so identical inputs and config yield byte-identical output
// at any thread count.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "webclust/eval.hpp"
#include "webclust/fcm.hpp"
#include "webclust/serialize.hpp"
#include "webclust/session.hpp"
#include "webclust/tolerance.hpp"
#include "webclust/version.hpp"

namespace {

using webclust::ordered_json;

// Option combinations that only become checkable after parsing.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Accepts the default TOML config syntax plus JSON documents, keyed by
// subcommand section: {"fcm": {"alpha": 0.25}} mirrors [fcm] alpha=0.25.
class JsonOrTomlConfig : public CLI::ConfigBase {
public:
    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        std::string text(std::istreambuf_iterator<char>(input), {});
        auto first = text.find_first_not_of(" \t\r\n");
        if (first == std::string::npos || text[first] != '{') {
            std::istringstream toml(text);
            return CLI::ConfigBase::from_config(toml);
        }
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw CLI::ConfigError(std::string("bad JSON config: ") + e.what());
        }
        std::vector<CLI::ConfigItem> items;
        flatten({}, doc, items);
        return items;
    }

private:
    static void flatten(const std::vector<std::string>& parents, const nlohmann::json& node,
                        std::vector<CLI::ConfigItem>& out) {
        for (const auto& [key, value] : node.items()) {
            if (value.is_object()) {
                auto nested = parents;
                nested.push_back(key);
                flatten(nested, value, out);
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = key;
            if (value.is_string()) {
                item.inputs = {value.get<std::string>()};
            } else if (value.is_boolean()) {
                item.inputs = {value.get<bool>() ? "true" : "false"};
            } else if (value.is_array()) {
                for (const auto& v : value)
                    item.inputs.push_back(v.is_string() ? v.get<std::string>() : v.dump());
            } else if (value.is_null()) {
                throw CLI::ConfigError("null value for config key '" + key + "'");
            } else {
                item.inputs = {value.dump()};
            }
            out.push_back(std::move(item));
        }
    }
};

CLI::Validator double_range(double lo, double hi, bool lo_open, bool hi_open) {
    std::string bounds = (lo_open ? "(" : "[") + webclust::format_double(lo) + "," +
                         webclust::format_double(hi) + (hi_open ? ")" : "]");
    return CLI::Validator(
        [lo, hi, lo_open, hi_open, bounds](std::string& s) -> std::string {
            double v = 0.0;
            if (!CLI::detail::lexical_cast(s, v)) return "'" + s + "' is not a number";
            bool ok = (lo_open ? v > lo : v >= lo) && (hi_open ? v < hi : v <= hi);
            return ok ? std::string{} : "value " + s + " is outside " + bounds;
        },
        "in " + bounds);
}

struct InputOpts {
    std::string input;
    std::string dict = "embedded";
    std::string format = "json";
    std::string output;
    unsigned threads = 1;
};

void add_input_options(CLI::App& cmd, InputOpts& o) {
    cmd.add_option("--input", o.input, "Session log file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd.add_option("--dict", o.dict,
                   "Category dictionary: 'embedded' (names line in the input), "
                   "'msnbc' (built-in 17 categories), or a file of names")
        ->capture_default_str();
    cmd.add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    cmd.add_option("--output", o.output, "Write the report here instead of stdout");
    cmd.add_option("--threads", o.threads, "Worker threads; 0 picks the hardware count")
        ->capture_default_str();
}

webclust::SessionDataset load_input(const InputOpts& o) {
    if (o.dict == "embedded") return webclust::parse_log_file(o.input);
    if (o.dict == "msnbc")
        return webclust::parse_log_file(o.input, webclust::msnbc_dictionary());
    return webclust::parse_log_file(o.input, webclust::load_dictionary_file(o.dict));
}

std::string dict_mode(const std::string& dict) {
    return (dict == "embedded" || dict == "msnbc") ? dict : "file";
}

ordered_json metadata(const char* command, ordered_json inputs, ordered_json config) {
    return ordered_json{{"tool", webclust::kToolName},
                        {"version", webclust::kVersion},
                        {"command", command},
                        {"inputs", std::move(inputs)},
                        {"config", std::move(config)}};
}

void write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot open output file '" + path + "'");
    out << text;
    if (!out) throw UsageError("failed writing output file '" + path + "'");
}

void emit(ordered_json doc, const std::string& path) {
    write_output(doc.dump(2) + "\n", path);
}

void note(int verbosity, const std::string& message) {
    if (verbosity > 0) std::cerr << message << '\n';
}

// ---- stats ----------------------------------------------------------------

void run_stats(const InputOpts& o, int verbosity) {
    std::string digest = webclust::digest_file(o.input);
    auto data = load_input(o);
    note(verbosity, "parsed " + std::to_string(data.sessions.size()) + " sessions over " +
                        std::to_string(data.dictionary.size()) + " categories");
    auto stats = webclust::dataset_stats(data);

    if (o.format == "csv") {
        write_output(webclust::stats_csv(stats), o.output);
        return;
    }
    ordered_json doc;
    doc["metadata"] = metadata(
        "stats", ordered_json{{"input_digest", digest}},
        ordered_json{{"dict", dict_mode(o.dict)}, {"format", o.format}});
    doc["stats"] = webclust::to_json(stats);
    emit(std::move(doc), o.output);
}

// ---- tolerance ------------------------------------------------------------

struct ToleranceOpts : InputOpts {
    double p = 0.5;
    std::string dump_matrix;
};

void run_tolerance(const ToleranceOpts& o, int verbosity) {
    std::string digest = webclust::digest_file(o.input);
    auto data = load_input(o);
    auto sets = webclust::page_sets(data);
    auto rel = webclust::upper_approximation(sets, o.p, o.threads);
    auto merged = webclust::merge_tolerance_classes(rel);
    note(verbosity, std::to_string(merged.clusters.size()) + " clusters from " +
                        std::to_string(sets.size()) + " sessions at p=" +
                        webclust::format_double(o.p));

    if (!o.dump_matrix.empty()) {
        auto sim = webclust::similarity_matrix(sets, o.threads);
        write_output(webclust::similarity_matrix_csv(sim), o.dump_matrix);
    }

    if (o.format == "csv") {
        write_output(webclust::tolerance_csv(rel, merged), o.output);
        return;
    }
    ordered_json doc;
    doc["metadata"] = metadata(
        "tolerance", ordered_json{{"input_digest", digest}},
        ordered_json{{"p", o.p}, {"dict", dict_mode(o.dict)}, {"format", o.format}});
    doc["threshold"] = rel.threshold;
    doc["classes"] = rel.classes;
    doc["clusters"] = merged.clusters;
    emit(std::move(doc), o.output);
}

// ---- fcm --------------------------------------------------------------------

struct FcmOpts : InputOpts {
    double p = 0.5;
    double alpha = 0.5;
    double fuzzifier = 2.0;
    double beta = 0.5;
    double epsilon = 1e-6;
    std::size_t max_iter = 300;
    std::uint64_t seed = 42;
    std::string weights = "uniform";
    std::string vectorize = "normfreq";
    bool emit_memberships = false;
};

void run_fcm(const FcmOpts& o, int verbosity) {
    if (o.emit_memberships && o.format == "csv")
        throw UsageError("--emit-memberships requires --format json");

    std::string digest = webclust::digest_file(o.input);
    auto data = load_input(o);
    auto features = webclust::frequency_matrix(data, o.vectorize == "normfreq");
    std::size_t n = features.size();

    auto method = webclust::weight_method_from_string(o.weights);
    webclust::FeatureWeights weights;
    if (method != webclust::WeightMethod::Uniform) {
        // First-pass threshold clusters supply the class labels the
        // weighting formulas need.
        auto labels_cs = webclust::tolerance_components(webclust::page_sets(data), o.p,
                                                        o.threads);
        std::vector<int> labels(n, 0);
        for (std::size_t c = 0; c < labels_cs.clusters.size(); ++c)
            for (std::uint32_t id : labels_cs.clusters[c])
                labels[id - 1] = static_cast<int>(c);
        weights = webclust::compute_feature_weights(
            features, webclust::LabelAssignment::from_labels(std::move(labels)), method,
            o.threads);
    } else {
        weights.method = webclust::WeightMethod::Uniform;
    }

    webclust::FcmConfig config{.alpha = o.alpha,
                               .fuzzifier = o.fuzzifier,
                               .max_iter = o.max_iter,
                               .epsilon = o.epsilon,
                               .seed = o.seed,
                               .init_beta = o.beta,
                               .weights = weights};
    auto result = webclust::run_fcm(features, config, o.threads);
    auto clusters = webclust::harden(result.memberships);
    note(verbosity, std::to_string(result.centers.size()) + " centers, " +
                        (result.converged ? "converged" : "stopped") + " after " +
                        std::to_string(result.iterations) + " iterations");

    if (o.format == "csv") {
        write_output(webclust::cluster_set_csv(clusters), o.output);
        return;
    }
    bool with_memberships = o.emit_memberships || n <= 10000;
    ordered_json doc;
    doc["metadata"] = metadata(
        "fcm", ordered_json{{"input_digest", digest}},
        ordered_json{{"p", o.p},
                     {"alpha", o.alpha},
                     {"m", o.fuzzifier},
                     {"beta", o.beta},
                     {"epsilon", o.epsilon},
                     {"max_iter", o.max_iter},
                     {"seed", o.seed},
                     {"weights", o.weights},
                     {"vectorize", o.vectorize},
                     {"emit_memberships", with_memberships},
                     {"dict", dict_mode(o.dict)},
                     {"format", o.format}});
    doc["weights"] = webclust::to_json(weights);
    ordered_json result_json = webclust::to_json(result, with_memberships);
    for (auto& [key, value] : result_json.items()) doc[key] = std::move(value);
    doc["clusters"] = clusters.clusters;
    emit(std::move(doc), o.output);
}

// ---- eval -------------------------------------------------------------------

struct EvalOpts {
    std::string clusters;
    std::string labels;
    std::string format = "json";
    std::string output;
    bool with_pairs = false;
    unsigned threads = 1;
};

void run_eval(const EvalOpts& o) {
    if (o.with_pairs && o.format == "csv")
        throw UsageError("--with-pairs requires --format json");

    std::string clusters_digest = webclust::digest_file(o.clusters);
    std::string labels_digest = webclust::digest_file(o.labels);
    auto clusters = webclust::load_cluster_set(o.clusters);
    auto labels = webclust::load_cluster_set(o.labels);
    auto report = webclust::evaluate(clusters, labels, o.with_pairs);

    if (o.format == "csv") {
        write_output(webclust::eval_csv(report), o.output);
        return;
    }
    ordered_json doc;
    doc["metadata"] = metadata(
        "eval",
        ordered_json{{"clusters_digest", clusters_digest}, {"labels_digest", labels_digest}},
        ordered_json{{"with_pairs", o.with_pairs}, {"format", o.format}});
    ordered_json report_json = webclust::to_json(report);
    for (auto& [key, value] : report_json.items()) doc[key] = std::move(value);
    emit(std::move(doc), o.output);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Clustering toolkit for web-usage session logs"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(webclust::kVersion));
    app.set_config("--config", "", "Read defaults from a JSON or TOML file "
                                   "(sectioned by subcommand; flags win)");
    app.config_formatter(std::make_shared<JsonOrTomlConfig>());
    app.allow_config_extras(false);

    int verbosity = 0;
    app.add_flag("-v,--verbose", verbosity, "Progress notes on stderr");

    InputOpts stats_opts;
    auto* stats_cmd = app.add_subcommand("stats", "Summarize a session log");
    add_input_options(*stats_cmd, stats_opts);

    ToleranceOpts tol_opts;
    auto* tol_cmd =
        app.add_subcommand("tolerance", "Threshold-based similarity clustering");
    add_input_options(*tol_cmd, tol_opts);
    tol_cmd->add_option("--p", tol_opts.p, "Similarity threshold")
        ->check(double_range(0.0, 1.0, true, false))
        ->capture_default_str();
    tol_cmd->add_option("--dump-matrix", tol_opts.dump_matrix,
                        "Also write the pairwise similarity matrix to this CSV file");

    FcmOpts fcm_opts;
    auto* fcm_cmd = app.add_subcommand(
        "fcm", "Fuzzy c-means with entropy initialization and feature weighting");
    add_input_options(*fcm_cmd, fcm_opts);
    fcm_cmd->add_option("--p", fcm_opts.p, "Threshold for the label-making first pass")
        ->check(double_range(0.0, 1.0, true, false))
        ->capture_default_str();
    fcm_cmd->add_option("--alpha", fcm_opts.alpha, "Membership threshold for center updates")
        ->check(double_range(0.0, 1.0, false, false))
        ->capture_default_str();
    fcm_cmd->add_option("--m", fcm_opts.fuzzifier, "Fuzzifier, must exceed 1")
        ->check(double_range(1.0, 1e9, true, false))
        ->capture_default_str();
    fcm_cmd->add_option("--beta", fcm_opts.beta, "Similarity cutoff for initialization")
        ->check(double_range(0.0, 1.0, true, true))
        ->capture_default_str();
    fcm_cmd->add_option("--epsilon", fcm_opts.epsilon, "Convergence bound on center movement")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    fcm_cmd->add_option("--max-iter", fcm_opts.max_iter, "Iteration cap")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    fcm_cmd->add_option("--seed", fcm_opts.seed, "Recorded in output metadata")
        ->capture_default_str();
    fcm_cmd->add_option("--weights", fcm_opts.weights, "Feature weighting method")
        ->check(CLI::IsMember({"uniform", "info_gain", "gain_ratio"}))
        ->capture_default_str();
    fcm_cmd->add_option("--vectorize", fcm_opts.vectorize,
                        "Session vectors: normalized or raw visit counts")
        ->check(CLI::IsMember({"normfreq", "freq"}))
        ->capture_default_str();
    fcm_cmd->add_flag("--emit-memberships", fcm_opts.emit_memberships,
                      "Include the membership matrix even beyond 10,000 sessions");

    EvalOpts eval_opts;
    auto* eval_cmd = app.add_subcommand("eval", "Score clusters against reference labels");
    eval_cmd->add_option("--clusters", eval_opts.clusters, "Cluster file (JSON or CSV)")
        ->required()
        ->check(CLI::ExistingFile);
    eval_cmd->add_option("--labels", eval_opts.labels, "Label file (JSON or CSV)")
        ->required()
        ->check(CLI::ExistingFile);
    eval_cmd->add_option("--format", eval_opts.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    eval_cmd->add_option("--output", eval_opts.output,
                         "Write the report here instead of stdout");
    eval_cmd->add_flag("--with-pairs", eval_opts.with_pairs,
                       "Include per-(cluster,label) precision/recall/F");
    eval_cmd->add_option("--threads", eval_opts.threads,
                         "Accepted for interface symmetry; scoring is sequential")
        ->check(CLI::Range(0u, 1024u));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (stats_cmd->parsed()) run_stats(stats_opts, verbosity);
        else if (tol_cmd->parsed()) run_tolerance(tol_opts, verbosity);
        else if (fcm_cmd->parsed()) run_fcm(fcm_opts, verbosity);
        else if (eval_cmd->parsed()) run_eval(eval_opts);
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const webclust::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const webclust::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
}
