#include "impactlab/cli.hpp"

#include "impactlab/callgraph.hpp"
#include "impactlab/dataset.hpp"
#include "impactlab/error.hpp"
#include "impactlab/evaluation.hpp"
#include "impactlab/learning.hpp"
#include "impactlab/minilang/analysis.hpp"
#include "impactlab/minilang/syntax.hpp"
#include "impactlab/mutation.hpp"
#include "impactlab/prediction.hpp"
#include "impactlab/report.hpp"
#include "impactlab/synth.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>
#include <thread>

namespace impactlab::cli {

namespace {

namespace fs = std::filesystem;

struct Options {
    // inputs
    std::string program;
    std::string graph;
    std::string mutations;
    std::string weights;
    std::string changed;
    std::string output;

    bool cha = false;
    double threshold = kDefaultThreshold;
    std::vector<double> thresholds{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    std::vector<std::string> operators{"ABS", "AOR", "LCR", "ROR", "UOI"};
    std::size_t cap = 600;
    std::size_t folds = 10;
    std::size_t repeats = 10;
    std::uint64_t seed = 0;
    std::vector<std::string> algos{"tc", "binary", "dichotomic"};
    std::string algo = "dichotomic";
    std::size_t jobs = 1;
    std::string format = "text";
    std::size_t bins = 10;

    // synth
    std::size_t apps = 60;
    std::size_t tests = 20;
    double density = 0.05;
    std::vector<double> palette{0.0, 0.9};
    std::size_t mutations_per_node = 20;
};

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string seconds(double s) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(3) << s << " s";
    return out.str();
}

void require_readable(const std::string& path) {
    std::error_code ec;
    if (!fs::is_regular_file(path, ec)) {
        throw InvalidArgument("cannot read '" + path + "'");
    }
}

void require_writable(const std::string& path) {
    if (path.empty()) {
        return;
    }
    const fs::path parent = fs::path(path).parent_path();
    std::error_code ec;
    if (!parent.empty() && !fs::is_directory(parent, ec)) {
        throw InvalidArgument("output directory '" + parent.string() + "' does not exist");
    }
}

/// Writes to `path`, or to `out` when no path is given.
void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file || !(file << text) || !file.flush()) {
        throw InvalidArgument("cannot write '" + path + "'");
    }
}

Format format_of(const Options& o) {
    auto f = parse_format(o.format);
    if (!f) {
        throw InvalidArgument("unknown format '" + o.format + "' (expected json, text or csv)");
    }
    return *f;
}

Technique technique_of(const std::string& name) {
    auto t = parse_technique(name);
    if (!t) {
        throw InvalidArgument("unknown algorithm '" + name + "' (expected tc, binary or dichotomic)");
    }
    return *t;
}

CvConfig cv_config(const Options& o) {
    return {o.folds, o.repeats, o.seed, std::max<std::size_t>(1, o.jobs)};
}

/// Loads a graph and a mutation dataset and checks that they belong together.
std::pair<std::shared_ptr<const CallGraph>, MutationDataset> load_pair(const Options& o) {
    require_readable(o.graph);
    require_readable(o.mutations);
    auto graph = std::make_shared<const CallGraph>(load_graph_file(o.graph));
    MutationDataset ds = load_dataset_file(o.mutations);
    const std::string hash = graph_hash(*graph);
    if (ds.graph_hash != hash) {
        throw IntegrityError("mutation file was produced for graph " + ds.graph_hash + ", but '" + o.graph +
                             "' hashes to " + hash);
    }
    return {std::move(graph), std::move(ds)};
}

int cmd_extract(const Options& o, std::ostream& out, std::ostream&) {
    require_readable(o.program);
    require_writable(o.output);
    const minilang::Program program = minilang::parse_file(o.program);
    emit(o.output, save_graph(minilang::extract_call_graph(program, o.cha)), out);
    return kSuccess;
}

int cmd_mutate(const Options& o, std::ostream& out, std::ostream& err) {
    require_readable(o.program);
    require_readable(o.graph);
    require_writable(o.output);
    std::vector<Operator> ops;
    for (const auto& name : o.operators) {
        auto op = parse_operator(name);
        if (!op) {
            throw InvalidArgument("unknown mutation operator '" + name + "'");
        }
        if (std::find(ops.begin(), ops.end(), *op) == ops.end()) {
            ops.push_back(*op);
        }
    }
    std::sort(ops.begin(), ops.end());

    const minilang::Program program = minilang::parse_file(o.program);
    const CallGraph graph = load_graph_file(o.graph);
    require_green_baseline(program);

    Stopwatch clock;
    std::vector<Mutant> mutants;
    for (Operator op : ops) {
        MutantSample sample = sample_mutants(program, op, o.cap, derive_seed(o.seed, static_cast<std::uint64_t>(op)));
        err << to_string(op) << ": " << sample.mutants.size() << " of " << sample.population << " sites\n";
        std::move(sample.mutants.begin(), sample.mutants.end(), std::back_inserter(mutants));
    }

    MutationDataset ds;
    ds.graph_hash = graph_hash(graph);
    ds.records.resize(mutants.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < mutants.size(); i = next++) {
            try {
                ds.records[i] = compute_record(program, mutants[i], graph);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    };
    {
        const std::size_t workers = std::clamp<std::size_t>(o.jobs, 1, std::max<std::size_t>(1, mutants.size()));
        std::vector<std::jthread> pool;
        for (std::size_t j = 1; j < workers; ++j) {
            pool.emplace_back(work);
        }
        work();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    err << "ran " << mutants.size() << " mutants in " << seconds(clock.seconds()) << '\n';
    emit(o.output, save_dataset(ds), out);
    return kSuccess;
}

int cmd_learn(const Options& o, std::ostream& out, std::ostream& err) {
    require_writable(o.output);
    auto [graph, ds] = load_pair(o);
    const Technique t = technique_of(o.algo);
    if (t == Technique::TC) {
        throw InvalidArgument("tc has no weights to learn");
    }
    Stopwatch clock;
    PathIndex paths(graph);
    const WeightedCallGraph w =
        train(graph, ds.records, t == Technique::Binary ? Algorithm::Binary : Algorithm::Dichotomic, &paths);
    err << "learned " << to_string(t) << " weights from " << ds.records.size() << " records in "
        << seconds(clock.seconds()) << '\n';
    emit(o.output, save_weights(w), out);
    return kSuccess;
}

int cmd_predict(const Options& o, std::ostream& out, std::ostream&) {
    require_readable(o.graph);
    require_writable(o.output);
    auto graph = std::make_shared<const CallGraph>(load_graph_file(o.graph));
    Prediction p;
    if (o.weights.empty()) {
        p = predict_tc(*graph, o.changed);
    } else {
        require_readable(o.weights);
        p = predict(load_weights_file(o.weights, graph), o.changed, o.threshold);
    }
    emit(o.output, to_json(p) + "\n", out);
    return kSuccess;
}

int cmd_evaluate(const Options& o, std::ostream& out, std::ostream& err) {
    require_writable(o.output);
    const Format format = format_of(o);
    std::vector<Technique> techniques;
    for (const auto& name : o.algos) {
        techniques.push_back(technique_of(name));
    }
    auto [graph, ds] = load_pair(o);
    const CvConfig config = cv_config(o);

    PathIndex paths(graph);
    std::vector<CrossValReport> reports;
    for (Technique t : techniques) {
        Stopwatch clock;
        reports.push_back(cross_validate(graph, ds.records, t, o.threshold, config, &paths));
        err << to_string(t) << ": " << seconds(clock.seconds()) << '\n';
    }
    emit(o.output, render_evaluation(reports, format), out);
    return kSuccess;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
    require_writable(o.output);
    const Format format = format_of(o);
    const Technique t = technique_of(o.algo);
    auto [graph, ds] = load_pair(o);
    const CvConfig config = cv_config(o);
    Stopwatch clock;
    const auto points = threshold_sweep(graph, ds.records, t, o.thresholds, config);
    err << to_string(t) << " sweep over " << o.thresholds.size() << " thresholds: " << seconds(clock.seconds())
        << '\n';
    emit(o.output, render_sweep(t, config, points, format), out);
    return kSuccess;
}

int cmd_synth(const Options& o, std::ostream&, std::ostream& err) {
    if (o.output.empty()) {
        throw InvalidArgument("synth needs an output prefix (-o)");
    }
    const std::string graph_path = o.output + ".graph.jsonl";
    const std::string mutations_path = o.output + ".mutations.jsonl";
    const std::string weights_path = o.output + ".weights.jsonl";
    require_writable(graph_path);

    synth::SynthParams params;
    params.app_nodes = o.apps;
    params.test_nodes = o.tests;
    params.density = o.density;
    params.palette = o.palette;
    params.seed = o.seed;
    const synth::PlantedModel model = synth::generate_model(params);
    const MutationDataset ds = synth::simulate_dataset(model, o.mutations_per_node, o.seed);

    std::ostringstream unused;
    emit(graph_path, save_graph(*model.graph), unused);
    emit(mutations_path, save_dataset(ds), unused);
    emit(weights_path, save_weights(model.as_weights()), unused);
    err << "model: " << model.graph->node_count() << " nodes, " << model.graph->edge_count() << " edges; "
        << ds.records.size() << " records\n";
    return kSuccess;
}

int cmd_histogram(const Options& o, std::ostream& out, std::ostream&) {
    require_readable(o.graph);
    require_readable(o.weights);
    require_writable(o.output);
    const Format format = format_of(o);
    auto graph = std::make_shared<const CallGraph>(load_graph_file(o.graph));
    const WeightedCallGraph w = load_weights_file(o.weights, graph);
    emit(o.output, render_histogram(weight_histogram(w, o.bins), format), out);
    return kSuccess;
}

void add_output(CLI::App* cmd, Options& o) {
    cmd->add_option("-o,--output", o.output, "Output file (default: standard output)");
}

void add_cv(CLI::App* cmd, Options& o) {
    cmd->add_option("--folds", o.folds, "Cross-validation folds")->capture_default_str()->check(CLI::Range(2, 1 << 30));
    cmd->add_option("--repeats", o.repeats, "Cross-validation repeats")
        ->capture_default_str()
        ->check(CLI::Range(1, 1 << 30));
    cmd->add_option("--seed", o.seed, "Fold shuffling seed")->capture_default_str();
    cmd->add_option("--jobs", o.jobs, "Worker threads")->capture_default_str()->check(CLI::Range(1, 1024));
    cmd->add_option("--format", o.format, "json, text or csv")->capture_default_str();
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Learning-based change impact prediction on call graphs", "impactlab"};
    app.require_subcommand(1);

    auto* extract = app.add_subcommand("extract", "Extract the call graph of a MiniLang program");
    extract->add_option("program", o.program, "MiniLang source file")->required();
    extract->add_flag("--cha", o.cha, "Resolve interface calls to every implementor");
    add_output(extract, o);

    auto* mutate = app.add_subcommand("mutate", "Sample mutants and record the tests each one breaks");
    mutate->add_option("program", o.program, "MiniLang source file")->required();
    mutate->add_option("graph", o.graph, "Call graph file")->required();
    mutate->add_option("--operators", o.operators, "Comma-separated operators")
        ->delimiter(',')
        ->capture_default_str();
    mutate->add_option("--cap", o.cap, "Mutants per operator")->capture_default_str();
    mutate->add_option("--seed", o.seed, "Sampling seed")->capture_default_str();
    mutate->add_option("--jobs", o.jobs, "Worker threads")->capture_default_str()->check(CLI::Range(1, 1024));
    add_output(mutate, o);

    auto* learn = app.add_subcommand("learn", "Learn edge weights from a mutation file");
    learn->add_option("graph", o.graph, "Call graph file")->required();
    learn->add_option("mutations", o.mutations, "Mutation file")->required();
    learn->add_option("--algo", o.algo, "binary or dichotomic")->capture_default_str();
    add_output(learn, o);

    auto* predict_cmd = app.add_subcommand("predict", "Predict the tests impacted by a change");
    predict_cmd->add_option("graph", o.graph, "Call graph file")->required();
    predict_cmd->add_option("changed", o.changed, "Changed node id")->required();
    predict_cmd->add_option("--weights", o.weights, "Learned weights (omit for transitive closure)");
    predict_cmd->add_option("--threshold", o.threshold, "Minimum edge weight")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    add_output(predict_cmd, o);

    auto* evaluate = app.add_subcommand("evaluate", "Cross-validate techniques against a mutation file");
    evaluate->add_option("graph", o.graph, "Call graph file")->required();
    evaluate->add_option("mutations", o.mutations, "Mutation file")->required();
    evaluate->add_option("--algo", o.algos, "Comma-separated techniques")->delimiter(',')->capture_default_str();
    evaluate->add_option("--threshold", o.threshold, "Prediction threshold")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    add_cv(evaluate, o);
    add_output(evaluate, o);

    auto* sweep = app.add_subcommand("sweep", "Cross-validate one technique over several thresholds");
    sweep->add_option("graph", o.graph, "Call graph file")->required();
    sweep->add_option("mutations", o.mutations, "Mutation file")->required();
    sweep->add_option("--algo", o.algo, "Technique")->capture_default_str();
    sweep->add_option("--thresholds", o.thresholds, "Comma-separated thresholds")
        ->delimiter(',')
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    add_cv(sweep, o);
    add_output(sweep, o);

    auto* synth_cmd = app.add_subcommand("synth", "Generate a planted model and a simulated mutation file");
    synth_cmd->add_option("--apps", o.apps, "Application nodes")->capture_default_str();
    synth_cmd->add_option("--tests", o.tests, "Test nodes")->capture_default_str();
    synth_cmd->add_option("--density", o.density, "Edge density in (0, 1]")->capture_default_str();
    synth_cmd->add_option("--palette", o.palette, "Comma-separated edge probabilities")
        ->delimiter(',')
        ->capture_default_str();
    synth_cmd->add_option("--mutations", o.mutations_per_node, "Simulated changes per application node")
        ->capture_default_str();
    synth_cmd->add_option("--seed", o.seed, "Generation seed")->capture_default_str();
    synth_cmd->add_option("-o,--output", o.output,
                          "Output prefix; writes PREFIX.graph.jsonl, PREFIX.mutations.jsonl, PREFIX.weights.jsonl")
        ->required();

    auto* histogram = app.add_subcommand("histogram", "Distribution of learned edge weights");
    histogram->add_option("graph", o.graph, "Call graph file")->required();
    histogram->add_option("weights", o.weights, "Weights file")->required();
    histogram->add_option("--bins", o.bins, "Number of bins")->capture_default_str()->check(CLI::Range(1, 1000));
    histogram->add_option("--format", o.format, "json, text or csv")->capture_default_str();
    add_output(histogram, o);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kInputError;
    }

    try {
        if (extract->parsed()) {
            return cmd_extract(o, out, err);
        }
        if (mutate->parsed()) {
            return cmd_mutate(o, out, err);
        }
        if (learn->parsed()) {
            return cmd_learn(o, out, err);
        }
        if (predict_cmd->parsed()) {
            return cmd_predict(o, out, err);
        }
        if (evaluate->parsed()) {
            return cmd_evaluate(o, out, err);
        }
        if (sweep->parsed()) {
            return cmd_sweep(o, out, err);
        }
        if (synth_cmd->parsed()) {
            return cmd_synth(o, out, err);
        }
        if (histogram->parsed()) {
            return cmd_histogram(o, out, err);
        }
    } catch (const BaselineError& e) {
        err << "error: " << e.what() << '\n';
        return kRedBaseline;
    } catch (const IntegrityError& e) {
        err << "error: " << e.what() << '\n';
        return kIntegrityMismatch;
    } catch (const GenerationError& e) {
        err << "error: " << e.what() << '\n';
        return kGenerationFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
    return kInputError;
}

} // namespace impactlab::cli
