#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "der/der.hpp"
#include "der/ensemble.hpp"
#include "der/errors.hpp"
#include "der/graph.hpp"
#include "der/metrics.hpp"
#include "der/overlap.hpp"
#include "der/sbm.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kIo = 2 };

int log_level() {  // 0 = error, 1 = info, 2 = debug
    const char* env = std::getenv("DER_LOG");
    if (!env) return 1;
    std::string v(env);
    if (v == "error") return 0;
    if (v == "debug") return 2;
    return 1;
}

void info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << msg << '\n';
}

void debug(const std::string& msg) {
    if (log_level() >= 2) std::cerr << msg << '\n';
}

struct RunConfig {
    std::string input;
    std::string output;
    std::string cost_trace_path;
    std::string planted_path;
    int k = 2;
    int L = 5;
    int restarts = 3;
    int repeats = 1;
    std::uint64_t seed = 0;
    int max_iters = 100;
    double theta = 0.5;
    int threads = 0;
    int trials = 20;
    int N = 1000;
    double p = 0.3;
    double q = 0.1;
};

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::ios_base::failure("cannot open output file: " + path);
    out.precision(17);
    return out;
}

der::Graph load_graph(const std::string& path) {
    der::Graph g = der::Graph::from_edge_list_file(path);
    info("loaded " + path + ": " + std::to_string(g.n) + " vertices, total degree " +
         std::to_string(g.total_degree));
    return g;
}

// Partition over active vertices -> per-vertex labels, isolated vertices
// appended as singleton clusters after the clustered ones.
std::map<std::string, int> full_labels(const der::Graph& g, const der::DiffusionSet& ds,
                                       const der::Partition& partition) {
    std::map<std::string, int> labels;
    for (int a = 0; a < static_cast<int>(partition.assignment.size()); ++a)
        labels[g.ids[ds.vertices[a]]] = partition.assignment[a];
    int next = partition.k;
    for (int v = 0; v < g.n; ++v)
        if (g.degree[v] <= 0.0) labels[g.ids[v]] = next++;
    return labels;
}

void write_partition(const der::Graph& g, const der::DiffusionSet& ds, const der::Partition& partition,
                     const std::string& path) {
    auto labels = full_labels(g, ds, partition);
    std::ofstream out = open_output(path);
    for (int v = 0; v < g.n; ++v) out << g.ids[v] << '\t' << labels.at(g.ids[v]) << '\n';
}

void print_cluster_sizes(const der::Partition& partition) {
    std::vector<int> sizes(partition.k, 0);
    for (int s : partition.assignment) ++sizes[s];
    std::ostringstream os;
    os << "cluster sizes:";
    for (int s : sizes) os << ' ' << s;
    info(os.str());
}

int cmd_cluster(const RunConfig& cfg) {
    der::Graph g = load_graph(cfg.input);
    der::DiffusionSet ds = der::walk_measures(g, cfg.L, cfg.threads);
    der::DerParams params{cfg.k, cfg.L, cfg.seed, cfg.max_iters, cfg.restarts, cfg.threads};

    der::Partition final;
    if (cfg.repeats > 1) {
        der::RepeatsResult res = der::run_repeats(g, ds, params, cfg.repeats);
        final = res.final;
        for (std::size_t r = 0; r < res.runs.size(); ++r)
            debug("run " + std::to_string(r) + ": cost " + std::to_string(res.runs[r].cost) + ", " +
                  std::to_string(res.runs[r].iterations) + " iterations");
        info("repeats: " + std::to_string(cfg.repeats) + ", final clusters: " + std::to_string(final.k));
    } else {
        std::vector<std::vector<double>> traces;
        der::DerState st = der::run(g, ds, params, &traces);
        final = st.partition;
        info("final cost " + std::to_string(st.cost_trace.back()) + " after " + std::to_string(st.iterations) +
             " iterations (" + (st.converged ? "converged" : "max iterations") + ")");
        if (!cfg.cost_trace_path.empty()) {
            std::ofstream out = open_output(cfg.cost_trace_path);
            out << "restart,iteration,cost\n";
            for (std::size_t r = 0; r < traces.size(); ++r)
                for (std::size_t it = 0; it < traces[r].size(); ++it)
                    out << r << ',' << (it + 1) << ',' << traces[r][it] << '\n';
        }
    }
    print_cluster_sizes(final);
    write_partition(g, ds, final, cfg.output);
    return kOk;
}

int cmd_overlap(const RunConfig& cfg) {
    der::Graph g = load_graph(cfg.input);
    der::DiffusionSet ds = der::walk_measures(g, cfg.L, cfg.threads);
    der::DerParams params{cfg.k, cfg.L, cfg.seed, cfg.max_iters, cfg.restarts, cfg.threads};
    der::DerState st = der::run(g, ds, params);
    der::MembershipProfile profile = der::membership(st);
    der::CommunityCover cover = der::extract_cover(profile, cfg.theta);

    std::vector<std::vector<int>> of_vertex(st.partition.assignment.size());
    for (int t = 0; t < static_cast<int>(cover.communities.size()); ++t)
        for (int a : cover.communities[t]) of_vertex[a].push_back(t);

    std::ofstream out = open_output(cfg.output);
    int next_singleton = st.partition.k;
    for (int v = 0; v < g.n; ++v) {
        out << g.ids[v] << '\t';
        if (g.degree[v] <= 0.0) {
            out << next_singleton++;
        } else {
            const auto& cs = of_vertex[ds.slot[v]];
            for (std::size_t t = 0; t < cs.size(); ++t) out << (t ? "," : "") << cs[t];
        }
        out << '\n';
    }
    info("cover written: " + std::to_string(cover.communities.size()) + " communities");
    return kOk;
}

std::map<std::string, int> read_partition_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open partition file: " + path);
    std::map<std::string, int> labels;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string id;
        int label;
        if (!(ls >> id)) continue;
        if (id[0] == '#') continue;
        if (!(ls >> label))
            throw der::ParseError("partition file " + path + " line " + std::to_string(line_no) +
                                      ": expected \"id<TAB>cluster\"",
                                  line_no);
        labels[id] = label;
    }
    return labels;
}

int cmd_eval(const std::string& path_p, const std::string& path_q) {
    auto lp = read_partition_file(path_p);
    auto lq = read_partition_file(path_q);
    std::vector<int> p, q;
    for (const auto& [id, label] : lp) {
        auto it = lq.find(id);
        if (it == lq.end()) {
            std::cerr << "vertex " << id << " present in " << path_p << " but not in " << path_q << '\n';
            return kUsage;
        }
        p.push_back(label);
        q.push_back(it->second);
    }
    if (lq.size() != lp.size()) {
        std::cerr << "partition files cover different vertex sets\n";
        return kUsage;
    }
    std::cout << "nmi=" << der::nmi(p, q) << " misclassified=" << der::misclassified(p, q) << '\n';
    return kOk;
}

int cmd_sbm_gen(const RunConfig& cfg) {
    der::SbmSpec spec{cfg.N, cfg.k, cfg.p, cfg.q, cfg.seed};
    der::SbmSample sample = der::sample_sbm(spec);
    std::ofstream edges = open_output(cfg.output + ".edges");
    sample.graph.to_edge_list(edges);
    std::ofstream planted = open_output(cfg.output + ".planted");
    for (int v = 0; v < sample.graph.n; ++v) planted << sample.graph.ids[v] << '\t' << sample.planted[v] << '\n';
    info("wrote " + cfg.output + ".edges and " + cfg.output + ".planted");
    return kOk;
}

int cmd_sbm_recover(const RunConfig& cfg) {
    der::SbmSpec spec{cfg.N, 2, cfg.p, cfg.q, cfg.seed};
    der::RecoveryReport report = der::recovery_experiment(spec, cfg.trials, cfg.seed, cfg.threads);
    for (int t = 0; t < report.trials; ++t) {
        const der::TrialRecord& rec = report.records[t];
        nlohmann::json j{{"trial", t},
                         {"success", rec.success},
                         {"nmi_one_iter", rec.nmi_one_iter},
                         {"nmi_converged", rec.nmi_converged},
                         {"iterations_to_converge", rec.iterations_to_converge},
                         {"converged_changed", rec.converged_changed}};
        std::cout << j.dump() << '\n';
    }
    nlohmann::json summary{{"trials", report.trials},
                           {"successes", report.successes},
                           {"success_rate", static_cast<double>(report.successes) / report.trials},
                           {"mean_nmi", report.mean_nmi},
                           {"mean_seconds", report.mean_seconds}};
    std::cout << summary.dump() << '\n';
    return kOk;
}

int cmd_cooc_export(const RunConfig& cfg) {
    der::Graph g = load_graph(cfg.input);
    der::DiffusionSet ds = der::walk_measures(g, cfg.L, cfg.threads);
    der::DerParams params{cfg.k, cfg.L, cfg.seed, cfg.max_iters, cfg.restarts, cfg.threads};
    der::RepeatsResult res = der::run_repeats(g, ds, params, cfg.repeats);
    std::ofstream out = open_output(cfg.output);
    res.co.dump(out);
    info("co-occurrence written for " + std::to_string(res.co.n_active) + " active vertices, R=" +
         std::to_string(res.co.R));
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DER community detection: random-walk diffusion k-means with ensemble and overlap extraction"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string eval_p, eval_q;

    auto add_common = [&](CLI::App* sub, int default_L) {
        cfg.L = default_L;
        sub->add_option("-k", cfg.k, "number of clusters")->check(CLI::PositiveNumber);
        sub->add_option("-L", cfg.L, "walk length")->check(CLI::PositiveNumber)->capture_default_str();
        sub->add_option("--restarts", cfg.restarts, "restarts per run")->check(CLI::PositiveNumber);
        sub->add_option("--seed", cfg.seed, "master seed");
        sub->add_option("--max-iters", cfg.max_iters, "iteration cap")->check(CLI::PositiveNumber);
        sub->add_option("--threads", cfg.threads, "worker cap (0 = all cores)");
    };

    CLI::App* cluster = app.add_subcommand("cluster", "cluster an edge list");
    cluster->add_option("input", cfg.input, "edge list file")->required();
    cluster->add_option("-o,--output", cfg.output, "partition output file")->required();
    add_common(cluster, 5);
    cluster->add_option("--repeats", cfg.repeats, "co-occurrence repeats R")->check(CLI::PositiveNumber);
    cluster->add_option("--cost-trace", cfg.cost_trace_path, "write per-restart cost trace CSV");

    CLI::App* overlap = app.add_subcommand("overlap", "extract overlapping communities");
    overlap->add_option("input", cfg.input, "edge list file")->required();
    overlap->add_option("-o,--output", cfg.output, "cover output file")->required();
    add_common(overlap, 2);
    overlap->add_option("--theta", cfg.theta, "membership threshold in (0,1]")
        ->check(CLI::Range(1e-12, 1.0));

    CLI::App* eval = app.add_subcommand("eval", "compare two partition files");
    eval->add_option("partition_a", eval_p)->required();
    eval->add_option("partition_b", eval_q)->required();

    CLI::App* sbm_gen = app.add_subcommand("sbm-gen", "generate an SBM graph + planted partition");
    sbm_gen->add_option("-N", cfg.N, "vertex count")->required();
    sbm_gen->add_option("-p", cfg.p, "within-block edge probability")->required();
    sbm_gen->add_option("-q", cfg.q, "cross-block edge probability")->required();
    sbm_gen->add_option("-k", cfg.k, "block count");
    sbm_gen->add_option("--seed", cfg.seed, "seed");
    sbm_gen->add_option("-o,--output", cfg.output, "output path prefix")->required();

    CLI::App* sbm_recover = app.add_subcommand("sbm-recover", "one-iteration recovery experiment");
    sbm_recover->add_option("-N", cfg.N, "vertex count");
    sbm_recover->add_option("-p", cfg.p, "within-block edge probability");
    sbm_recover->add_option("-q", cfg.q, "cross-block edge probability");
    sbm_recover->add_option("--trials", cfg.trials, "trial count")->check(CLI::PositiveNumber);
    sbm_recover->add_option("--seed", cfg.seed, "master seed");
    sbm_recover->add_option("--threads", cfg.threads, "worker cap (0 = all cores)");

    CLI::App* cooc = app.add_subcommand("cooc-export", "run repeats and export the co-occurrence matrix");
    cooc->add_option("input", cfg.input, "edge list file")->required();
    cooc->add_option("-o,--output", cfg.output, "co-occurrence output file")->required();
    add_common(cooc, 5);
    cooc->add_option("--repeats", cfg.repeats, "co-occurrence repeats R")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (app.got_subcommand(cluster)) return cmd_cluster(cfg);
        if (app.got_subcommand(overlap)) return cmd_overlap(cfg);
        if (app.got_subcommand(eval)) return cmd_eval(eval_p, eval_q);
        if (app.got_subcommand(sbm_gen)) return cmd_sbm_gen(cfg);
        if (app.got_subcommand(sbm_recover)) return cmd_sbm_recover(cfg);
        if (app.got_subcommand(cooc)) return cmd_cooc_export(cfg);
    } catch (const std::ios_base::failure& e) {
        std::cerr << e.what() << '\n';
        return kIo;
    } catch (const der::ParseError& e) {
        std::cerr << e.what() << '\n';
        return kUsage;
    } catch (const der::InvalidInput& e) {
        std::cerr << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
