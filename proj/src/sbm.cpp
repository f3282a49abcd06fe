#include "der/sbm.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include "der/errors.hpp"
#include "der/metrics.hpp"
#include "der/parallel.hpp"
#include "der/seed.hpp"

namespace der {

void SbmSpec::validate() const {
    if (N < 2 || k < 1) throw InvalidInput("sbm: need N >= 2 and k >= 1");
    if (N % k != 0) throw InvalidInput("sbm: N must be divisible by k");
    if (!(0.0 <= q && q <= p && p <= 1.0)) throw InvalidInput("sbm: need 0 <= q <= p <= 1");
}

SbmSample sample_sbm(const SbmSpec& spec) {
    spec.validate();
    const int block_size = spec.N / spec.k;
    std::vector<int> planted(spec.N);
    for (int i = 0; i < spec.N; ++i) planted[i] = i / block_size;

    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<std::tuple<int, int, double>> edges;
    for (int i = 0; i < spec.N; ++i)
        for (int j = i + 1; j < spec.N; ++j) {
            double prob = planted[i] == planted[j] ? spec.p : spec.q;
            if (unif(rng) < prob) edges.emplace_back(i, j, 1.0);
        }
    return {Graph::from_edges(spec.N, edges), std::move(planted)};
}

namespace {

long two_paths_with_membership(const Graph& g, int i, const std::vector<char>& in_s) {
    long total = 0;
    for (const Edge& e : g.adj[i])
        for (const Edge& f : g.adj[e.to])
            if (in_s[f.to]) ++total;
    return total;
}

}  // namespace

long count_two_paths(const Graph& g, int i, std::span<const int> s) {
    if (!g.is_unweighted()) throw InvalidInput("count_two_paths: unweighted graphs only");
    if (i < 0 || i >= g.n) throw InvalidInput("count_two_paths: vertex out of range");
    std::vector<char> in_s(g.n, 0);
    for (int v : s) in_s[v] = 1;
    return two_paths_with_membership(g, i, in_s);
}

double expected_two_paths(int N, int N1, int N2, double p, double q, Block j_block, InitSide target) {
    if (N1 + N2 != N / 2) throw InvalidInput("expected_two_paths: need N1 + N2 = N/2");
    bool same = (j_block == Block::P1) == (target == InitSide::C1);
    double a = same ? N1 : N2;  // |C_target ∩ P_(j's block)|
    double b = N / 2.0 - a;
    return 0.5 * N * (a * p * p + 2.0 * p * q * b + a * q * q);
}

namespace {

// Exact recovery up to cluster relabeling.
bool labels_match(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return false;
    std::unordered_map<int, int> fwd, rev;
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto [f, fi] = fwd.emplace(a[i], b[i]);
        if (!fi && f->second != b[i]) return false;
        auto [r, ri] = rev.emplace(b[i], a[i]);
        if (!ri && r->second != a[i]) return false;
    }
    return true;
}

}  // namespace

RecoveryReport recovery_experiment(const SbmSpec& spec, int trials, std::uint64_t seed, int threads) {
    spec.validate();
    if (spec.k != 2) throw InvalidInput("recovery_experiment: analysis harness covers k = 2 only");
    if (trials < 1) throw InvalidInput("recovery_experiment: trials must be >= 1");

    RecoveryReport report;
    report.trials = trials;
    report.records.resize(trials);
    std::vector<double> seconds(trials, 0.0);

    parallel_chunks(trials, threads, [&](int begin, int end) {
        for (int t = begin; t < end; ++t) {
            auto t0 = std::chrono::steady_clock::now();
            SbmSpec draw = spec;
            draw.seed = derive_seed(seed, 2 * t);
            SbmSample sample = sample_sbm(draw);
            DiffusionSet ds = walk_measures(sample.graph, 1, 1);
            const int n_active = static_cast<int>(ds.vertices.size());

            std::vector<int> planted_active(n_active);
            for (int a = 0; a < n_active; ++a) planted_active[a] = sample.planted[ds.vertices[a]];

            DerState st;
            st.graph = &sample.graph;
            st.diffusion = &ds;
            st.partition = random_equal_partition(n_active, 2, derive_seed(seed, 2 * t + 1));
            means_step(st);
            assign_step(st, 1);
            if (repair_empty_clusters(st)) means_step(st);
            std::vector<int> one_iter = st.partition.assignment;

            TrialRecord& rec = report.records[t];
            rec.success = labels_match(one_iter, planted_active);
            rec.nmi_one_iter = nmi(one_iter, planted_active);

            // Continue to convergence to see whether the one-iteration
            // result is already a fixed point.
            means_step(st);
            for (int iter = 2; iter <= 100; ++iter) {
                bool changed = assign_step(st, 1);
                bool repaired = repair_empty_clusters(st);
                means_step(st);
                rec.iterations_to_converge = iter;
                if (!changed && !repaired) break;
            }
            rec.nmi_converged = nmi(st.partition.assignment, planted_active);
            rec.converged_changed = st.partition.assignment != one_iter;
            seconds[t] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
    });

    double nmi_sum = 0.0, sec_sum = 0.0;
    for (int t = 0; t < trials; ++t) {
        if (report.records[t].success) ++report.successes;
        nmi_sum += report.records[t].nmi_one_iter;
        sec_sum += seconds[t];
    }
    report.mean_nmi = nmi_sum / trials;
    report.mean_seconds = sec_sum / trials;
    return report;
}

SignDiagnostic sign_diagnostic(const Graph& g, const std::vector<int>& planted, const std::vector<int>& init) {
    if (!g.is_unweighted()) throw InvalidInput("sign_diagnostic: unweighted graphs only");
    if (static_cast<int>(init.size()) != g.n || static_cast<int>(planted.size()) != g.n)
        throw InvalidInput("sign_diagnostic: label vectors must cover all vertices");

    std::vector<char> in_c1(g.n, 0), in_c2(g.n, 0);
    std::vector<int> c1, c2;
    for (int v = 0; v < g.n; ++v) {
        if (init[v] == 0) {
            in_c1[v] = 1;
            if (g.degree[v] > 0) c1.push_back(v);
        } else {
            in_c2[v] = 1;
            if (g.degree[v] > 0) c2.push_back(v);
        }
    }
    if (c1.empty() || c2.empty()) throw InvalidInput("sign_diagnostic: both init sides must be nonempty");

    DiffusionSet ds = walk_measures(g, 1);
    SparseMeasure mu1 = cluster_measure(g, ds, c1);
    SparseMeasure mu2 = cluster_measure(g, ds, c2);

    double d_c1 = 0.0, d_c2 = 0.0;
    for (int v : c1) d_c1 += g.degree[v];
    for (int v : c2) d_c2 += g.degree[v];

    // Empirical stand-in for the proof's normalizer: mean over j of d(j, C2).
    double mean_d_c2 = 0.0;
    for (int j = 0; j < g.n; ++j)
        for (const Edge& e : g.adj[j]) mean_d_c2 += in_c2[e.to] ? 1.0 : 0.0;
    mean_d_c2 /= g.n;

    auto sign_of = [](double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); };
    double log_degree_ratio = std::log(d_c2 / d_c1);

    int matches = 0, active = 0;
    for (int a = 0; a < static_cast<int>(ds.vertices.size()); ++a) {
        int i = ds.vertices[a];
        double exact = score(ds.measures[a], mu1) - score(ds.measures[a], mu2);
        long d2_1 = two_paths_with_membership(g, i, in_c1);
        long d2_2 = two_paths_with_membership(g, i, in_c2);
        double lin = (d2_1 - d2_2) / mean_d_c2 + g.degree[i] * log_degree_ratio;
        if (sign_of(exact) == sign_of(lin)) ++matches;
        ++active;
    }

    SignDiagnostic diag;
    diag.agreement = active > 0 ? static_cast<double>(matches) / active : 0.0;
    int n1 = 0, n2 = 0;
    for (int v = 0; v < g.n; ++v) {
        if (planted[v] != 0) continue;
        if (in_c1[v]) ++n1;
        else ++n2;
    }
    diag.delta_n = n1 - n2;
    return diag;
}

}  // namespace der
