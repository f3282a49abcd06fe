#include <doctest.h>

#include <cmath>
#include <random>

#include "der/errors.hpp"
#include "der/metrics.hpp"
#include "der/sbm.hpp"
#include "oracles.hpp"

using der::Block;
using der::InitSide;
using der::SbmSpec;

TEST_CASE("sbm sampling") {
    SUBCASE("p=1, q=0 gives two disjoint cliques") {
        der::SbmSample s = der::sample_sbm({6, 2, 1.0, 0.0, 1});
        CHECK(s.graph.n == 6);
        for (int i = 0; i < 6; ++i) CHECK(s.graph.degree[i] == doctest::Approx(2.0));
        CHECK(s.planted == std::vector<int>{0, 0, 0, 1, 1, 1});
        // no cross edges
        for (int i = 0; i < 3; ++i)
            for (const der::Edge& e : s.graph.adj[i]) CHECK(e.to < 3);
    }
    SUBCASE("deterministic per seed") {
        der::SbmSample a = der::sample_sbm({50, 2, 0.3, 0.1, 9});
        der::SbmSample b = der::sample_sbm({50, 2, 0.3, 0.1, 9});
        CHECK(a.graph.total_degree == b.graph.total_degree);
        der::SbmSample c = der::sample_sbm({50, 2, 0.3, 0.1, 10});
        // different seed, almost surely different graph
        bool same = a.graph.total_degree == c.graph.total_degree;
        CHECK_FALSE(same);
    }
    SUBCASE("p=q: within and cross densities agree across seeds") {
        // With p=q the model is Erdos-Renyi; compare within/cross edge
        // fractions against their binomial means.
        const int n = 40;
        const double p = 0.25;
        long within = 0, cross = 0;
        const int seeds = 100;
        for (int seed = 0; seed < seeds; ++seed) {
            der::SbmSample s = der::sample_sbm({n, 2, p, p, static_cast<std::uint64_t>(seed)});
            for (int i = 0; i < n; ++i)
                for (const der::Edge& e : s.graph.adj[i]) {
                    if (e.to <= i) continue;
                    (s.planted[i] == s.planted[e.to] ? within : cross) += 1;
                }
        }
        double within_pairs = seeds * 2.0 * (20 * 19 / 2.0);
        double cross_pairs = seeds * 20.0 * 20.0;
        double sd_within = std::sqrt(within_pairs * p * (1 - p));
        double sd_cross = std::sqrt(cross_pairs * p * (1 - p));
        CHECK(std::abs(within - within_pairs * p) <= 3 * sd_within);
        CHECK(std::abs(cross - cross_pairs * p) <= 3 * sd_cross);
    }
    SUBCASE("within-block edge count near its binomial mean") {
        der::SbmSample s = der::sample_sbm({100, 2, 0.5, 0.05, 4});
        long within = 0;
        for (int i = 0; i < 100; ++i)
            for (const der::Edge& e : s.graph.adj[i])
                if (e.to > i && s.planted[i] == s.planted[e.to]) ++within;
        double pairs = 2 * (50 * 49 / 2.0);
        double mean = pairs * 0.5, sd = std::sqrt(pairs * 0.25);
        CHECK(std::abs(within - mean) <= 4 * sd);
    }
    SUBCASE("invalid specs rejected") {
        CHECK_THROWS_AS(der::sample_sbm({7, 2, 0.5, 0.1, 0}), der::InvalidInput);   // N % k != 0
        CHECK_THROWS_AS(der::sample_sbm({10, 2, 0.1, 0.5, 0}), der::InvalidInput);  // q > p
        CHECK_THROWS_AS(der::sample_sbm({10, 2, 1.5, 0.1, 0}), der::InvalidInput);
    }
}

TEST_CASE("two-path counts") {
    SUBCASE("triangle with S = {0}: both backtracks count") {
        der::Graph k3 = der::Graph::from_edge_list_text("0 1\n1 2\n2 0");
        std::vector<int> s{0};
        CHECK(der::count_two_paths(k3, 0, s) == 2);
    }
    SUBCASE("path a-b-c") {
        der::Graph path = der::Graph::from_edge_list_text("a b\nb c");
        std::vector<int> s{path.index_of.at("c")};
        CHECK(der::count_two_paths(path, path.index_of.at("a"), s) == 1);
    }
    SUBCASE("weighted graphs rejected") {
        der::Graph g = der::Graph::from_edge_list_text("a b 2");
        std::vector<int> s{0};
        CHECK_THROWS_AS(der::count_two_paths(g, 0, s), der::InvalidInput);
    }
    SUBCASE("matches triple enumeration and dense A^2 on random graphs") {
        std::mt19937_64 rng(23);
        for (int trial = 0; trial < 20; ++trial) {
            der::Graph g = oracle::random_er_graph(20, 0.3, rng());
            std::vector<int> s;
            for (int v = 0; v < g.n; ++v)
                if (rng() % 2) s.push_back(v);
            int i = static_cast<int>(rng() % g.n);
            long fast = der::count_two_paths(g, i, s);
            CHECK(fast == oracle::brute_two_paths(g, i, s));
            CHECK(fast == oracle::dense_a2_two_paths(g, i, s));
        }
    }
}

TEST_CASE("expected two-path closed forms") {
    SUBCASE("q=0 keeps only the within-block square term") {
        CHECK(der::expected_two_paths(100, 30, 20, 0.4, 0.0, Block::P1, InitSide::C1) ==
              doctest::Approx(0.5 * 100 * 30 * 0.16));
    }
    SUBCASE("p=q erases the difference between targets") {
        double c1 = der::expected_two_paths(200, 60, 40, 0.3, 0.3, Block::P1, InitSide::C1);
        double c2 = der::expected_two_paths(200, 60, 40, 0.3, 0.3, Block::P1, InitSide::C2);
        CHECK(c1 == doctest::Approx(c2).epsilon(1e-12));
    }
    SUBCASE("difference identity 0.5 N dN (p-q)^2") {
        std::mt19937_64 rng(31);
        for (int trial = 0; trial < 100; ++trial) {
            int half = 10 + static_cast<int>(rng() % 200);
            int n1 = static_cast<int>(rng() % (half + 1));
            int n2 = half - n1;
            double p = (rng() % 1000) / 1000.0;
            double q = p * (rng() % 1000) / 1000.0;
            double diff = der::expected_two_paths(2 * half, n1, n2, p, q, Block::P1, InitSide::C1) -
                          der::expected_two_paths(2 * half, n1, n2, p, q, Block::P1, InitSide::C2);
            double expected = 0.5 * (2 * half) * (n1 - n2) * (p - q) * (p - q);
            CHECK(diff == doctest::Approx(expected).epsilon(1e-9));
        }
    }
    SUBCASE("block symmetry") {
        CHECK(der::expected_two_paths(100, 30, 20, 0.4, 0.1, Block::P2, InitSide::C2) ==
              doctest::Approx(der::expected_two_paths(100, 30, 20, 0.4, 0.1, Block::P1, InitSide::C1)));
    }
    SUBCASE("matches a Monte-Carlo mean of the exact counts") {
        // Fixed bipartition with N1 = 55: first 55 of block 0 and first 45
        // of block 1 form C1.
        const int N = 200, N1 = 55, N2 = 45;
        const double p = 0.3, q = 0.1;
        std::vector<int> c1;
        for (int v = 0; v < N1; ++v) c1.push_back(v);
        for (int v = 100; v < 100 + N2; ++v) c1.push_back(v);
        const int draws = 500;
        std::vector<double> samples;
        std::mt19937_64 rng(97);
        for (int d = 0; d < draws; ++d) {
            der::SbmSample s = der::sample_sbm({N, 2, p, q, rng()});
            // measure at a node of P1 outside C1 to avoid the backtracking
            // correction terms
            samples.push_back(static_cast<double>(der::count_two_paths(s.graph, 60, c1)));
        }
        double mean = 0;
        for (double x : samples) mean += x;
        mean /= draws;
        double var = 0;
        for (double x : samples) var += (x - mean) * (x - mean);
        var /= (draws - 1);
        double sd_mean = std::sqrt(var / draws);
        double expected = der::expected_two_paths(N, N1, N2, p, q, Block::P1, InitSide::C1);
        CHECK(std::abs(mean - expected) <= 3 * sd_mean + 0.02 * expected);
    }
}

TEST_CASE("recovery experiment") {
    SUBCASE("disconnected blocks recover from any unbalanced split") {
        // an exactly balanced random split (|C1 ∩ block| = 50) is a symmetric
        // fixed point that one iteration cannot break; this seed avoids it
        der::RecoveryReport r = der::recovery_experiment({200, 2, 1.0, 0.0, 0}, 5, 4);
        CHECK(r.successes == 5);
        CHECK(r.mean_nmi == doctest::Approx(1.0));
    }
    SUBCASE("p=q carries no signal") {
        der::RecoveryReport r = der::recovery_experiment({200, 2, 0.2, 0.2, 0}, 10, 5);
        CHECK(r.successes == 0);
        CHECK(r.mean_nmi < 0.1);
    }
    SUBCASE("success rate grows with the gap") {
        // statistical slack: higher p may not dominate on every seed set
        const double q = 0.1;
        der::RecoveryReport low = der::recovery_experiment({300, 2, q, q, 0}, 20, 11);
        der::RecoveryReport mid = der::recovery_experiment({300, 2, 0.2, q, 0}, 20, 11);
        der::RecoveryReport high = der::recovery_experiment({300, 2, 0.3, q, 0}, 20, 11);
        double r_low = low.successes / 20.0, r_mid = mid.successes / 20.0, r_high = high.successes / 20.0;
        CHECK(r_mid >= r_low - 0.15);
        CHECK(r_high >= r_mid - 0.15);
    }
    SUBCASE("k != 2 rejected") {
        CHECK_THROWS_AS(der::recovery_experiment({9, 3, 0.5, 0.1, 0}, 1, 0), der::InvalidInput);
    }
}

TEST_CASE("sign diagnostic") {
    SUBCASE("disconnected cliques agree fully") {
        der::SbmSample s = der::sample_sbm({20, 2, 1.0, 0.0, 2});
        std::vector<int> init = s.planted;
        der::SignDiagnostic d = der::sign_diagnostic(s.graph, s.planted, init);
        CHECK(d.agreement == doctest::Approx(1.0));
        CHECK(d.delta_n == 10);
    }
    SUBCASE("dense SBM: high agreement between exact and linearized signs") {
        der::SbmSample s = der::sample_sbm({200, 2, 0.5, 0.05, 7});
        // biased random bipartition
        std::vector<int> init(200, 1);
        std::mt19937_64 rng(3);
        std::vector<int> order(200);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        for (int t = 0; t < 100; ++t) init[order[t]] = 0;
        der::SignDiagnostic d = der::sign_diagnostic(s.graph, s.planted, init);
        // diagnostic only: recorded, not pinned to a fixed constant
        CHECK(d.agreement >= 0.0);
        CHECK(d.agreement <= 1.0);
        MESSAGE("dense SBM sign agreement: ", d.agreement, " (delta_n = ", d.delta_n, ")");
    }
    SUBCASE("p=q: the linearization still tracks the exact rule") {
        // agreement measures approximation quality of the 2-path expansion,
        // not block signal, so it stays high even without planted structure
        der::SbmSample s = der::sample_sbm({200, 2, 0.2, 0.2, 8});
        std::vector<int> init(200);
        for (int v = 0; v < 200; ++v) init[v] = v % 2;
        der::SignDiagnostic d = der::sign_diagnostic(s.graph, s.planted, init);
        CHECK(d.agreement > 0.5);
        CHECK(d.agreement <= 1.0);
    }
}
