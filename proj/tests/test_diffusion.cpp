#include <doctest.h>

#include <cmath>
#include <random>

#include "der/der.hpp"
#include "der/diffusion.hpp"
#include "der/errors.hpp"
#include "oracles.hpp"

using der::Graph;
using der::SparseMeasure;

namespace {

Graph triangle() { return Graph::from_edge_list_text("0 1\n1 2\n2 0"); }

SparseMeasure measure_of(std::vector<std::pair<int, double>> entries) {
    SparseMeasure m;
    m.entries = std::move(entries);
    return m;
}

SparseMeasure random_measure(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    SparseMeasure m;
    double total = 0.0;
    for (int v = 0; v < n; ++v) {
        if (unif(rng) < 0.6) {
            double mass = 0.05 + unif(rng);
            m.entries.emplace_back(v, mass);
            total += mass;
        }
    }
    if (m.entries.empty()) {
        m.entries.emplace_back(0, 1.0);
        total = 1.0;
    }
    for (auto& [v, mass] : m.entries) mass /= total;
    return m;
}

}  // namespace

TEST_CASE("transition rows") {
    Graph k3 = triangle();
    SparseMeasure row = der::transition_row(k3, 0);
    REQUIRE(row.entries.size() == 2);
    CHECK(row.mass_at(1) == doctest::Approx(0.5));
    CHECK(row.mass_at(2) == doctest::Approx(0.5));

    Graph path = Graph::from_edge_list_text("a b\nb c");
    SparseMeasure mid = der::transition_row(path, path.index_of.at("b"));
    CHECK(mid.mass_at(path.index_of.at("a")) == doctest::Approx(0.5));
    CHECK(mid.mass_at(path.index_of.at("c")) == doctest::Approx(0.5));

    Graph weighted = Graph::from_edge_list_text("a b 2\na c 1");
    SparseMeasure wa = der::transition_row(weighted, weighted.index_of.at("a"));
    CHECK(wa.mass_at(weighted.index_of.at("b")) == doctest::Approx(2.0 / 3));
    CHECK(wa.mass_at(weighted.index_of.at("c")) == doctest::Approx(1.0 / 3));

    Graph with_isolated = Graph::from_edges(2, {});
    CHECK_THROWS_AS(der::transition_row(with_isolated, 0), der::InvalidInput);
}

TEST_CASE("walk measures on small graphs") {
    Graph k3 = triangle();
    SUBCASE("L=1 equals the transition row") {
        der::DiffusionSet ds = der::walk_measures(k3, 1);
        CHECK(ds.of(0).mass_at(1) == doctest::Approx(0.5));
        CHECK(ds.of(0).mass_at(0) == 0.0);
    }
    SUBCASE("L=2 averaged row, hand-computed") {
        der::DiffusionSet ds = der::walk_measures(k3, 2);
        CHECK(ds.of(0).mass_at(0) == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(ds.of(0).mass_at(1) == doctest::Approx(0.375).epsilon(1e-12));
        CHECK(ds.of(0).mass_at(2) == doctest::Approx(0.375).epsilon(1e-12));
    }
    SUBCASE("path a-b-c, L=2 from a") {
        Graph path = Graph::from_edge_list_text("a b\nb c");
        der::DiffusionSet ds = der::walk_measures(path, 2);
        int a = path.index_of.at("a"), b = path.index_of.at("b"), c = path.index_of.at("c");
        CHECK(ds.of(a).mass_at(a) == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(ds.of(a).mass_at(b) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(ds.of(a).mass_at(c) == doctest::Approx(0.25).epsilon(1e-12));
    }
    SUBCASE("L=0 rejected") { CHECK_THROWS_AS(der::walk_measures(k3, 0), der::InvalidInput); }
}

TEST_CASE("walk measures agree with the dense matrix power oracle") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 10; ++trial) {
        Graph g = oracle::random_weighted_graph(10 + static_cast<int>(rng() % 41), 0.15, rng());
        for (int L : {1, 3, 5}) {
            der::DiffusionSet ds = der::walk_measures(g, L);
            for (int a = 0; a < static_cast<int>(ds.vertices.size()); a += 7) {
                int i = ds.vertices[a];
                auto dense = oracle::dense_walk_measure(g, L, i);
                for (int v = 0; v < g.n; ++v) CHECK(std::abs(ds.of(i).mass_at(v) - dense[v]) <= 1e-10);
            }
        }
    }
}

TEST_CASE("walk measure support stays inside the L-ball and sums to 1") {
    Graph path = Graph::from_edge_list_text("0 1\n1 2\n2 3\n3 4\n4 5");
    for (int L = 1; L <= 4; ++L) {
        der::DiffusionSet ds = der::walk_measures(path, L);
        for (int i = 0; i < path.n; ++i) {
            CHECK(ds.of(i).total() == doctest::Approx(1.0).epsilon(1e-10));
            for (const auto& [v, mass] : ds.of(i).entries) {
                CHECK(mass > 0.0);
                CHECK(std::abs(v - i) <= L);
            }
        }
    }
}

TEST_CASE("cluster measures") {
    Graph k3 = triangle();
    der::DiffusionSet ds = der::walk_measures(k3, 1);
    SUBCASE("singleton set gives w_i back") {
        std::vector<int> s{0};
        SparseMeasure mu = der::cluster_measure(k3, ds, s);
        CHECK(mu.mass_at(1) == doctest::Approx(0.5));
        CHECK(mu.mass_at(2) == doctest::Approx(0.5));
    }
    SUBCASE("full vertex set gives the stationary measure") {
        std::vector<int> s{0, 1, 2};
        SparseMeasure mu = der::cluster_measure(k3, ds, s);
        for (int v = 0; v < 3; ++v) CHECK(mu.mass_at(v) == doctest::Approx(1.0 / 3).epsilon(1e-12));
    }
    SUBCASE("degree-weighted average on the path") {
        Graph path = Graph::from_edge_list_text("a b\nb c");
        der::DiffusionSet pds = der::walk_measures(path, 1);
        std::vector<int> s{path.index_of.at("a"), path.index_of.at("b")};
        SparseMeasure mu = der::cluster_measure(path, pds, s);
        for (const char* id : {"a", "b", "c"})
            CHECK(mu.mass_at(path.index_of.at(id)) == doctest::Approx(1.0 / 3).epsilon(1e-12));
    }
    SUBCASE("empty set rejected") {
        CHECK_THROWS_AS(der::cluster_measure(k3, ds, std::span<const int>{}), der::InvalidInput);
    }
    SUBCASE("isolated member rejected") {
        Graph g = Graph::from_edges(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}});
        der::DiffusionSet gds = der::walk_measures(g, 1);
        std::vector<int> s{0, 3};
        CHECK_THROWS_AS(der::cluster_measure(g, gds, s), der::InvalidInput);
    }
}

TEST_CASE("score") {
    SparseMeasure half = measure_of({{0, 0.5}, {1, 0.5}});
    CHECK(der::score(half, half) == doctest::Approx(std::log(0.5)));
    SparseMeasure x = measure_of({{0, 1.0}});
    SparseMeasure y = measure_of({{1, 1.0}});
    CHECK(der::score(x, y) == -std::numeric_limits<double>::infinity());
    SparseMeasure skew = measure_of({{0, 0.25}, {1, 0.75}});
    CHECK(der::score(skew, half) == doctest::Approx(std::log(0.5)));
}

TEST_CASE("averaged measure maximizes the summed score") {
    // Gibbs property behind the means step: sum_i D(nu_i, mean) >= sum_i D(nu_i, kappa).
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 6;
        int z = 2 + static_cast<int>(rng() % 5);
        std::vector<SparseMeasure> nus;
        std::vector<double> mean(n, 0.0);
        for (int i = 0; i < z; ++i) {
            nus.push_back(random_measure(n, rng));
            for (const auto& [v, m] : nus.back().entries) mean[v] += m / z;
        }
        SparseMeasure mean_measure;
        for (int v = 0; v < n; ++v)
            if (mean[v] > 0.0) mean_measure.entries.emplace_back(v, mean[v]);
        SparseMeasure kappa = random_measure(n, rng);
        double at_mean = 0.0, at_kappa = 0.0;
        for (const auto& nu : nus) {
            at_mean += der::score(nu, mean_measure);
            at_kappa += der::score(nu, kappa);
        }
        CHECK(at_kappa <= at_mean + 1e-9);
    }
}

TEST_CASE("stationary decomposition holds for any partition and L") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        Graph g = oracle::random_er_graph(20 + static_cast<int>(rng() % 20), 0.15, rng());
        auto active = g.active_vertices();
        if (active.size() < 4) continue;
        auto pi = g.stationary();
        for (int L : {1, 2, 4}) {
            der::DiffusionSet ds = der::walk_measures(g, L);
            int k = 2 + static_cast<int>(rng() % 3);
            der::Partition part = der::random_equal_partition(static_cast<int>(active.size()), k, rng());
            std::vector<double> reconstructed(g.n, 0.0);
            for (const auto& members : part.cluster_members()) {
                std::vector<int> vertices;
                double pi_s = 0.0;
                for (int a : members) {
                    vertices.push_back(ds.vertices[a]);
                    pi_s += pi[ds.vertices[a]];
                }
                SparseMeasure mu = der::cluster_measure(g, ds, vertices);
                for (const auto& [v, m] : mu.entries) reconstructed[v] += pi_s * m;
            }
            for (int v = 0; v < g.n; ++v) CHECK(std::abs(reconstructed[v] - pi[v]) <= 1e-10);
        }
    }
}
