#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "helpers.hpp"
#include "homophily/error.hpp"
#include "homophily/graph.hpp"
#include "homophily/random.hpp"
#include "homophily/synthetic.hpp"

using namespace homophily;
using testing::make;
using testing::parse;

TEST_SUITE("graph") {

TEST_CASE("edge list parse") {
  const auto g = parse("a,b\nb,c");
  CHECK(g.node_count() == 3);
  REQUIRE(g.edge_count() == 2);
  CHECK(g.labels().label(g.edges()[0].src) == "a");
  CHECK(g.labels().label(g.edges()[0].dst) == "b");
  CHECK(g.labels().label(g.edges()[1].src) == "b");
  CHECK(g.labels().label(g.edges()[1].dst) == "c");
  CHECK(g.has_labels());
}

TEST_CASE("empty stream gives an empty network") {
  const auto g = parse("");
  CHECK(g.node_count() == 0);
  CHECK(g.edge_count() == 0);
}

TEST_CASE("dedup flag") {
  EdgeListOptions o;
  CHECK(parse("a,b\na,b", o).edge_count() == 1);
  o.dedup = false;
  CHECK(parse("a,b\na,b", o).edge_count() == 2);
}

TEST_CASE("self loops dropped by default") {
  auto g = parse("a,a\na,b");
  CHECK(g.edge_count() == 1);
  CHECK_FALSE(g.has_self_loops());
  EdgeListOptions o;
  o.drop_self_loops = false;
  g = parse("a,a\na,b", o);
  CHECK(g.edge_count() == 2);
  CHECK(g.has_self_loops());
}

TEST_CASE("comments, blanks, tsv and quoting") {
  EdgeListOptions o;
  o.format = EdgeListFormat::tsv;
  const auto g = parse("# header comment\n\nx\ty\n  y\tz  \n", o);
  CHECK(g.edge_count() == 2);
  const auto q = parse("\"a,1\",b\n");
  CHECK(q.labels().label(0) == "a,1");
}

TEST_CASE("header detection") {
  CHECK(parse("src,dst\na,b").edge_count() == 1);
  CHECK(parse("source,target\na,b").node_count() == 2);
  // Ordinary labels are data, even on the first line.
  CHECK(parse("alice,bob\nbob,carol").edge_count() == 2);
  EdgeListOptions numeric;
  numeric.numeric_labels = true;
  CHECK(parse("from_id,to_id\n1,2\n2,3", numeric).edge_count() == 2);
  CHECK(parse("1,2\n2,3", numeric).edge_count() == 2);
  EdgeListOptions absent;
  absent.header = HeaderMode::absent;
  CHECK(parse("src,dst\na,b", absent).edge_count() == 2);
  EdgeListOptions present;
  present.header = HeaderMode::present;
  CHECK(parse("x,y\na,b", present).edge_count() == 1);
}

TEST_CASE("malformed line reports its number") {
  try {
    parse("a,b\n# c\nb,c,d\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse("a\n"), ParseError);
  EdgeListOptions numeric;
  numeric.numeric_labels = true;
  CHECK_THROWS_AS(parse("1,2\n3,x\n", numeric), ParseError);
}

TEST_CASE("edge set does not depend on line order") {
  const auto a = parse("a,b\nb,c\nc,a\na,b");
  const auto b = parse("c,a\na,b\nb,c");
  auto labelled = [](const Network& g) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& e : g.edges()) out.emplace_back(g.labels().label(e.src), g.labels().label(e.dst));
    std::sort(out.begin(), out.end());
    return out;
  };
  CHECK(labelled(a) == labelled(b));
}

TEST_CASE("network validation") {
  CHECK_THROWS_AS(make(2, {{0, 2}}), InvalidArgument);
  LabelTable labels;
  labels.intern("only");
  CHECK_THROWS_AS(Network(2, {}, Layer::other, labels), InvalidArgument);
}

TEST_CASE("layer names") {
  CHECK(parse_layer("pulls") == Layer::pulls);
  CHECK(to_string(Layer::following) == "following");
  CHECK(parse_layer("nonsense") == Layer::other);
}

TEST_CASE("degrees") {
  SUBCASE("single edge") {
    const auto d = degrees(make(2, {{0, 1}}));
    CHECK(d.out[0] == 1);
    CHECK(d.in[1] == 1);
    CHECK(d.total[0] == 1);
    CHECK(d.total[1] == 1);
  }
  SUBCASE("empty") { CHECK(degrees(Network()).size() == 0); }
  SUBCASE("3-cycle") {
    const auto d = degrees(make(3, {{0, 1}, {1, 2}, {2, 0}}));
    for (int v = 0; v < 3; ++v) {
      CHECK(d.in[v] == 1);
      CHECK(d.out[v] == 1);
      CHECK(d.total[v] == 2);
    }
  }
  SUBCASE("handshake on random digraphs") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto g = synthetic::erdos_renyi_directed(60, 0.05, seed);
      const auto d = degrees(g);
      const auto sum = [](const std::vector<std::uint32_t>& v) { return std::accumulate(v.begin(), v.end(), 0ull); };
      CHECK(sum(d.in) == g.edge_count());
      CHECK(sum(d.out) == g.edge_count());
      for (std::size_t i = 0; i < d.size(); ++i) CHECK(d.total[i] == d.in[i] + d.out[i]);
    }
  }
}

TEST_CASE("degree mode names") {
  CHECK(parse_degree_mode("in") == DegreeMode::in);
  CHECK(to_string(DegreeMode::out) == "out");
  CHECK_THROWS_AS(parse_degree_mode("both"), InvalidArgument);
}

TEST_CASE("eigenvector centrality") {
  SUBCASE("cycle C5") {
    const auto x = eigenvector_centrality(make(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}}));
    for (double v : x) CHECK(v == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-9));
  }
  SUBCASE("star with three leaves") {
    const auto x = eigenvector_centrality(make(4, {{0, 1}, {0, 2}, {0, 3}}));
    CHECK(x[0] > x[1]);
    CHECK(x[1] == doctest::Approx(x[2]).epsilon(1e-12));
    CHECK(x[2] == doctest::Approx(x[3]).epsilon(1e-12));
    // Closed form for K_{1,3}: centre sqrt(3) times a leaf.
    CHECK(x[0] / x[1] == doctest::Approx(std::sqrt(3.0)).epsilon(1e-8));
  }
  SUBCASE("empty network") { CHECK_THROWS_AS(eigenvector_centrality(Network()), InvalidArgument); }
  SUBCASE("non-convergence carries the last iterate") {
    CentralityOptions o;
    o.max_iterations = 1;
    o.tolerance = 0.0;
    try {
      eigenvector_centrality(make(4, {{0, 1}, {0, 2}, {0, 3}}), o);
      FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
      CHECK(e.last_iterate.size() == 4);
    }
  }
  SUBCASE("matches a dense eigensolve on random 20-node graphs") {
    int checked = 0;
    for (std::uint64_t seed = 1; checked < 10; ++seed) {
      const auto g = synthetic::erdos_renyi_directed(20, 0.15, seed);
      Eigen::MatrixXd a = Eigen::MatrixXd::Zero(20, 20);
      for (const auto& e : g.edges()) {
        a(e.src, e.dst) = 1.0;
        a(e.dst, e.src) = 1.0;
      }
      // The dominant eigenvector is unique only on connected graphs.
      Eigen::MatrixXd reach = Eigen::MatrixXd::Identity(20, 20) + a;
      for (int i = 0; i < 5; ++i) reach = (reach * reach).cwiseMin(1.0);
      if ((reach.array() == 0.0).any()) continue;
      ++checked;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
      Eigen::VectorXd v = solver.eigenvectors().col(19);
      if (v.sum() < 0) v = -v;
      v.normalize();
      const auto x = eigenvector_centrality(g);
      for (int i = 0; i < 20; ++i) CHECK(std::abs(x[i] - v(i)) < 1e-6);
      for (double xi : x) CHECK(xi >= 0.0);
    }
  }
  SUBCASE("relabelling permutes the scores") {
    const auto g = synthetic::erdos_renyi_directed(30, 0.15, 7);
    std::vector<NodeId> perm(30);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(3);
    rng.shuffle(std::span<NodeId>(perm));
    std::vector<Edge> edges;
    for (const auto& e : g.edges()) edges.push_back({perm[e.src], perm[e.dst]});
    const auto x = eigenvector_centrality(g);
    const auto y = eigenvector_centrality(Network(30, edges));
    for (int i = 0; i < 30; ++i) CHECK(y[perm[i]] == doctest::Approx(x[i]).epsilon(1e-9));
  }
}

TEST_CASE("account unification") {
  auto rec = [](std::string id, std::optional<std::string> grav, std::optional<std::string> login,
                std::optional<std::string> reg) { return AccountRecord{std::move(id), grav, login, reg}; };
  SUBCASE("shared gravatar") {
    std::vector<AccountRecord> r = {rec("r1", "G", {}, {}), rec("r2", "G", {}, {})};
    const auto p = unify_accounts(r);
    CHECK(p.entity_count == 1);
  }
  SUBCASE("no shared keys") {
    std::vector<AccountRecord> r = {rec("r1", {}, {}, {}), rec("r2", {}, {}, {})};
    const auto p = unify_accounts(r);
    CHECK(p.entity_count == 2);
    CHECK(p.entity_of[0] != p.entity_of[1]);
  }
  SUBCASE("transitive chain") {
    std::vector<AccountRecord> r = {rec("r1", "G", {}, {}), rec("r2", "G", "bob", "2012-03-01T10:00:00Z"),
                                    rec("r3", {}, "bob", "2012-03-01")};
    const auto p = unify_accounts(r);
    CHECK(p.entity_count == 1);
  }
  SUBCASE("same login on another date is a different account") {
    std::vector<AccountRecord> r = {rec("r1", {}, "bob", "2012-03-01"), rec("r2", {}, "bob", "2013-01-01")};
    CHECK(unify_accounts(r).entity_count == 2);
  }
  SUBCASE("keys are trimmed and case-sensitive") {
    std::vector<AccountRecord> r = {rec("r1", " G ", {}, {}), rec("r2", "G", {}, {}), rec("r3", "g", {}, {})};
    const auto p = unify_accounts(r);
    CHECK(p.entity_of[0] == p.entity_of[1]);
    CHECK(p.entity_of[0] != p.entity_of[2]);
  }
  SUBCASE("partition invariant under permutation") {
    std::vector<AccountRecord> r;
    Rng rng(11);
    for (int i = 0; i < 40; ++i) {
      r.push_back(rec("r" + std::to_string(100 + i), "g" + std::to_string(rng.below(15)),
                      "u" + std::to_string(rng.below(20)), "2012-01-0" + std::to_string(1 + rng.below(2))));
    }
    const auto p = unify_accounts(r);
    auto label_of = [&](const std::vector<AccountRecord>& rs, const EntityPartition& part) {
      std::map<std::string, std::size_t> m;
      for (std::size_t i = 0; i < rs.size(); ++i) m[rs[i].record_id] = part.entity_of[i];
      return m;
    };
    auto shuffled = r;
    rng.shuffle(std::span<AccountRecord>(shuffled));
    CHECK(label_of(r, p) == label_of(shuffled, unify_accounts(shuffled)));
    // disjoint and covering
    std::size_t covered = 0;
    for (const auto& g : p.groups()) covered += g.size();
    CHECK(covered == r.size());
  }
  SUBCASE("csv round trip") {
    std::istringstream in("record_id,gravatar,login,registered\nr1,G,,\nr2,G,bob,2012-01-01\nr3,,bob,2012-01-01\nr4,,,\n");
    const auto records = load_account_records(in);
    REQUIRE(records.size() == 4);
    CHECK_FALSE(records[0].login.has_value());
    std::ostringstream out;
    write_entity_map(out, records, unify_accounts(records));
    CHECK(out.str() == "record_id,entity_id\nr1,0\nr2,0\nr3,0\nr4,1\n");
  }
}

}  // TEST_SUITE
