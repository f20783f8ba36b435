#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "relforge/graph.hpp"
#include "relforge/reliability.hpp"
#include "relforge/root_isolation.hpp"
#include "relforge/serialize.hpp"

using namespace relforge;

TEST_CASE("brute force oracle fixtures") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {  // random trees: only the full edge set connects
    int n = 2 + (int)(rng() % 6);
    std::vector<Multigraph::Edge> edges;
    for (int i = 1; i < n; ++i) edges.emplace_back((int)(rng() % i), i);
    CHECK(rel_bruteforce(Multigraph(n, edges)) == Polynomial{1, -1}.pow(n - 1));
  }
  CHECK(rel_bruteforce(cycle(8)) == Polynomial{1, -1}.pow(7) * Polynomial{1, 7});
  CHECK(rel_bruteforce(gadget_hn(4).graph) == Polynomial{1, 0, -2, -4, 9, -4});
  // disconnected graphs never connect, so the polynomial is zero
  CHECK(rel_bruteforce(gadget_hn(2).graph).is_zero());
}

TEST_CASE("deletion-contraction fixtures") {
  CHECK(rel_delcon(cycle(2)) == Polynomial{1, 0, -1});
  CHECK(rel_delcon(complete(4)) == Polynomial{1, 0, 0, -4, -3, 12, -6});
  CHECK(rel_delcon(Multigraph(2, {{0, 1}})) == Polynomial{1, -1});
  CHECK_THROWS_AS(rel_delcon(gadget_hn(2).graph), std::invalid_argument);
}

TEST_CASE("split oracle fixtures") {
  CHECK(split_bruteforce(gadget_hn(3)) == Polynomial{0, 2, -2});
  CHECK(split_bruteforce(gadget_hn(2)) == Polynomial{1});
  CHECK(split_bruteforce(gadget_hn(5)) ==
        (Int(2) * Polynomial{1, -1}.pow(3)).shifted(3) * Polynomial{1, 3, 9, 12});
}

TEST_CASE("oracle edge guard") {
  Multigraph big = bundle_cycle(13, 2);  // 26 edges
  CHECK_THROWS_AS(rel_bruteforce(big), GuardError);
  CHECK_THROWS_AS(f_polynomial(big), GuardError);
  CHECK_THROWS_AS(split_bruteforce(Gadget(big, 0, 1)), GuardError);
  CHECK_NOTHROW(rel_delcon(big));  // delcon is not subject to the 2^m guard
}

TEST_CASE("complete-graph recurrence") {
  CHECK(rel_complete(1) == Polynomial{1});
  CHECK(rel_complete(2) == Polynomial{1, -1});
  CHECK(rel_complete(3) == Polynomial{1, 0, -3, 2});
  CHECK(rel_complete(4) == Polynomial{1, 0, 0, -4, -3, 12, -6});
}

TEST_CASE("gadget recurrences") {
  CHECK(rel_hn(2).is_zero());
  CHECK(split_hn(2) == Polynomial{1});
  CHECK(rel_hn(3) == Polynomial{1, -2, 1});
  CHECK(split_hn(3) == Polynomial{0, 2, -2});
  CHECK(rel_hn(4) == Polynomial{1, 0, -2, -4, 9, -4});
  CHECK(rel_hn(5) == Polynomial{1, 0, 0, -2, -3, -6, 10, 30, -48, 18});
  CHECK(split_hn(5) == Polynomial{0, 0, 0, 2, 0, 6, -14, -24, 54, -24});
}

TEST_CASE("oracle triangle up to n = 6") {
  for (int n = 1; n <= 6; ++n) {
    Multigraph kn = complete(n);
    const Polynomial& rec = rel_complete(n);
    CHECK(rec == rel_bruteforce(kn));
    CHECK(rec == rel_delcon(kn));
  }
  for (int n = 2; n <= 6; ++n) {
    Gadget hn = gadget_hn(n);
    CHECK(rel_hn(n) == rel_bruteforce(hn.graph));
    CHECK(split_hn(n) == split_bruteforce(hn));
    if (n >= 3) CHECK(rel_hn(n) == rel_delcon(hn.graph));
  }
}

TEST_CASE("polynomial shape invariants") {
  for (int n = 3; n <= 12; ++n) {
    int expected_deg = n * (n - 1) / 2 - 1;
    CHECK(rel_hn(n).degree() == expected_deg);
    CHECK(split_hn(n).degree() == expected_deg);
    CHECK(rel_hn(n).eval(Rational(0)) == Rational(1));
    CHECK(split_hn(n).eval(Rational(0)) == Rational(0));
  }
  std::mt19937_64 rng(43);
  for (int t = 0; t < 30; ++t) {
    int n = 2 + (int)(rng() % 4);
    std::vector<Multigraph::Edge> edges;
    for (int i = 1; i < n; ++i) edges.emplace_back((int)(rng() % i), i);
    for (int i = 0; i < (int)(rng() % 4); ++i) {
      int a = (int)(rng() % n), b = (int)(rng() % n);
      if (a != b) edges.emplace_back(std::min(a, b), std::max(a, b));
    }
    Multigraph g(n, edges);
    Polynomial rel = rel_bruteforce(g);
    CHECK(rel.degree() == g.edge_count());
    CHECK(rel.eval(Rational(0)) == Rational(1));
    if (n >= 2) CHECK(rel.eval(Rational(1)) == Rational(0));
    CHECK(rel == rel_delcon(g));
    Polynomial f = f_polynomial(g);
    CHECK(f.coeff(0) == 1);
    for (int i = 0; i <= f.degree(); ++i) CHECK(sgn(f.coeff(i)) >= 0);
  }
}

TEST_CASE("f-polynomial fixtures") {
  CHECK(f_polynomial(cycle(8)) == Polynomial{1, 8});
  CHECK(f_polynomial(cycle(2)) == Polynomial{1, 2});
  Multigraph path(4, {{0, 1}, {1, 2}, {2, 3}});
  CHECK(f_polynomial(path) == Polynomial{1});
}

TEST_CASE("bundle-cycle f closed form") {
  CHECK(f_bundle_cycle(8, 1) == Polynomial{1, 8});
  CHECK(f_bundle_cycle(2, 2) == Polynomial{1, 4, 6, 4});
  CHECK(f_bundle_cycle(3, 1) == Polynomial{1, 3});
  for (int n = 2; n <= 5; ++n)
    for (int b = 1; b <= 3; ++b)
      CHECK(f_bundle_cycle(n, b) == f_polynomial(bundle_cycle(n, b)));
}

TEST_CASE("substitution identity fixtures") {
  CHECK(rel_substitution(cycle(2), gadget_hn(3)) ==
        Polynomial{1, -1}.pow(3) * Polynomial{1, 3});
  CHECK(rel_substitution(cycle(2), gadget_hn(3)) ==
        rel_bruteforce(edge_substitute(cycle(2), gadget_hn(3))));
  CHECK(rel_substitution(cycle(2), gadget_hn(4)) ==
        rel_bruteforce(edge_substitute(cycle(2), gadget_hn(4))));
  CHECK(rel_substitution(cycle(3), gadget_hn(3)) ==
        rel_bruteforce(edge_substitute(cycle(3), gadget_hn(3))));
  CHECK(rel_substitution(cycle(3), gadget_hn(3)) == Polynomial{1, -1}.pow(5) * Polynomial{1, 5});
}

TEST_CASE("substitution identity on random small pairs") {
  std::mt19937_64 rng(47);
  int done = 0;
  while (done < 30) {
    int k = 3 + (int)(rng() % 3);
    int hm = k * (k - 1) / 2 - 1;
    int max_gm = 14 / hm;
    if (max_gm < 1) continue;
    int n = 2 + (int)(rng() % 3);
    std::vector<Multigraph::Edge> edges;
    for (int i = 1; i < n; ++i) edges.emplace_back((int)(rng() % i), i);
    while ((int)edges.size() < max_gm && rng() % 2) {
      int a = (int)(rng() % n), b = (int)(rng() % n);
      if (a != b) edges.emplace_back(std::min(a, b), std::max(a, b));
    }
    if ((int)edges.size() > max_gm) edges.resize(max_gm);
    Multigraph g(n, edges);
    if (!is_connected(g)) continue;
    ++done;
    Gadget h = gadget_hn(k);
    CHECK(rel_substitution(g, h) == rel_bruteforce(edge_substitute(g, h)));
  }
}

TEST_CASE("substitution falls back to oracles for non-family gadgets") {
  // 4-cycle gadget with opposite terminals: not a complete-minus-edge shape
  Gadget square(cycle(4), 0, 2);
  CHECK(rel_substitution(cycle(2), square) ==
        rel_bruteforce(edge_substitute(cycle(2), square)));
}

TEST_CASE("virtual edge interaction") {
  CHECK(yhat_eval(3, make_rational(-1, 2)) == make_rational(-1, 2));
  // cross-multiplied equality with the displayed degree-6-over-degree-6 form
  Polynomial num = Polynomial{1, 1} * Polynomial{1, 2, 4, 6, 6, 6};
  Polynomial den = (Int(2) * Polynomial{1, 3, 9, 12}).shifted(3);
  CHECK((rel_hn(5) + split_hn(5)) * den == num * split_hn(5));
  CHECK_THROWS_AS(yhat_eval(2, make_rational(-1, 2)), std::invalid_argument);
  // S_6 vanishes at -1/2, so the interaction is undefined there
  CHECK(split_hn(6).eval(make_rational(-1, 2)) == Rational(0));
  CHECK_THROWS_AS(yhat_eval(6, make_rational(-1, 2)), std::domain_error);
}

TEST_CASE("certify_below fixtures") {
  auto good = certify_below(5, make_rational(-2, 5), make_rational(-7, 20));
  CHECK(good.success);
  CHECK(good.s_root_count == 0);
  CHECK(good.b_root_count == 0);
  CHECK(good.s_sign_lo * good.b_sign_lo < 0);
  CHECK(good.s_sign_hi * good.b_sign_hi < 0);

  auto bad = certify_below(3, make_rational(-2, 5), make_rational(-7, 20));
  CHECK_FALSE(bad.success);
  CHECK(yhat_eval(3, make_rational(-2, 5)) == make_rational(-3, 4));  // > -1

  CHECK_THROWS_AS(certify_below(5, make_rational(-7, 20), make_rational(-2, 5)),
                  std::invalid_argument);
  CHECK_THROWS_AS(certify_below(5, Rational(-2), make_rational(-1, 2)), std::invalid_argument);
}

TEST_CASE("certify_below fails across a split-polynomial root") {
  // S_5 vanishes at 0 itself, so isolate away from that endpoint
  auto roots = isolate_roots(split_hn(5), Rational(-1), make_rational(-1, 100));
  REQUIRE_FALSE(roots.empty());
  auto iv = refine(split_hn(5), roots.front(), make_rational(1, 100));
  auto cert = certify_below(5, iv.lo, iv.hi);
  CHECK_FALSE(cert.success);
}

TEST_CASE("minus one is not a root for small simple graphs") {
  for (const auto& g : enumerate_connected_simple(4))
    CHECK(sign_at(rel_bruteforce(g), Rational(-1)) != 0);
}

TEST_CASE("memoized recurrences are stable") {
  Polynomial first = rel_complete(7);
  Polynomial again = rel_complete(7);
  CHECK(first == again);
  GadgetPolys gp = gadget_polys(6);
  CHECK(gp.n == 6);
  CHECK(gp.R == rel_hn(6));
  CHECK(gp.S == split_hn(6));
  json j = gadget_polys_to_json(gp);
  CHECK(j["n"] == 6);
  CHECK(poly_from_json(j["R"]) == gp.R);
  CHECK(poly_from_json(j["S"]) == gp.S);
}
