#pragma once

#include <array>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "random_sprout.hpp"
#include "sprout/addressing.hpp"
#include "sprout/main_tree.hpp"
#include "sprout/phi.hpp"
#include "sprout/refinement.hpp"
#include "sprout/validate.hpp"

namespace sprout::testing {

// Items a..h of the property suite.
struct PropertyResult {
  int sprouts = 0;
  int admissible = 0;
  std::array<long, 8> checks{};
  std::array<long, 8> failures{};
  std::vector<std::string> messages;

  bool ok() const {
    for (long f : failures) {
      if (f) return false;
    }
    return true;
  }
  long total_failures() const {
    long t = 0;
    for (long f : failures) t += f;
    return t;
  }
};

inline void check(PropertyResult& r, int item, bool good, const std::string& what) {
  ++r.checks[item];
  if (!good) {
    ++r.failures[item];
    if (r.messages.size() < 20) r.messages.push_back(std::string(1, char('a' + item)) + ": " + what);
  }
}

inline PropertyResult run_properties(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  RandomSproutOptions opts;
  PropertyResult r;
  for (int k = 0; k < count; ++k) {
    Sprout s = random_regular(rng, opts);
    ++r.sprouts;
    std::string doc = to_document(s);
    const int np = s.boundary_size();
    const int m = s.white_count();

    // (a) #φ_i(P) = deg(w_i)
    for (int i = 1; i <= m; ++i) {
      auto f = oracle::phi_map(s, i);
      std::set<int> all;
      for (int p = 0; p < np; ++p) all.insert(p);
      check(r, 0, static_cast<int>(oracle::image(f, all).size()) == s.white_degree(i - 1),
            "degwi at w" + std::to_string(i) + "\n" + doc);
      check(r, 0, phi(s, i).table == f, "phi table differs from the path oracle\n" + doc);
    }

    // (b) subset sizes are non-increasing and stabilize at n_phi
    for (int t = 0; t < 4; ++t) {
      std::uniform_int_distribution<int> letter(1, m), plen(0, 3), qlen(1, 3);
      std::vector<int> pre(plen(rng)), per(qlen(rng));
      for (int& x : pre) x = letter(rng);
      for (int& x : per) x = letter(rng);
      const int len = (1 << np) + static_cast<int>(pre.size());
      auto sizes = oracle::subset_sizes(s, pre, per, len);
      bool mono = std::is_sorted(sizes.rbegin(), sizes.rend());
      check(r, 1, mono, "sizes increase\n" + doc);
      Address a(pre, per);
      check(r, 1, n_phi(s, a) == sizes.back(),
            "n_phi(" + a.str(m) + ") = " + std::to_string(n_phi(s, a)) + ", oracle " +
                std::to_string(sizes.back()) + "\n" + doc);
    }

    // (c) classification
    IndexDiagram d(s);
    for (int p = 0; p < np; ++p) {
      auto got = classify_address_set(d, p);
      auto want = oracle::classify(s, p);
      bool same = false;
      switch (want.kind) {
        case oracle::Kind::Finite:
          same = got.kind == Cardinality::Finite && got.count == static_cast<long long>(want.count);
          break;
        case oracle::Kind::Countable: same = got.kind == Cardinality::CountablyInfinite; break;
        case oracle::Kind::Uncountable: same = got.kind == Cardinality::Uncountable; break;
      }
      check(r, 2, same, "classification of " + s.boundary_name(p) + ": " + to_string(got) + "\n" + doc);
    }

    // (d) admissibility
    auto adm = check_admissibility(d);
    check(r, 3, adm.admissible == !oracle::inadmissible(s), "admissibility\n" + doc);
    if (!adm.admissible) {
      check(r, 3, is_address_of(d, adm.p, adm.shared()) && is_address_of(d, adm.q, adm.shared()),
            "witness address is not shared\n" + doc);
    }

    // (e) squaring keeps correctness
    Sprout sq = square(s);
    check(r, 4, validate(sq).is_correct, "square is not correct\n" + doc);

    // (f) isomorphism under relabeling, also after squaring
    Sprout t = relabel(s, rng);
    auto iso = isomorphic(s, t);
    check(r, 5, iso.has_value() && verify_isomorphism(s, t, *iso), "relabel not isomorphic\n" + doc);
    auto iso2 = isomorphic(sq, square(t));
    check(r, 5, iso2.has_value(), "squares not isomorphic\n" + doc);
    check(r, 5, canonical_form(s) == canonical_form(t), "digests differ\n" + doc);

    if (!adm.admissible) continue;
    ++r.admissible;

    // (g) cyclic G_T vertices have exactly one outgoing eq arc
    auto g = transformation_graph(s);
    const int nq = static_cast<int>(g.vq.size());
    std::vector<std::vector<char>> reach(nq, std::vector<char>(nq, 0));
    for (const auto& a : g.eq) reach[a.from][a.to] = 1;
    for (int k2 = 0; k2 < nq; ++k2) {
      for (int i = 0; i < nq; ++i) {
        for (int j = 0; j < nq; ++j) {
          if (reach[i][k2] && reach[k2][j]) reach[i][j] = 1;
        }
      }
    }
    for (int v = 0; v < nq; ++v) {
      if (!reach[v][v]) continue;
      int outs = 0;
      for (const auto& a : g.eq) outs += a.from == v;
      check(r, 6, outs == 1, "cyclic G_T vertex with " + std::to_string(outs) + " arcs\n" + doc);
    }

    // (h) points with one address have order at most #P
    auto rep = ramification_report(s);
    for (const auto* rows : {&rep.points, &rep.critical}) {
      for (const auto& row : *rows) {
        if (row.addresses_infinite || row.addresses.size() != 1 || !row.ord_main_tree) continue;
        check(r, 7, *row.ord_main_tree <= np,
              row.location + " has order " + std::to_string(*row.ord_main_tree) + "\n" + doc);
      }
    }
  }
  return r;
}

inline std::string summary(const PropertyResult& r) {
  std::ostringstream o;
  o << r.sprouts << " sprouts (" << r.admissible << " admissible);";
  for (int i = 0; i < 8; ++i) {
    o << " " << char('a' + i) << ":" << r.checks[i] - r.failures[i] << "/" << r.checks[i];
  }
  return o.str();
}

}  // namespace sprout::testing
