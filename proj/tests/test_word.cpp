#include <doctest.h>

#include <map>

#include "surfrep/lie.hpp"
#include "surfrep/qham.hpp"
#include "surfrep/rng.hpp"
#include "surfrep/word.hpp"

using namespace surfrep;
using word::Gen;
using word::Letter;
using word::Word;
using word::WordTuple;

namespace {

// Test-local evaluator: assign a matrix to each generator slot and evaluate a
// word exactly as written, bar = entrywise conjugate, inverted = adjoint.
Mat evaluate(const Word& w, const SurfaceTuple& x, const Mat& u) {
  Mat out = Mat::Identity(x.n, x.n);
  for (const Letter& lt : w) {
    Mat m;
    switch (lt.kind) {
      case Gen::A: m = x.as[lt.index - 1]; break;
      case Gen::B: m = x.bs[lt.index - 1]; break;
      case Gen::C: m = x.cs[lt.index - 1]; break;
      case Gen::U: m = u; break;
    }
    if (lt.barred) m = tau(m);
    if (lt.inverted) m = m.adjoint().eval();
    out = out * m;
  }
  return out;
}

}  // namespace

TEST_CASE("reduce cancels inverse pairs and is idempotent") {
  const Word a = word::gen(Gen::A, 1);
  const Word b = word::gen(Gen::B, 1);
  const Word w = word::concat(a, word::concat(word::inverse(a), b));
  CHECK(word::reduce(w) == b);
  CHECK(word::reduce(word::concat(a, word::inverse(a))).empty());
  // bar and inversion must both match for a cancellation
  const Word mixed = word::concat(a, word::inverse(word::bar(a)));
  CHECK(word::reduce(mixed).size() == 2);
  const Word r = word::reduce(word::concat(w, word::inverse(w)));
  CHECK(r.empty());
  CHECK(word::reduce(word::reduce(w)) == word::reduce(w));
}

TEST_CASE("word algebra: inverse, bar, bar_inverse interplay") {
  const Word a = word::gen(Gen::A, 2);
  const Word b = word::gen(Gen::C, 1);
  const Word w = word::concat(a, word::inverse(b));
  // inverse is an anti-automorphism, involutive
  CHECK(word::reduce(word::inverse(word::inverse(w))) == word::reduce(w));
  // bar is an automorphism commuting with inverse
  CHECK(word::reduce(word::bar(word::bar(w))) == word::reduce(w));
  CHECK(word::reduce(word::bar_inverse(w)) ==
        word::reduce(word::bar(word::inverse(w))));
  CHECK(word::reduce(word::bar_inverse(word::bar_inverse(w))) ==
        word::reduce(w));
  // commutator of a word with itself is trivial
  CHECK(word::reduce(word::commutator(w, w)).empty());
  CHECK(!word::to_string(w).empty());
}

TEST_CASE("momentum_word layout") {
  const Word m = word::momentum_word(1, 2);
  // [a_1, b_1] c_1 c_2: 4 + 2 letters after reduction
  CHECK(m.size() == 6);
  CHECK(m[0].kind == Gen::A);
  CHECK(m[4].kind == Gen::C);
  CHECK(m[4].index == 1);
  CHECK(m[5].index == 2);
  CHECK(word::momentum_word(0, 1).size() == 1);
}

TEST_CASE("symbolic identities hold freely for all small signatures") {
  for (int g = 0; g <= 3; ++g) {
    for (int l = 0; l <= 3; ++l) {
      if (g + l == 0) continue;
      CAPTURE(g);
      CAPTURE(l);
      const auto inv = word::check_involution_symbolic(g, l);
      CHECK(inv.holds_freely);
      CHECK(!inv.relation_dependent);
      const auto eq = word::check_equivariance_symbolic(g, l);
      CHECK(eq.holds_freely);
      const auto mo = word::check_momentum_compat_symbolic(g, l);
      CHECK(mo.holds_freely);
    }
  }
}

TEST_CASE("beta_symbolic matches the numeric involution on random tuples") {
  Rng rng(201);
  for (auto [g, l] : {std::pair{0, 2}, {1, 1}, {2, 1}, {1, 0}}) {
    const WordTuple bw = word::beta_symbolic(g, l);
    const SurfaceTuple x = random_tuple(2, Group::U, g, l, rng);
    const SurfaceTuple bx = beta_numeric(x);
    const Mat u = Mat::Identity(2, 2);
    for (int s = 0; s < x.slot_count(); ++s) {
      const Mat via_word = evaluate(bw.slots[s], x, u);
      Mat via_numeric;
      if (s < 2 * g) {
        via_numeric = (s % 2 == 0) ? bx.as[s / 2] : bx.bs[s / 2];
      } else {
        via_numeric = bx.cs[s - 2 * g];
      }
      CHECK(fnorm(via_word - via_numeric) < 1e-12);
    }
  }
}

TEST_CASE("substitute composes tuples of words") {
  const int g = 1, l = 1;
  const WordTuple bw = word::beta_symbolic(g, l);
  // substituting beta's own image realizes beta^2, which must be the identity
  // tuple slotwise
  const WordTuple id = word::identity_tuple(g, l);
  for (int s = 0; s < id.slot_count(); ++s) {
    const Word twice = word::reduce(word::substitute(bw.slots[s], bw));
    CHECK(twice == word::reduce(id.slots[s]));
  }
}

TEST_CASE("evaluator sanity: momentum word evaluates to the numeric momentum") {
  Rng rng(202);
  const SurfaceTuple x = random_tuple(3, Group::U, 2, 2, rng);
  const Mat via_word =
      evaluate(word::momentum_word(2, 2), x, Mat::Identity(3, 3));
  CHECK(fnorm(via_word - momentum(x)) < 1e-12);
}
