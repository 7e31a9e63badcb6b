#include "surfrep/word.hpp"

#include "surfrep/qham.hpp"
#include "surfrep/rng.hpp"

#include <sstream>

namespace surfrep {
namespace word {

namespace {

bool cancels(const Letter& x, const Letter& y) {
  return x.kind == y.kind && x.index == y.index && x.barred == y.barred &&
         x.inverted != y.inverted;
}

}  // namespace

Word reduce(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (const Letter& le : w) {
    if (!out.empty() && cancels(out.back(), le))
      out.pop_back();
    else
      out.push_back(le);
  }
  return out;
}

Word concat(const Word& x, const Word& y) {
  Word out = x;
  out.insert(out.end(), y.begin(), y.end());
  return reduce(out);
}

Word inverse(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    Letter le = *it;
    le.inverted = !le.inverted;
    out.push_back(le);
  }
  return out;
}

Word bar(const Word& w) {
  Word out = w;
  for (Letter& le : out) le.barred = !le.barred;
  return out;
}

Word bar_inverse(const Word& w) { return bar(inverse(w)); }

Word commutator(const Word& x, const Word& y) {
  return concat(concat(x, y), concat(inverse(x), inverse(y)));
}

std::string to_string(const Word& w) {
  if (w.empty()) return "1";
  std::ostringstream os;
  for (const Letter& le : w) {
    switch (le.kind) {
      case Gen::A: os << "a" << le.index; break;
      case Gen::B: os << "b" << le.index; break;
      case Gen::C: os << "c" << le.index; break;
      case Gen::U: os << "u"; break;
    }
    if (le.barred) os << "~";
    if (le.inverted) os << "'";
    os << " ";
  }
  return os.str();
}

WordTuple identity_tuple(int g, int l) {
  WordTuple t;
  t.g = g;
  t.l = l;
  for (int i = 1; i <= g; ++i) {
    t.slots.push_back(gen(Gen::A, i));
    t.slots.push_back(gen(Gen::B, i));
  }
  for (int j = 1; j <= l; ++j) t.slots.push_back(gen(Gen::C, j));
  return t;
}

namespace {

Word suffix_product(int g, int l, int first_pair, int first_class) {
  Word p;
  for (int k = first_pair; k <= g; ++k)
    p = concat(p, commutator(gen(Gen::A, k), gen(Gen::B, k)));
  for (int j = first_class; j <= l; ++j) p = concat(p, gen(Gen::C, j));
  return p;
}

}  // namespace

Word momentum_word(int g, int l) { return suffix_product(g, l, 1, 1); }

WordTuple beta_symbolic(int g, int l) {
  WordTuple t;
  t.g = g;
  t.l = l;
  for (int i = 1; i <= g; ++i) {
    const Word p = suffix_product(g, l, i + 1, 1);
    const Word pre = bar_inverse(p);
    const Word post = bar(p);
    t.slots.push_back(concat(concat(pre, bar(gen(Gen::B, i))), post));
    t.slots.push_back(concat(concat(pre, bar(gen(Gen::A, i))), post));
  }
  for (int j = 1; j <= l; ++j) {
    const Word q = suffix_product(g, l, g + 1, j + 1);
    t.slots.push_back(concat(
        concat(bar_inverse(q), bar_inverse(gen(Gen::C, j))), bar(q)));
  }
  return t;
}

Word substitute(const Word& w, const WordTuple& image) {
  Word out;
  for (const Letter& le : w) {
    Word im;
    switch (le.kind) {
      case Gen::A: im = image.a(le.index); break;
      case Gen::B: im = image.b(le.index); break;
      case Gen::C: im = image.c(le.index); break;
      case Gen::U: im = {Letter{Gen::U, 0, false, false}}; break;
    }
    if (le.inverted) im = inverse(im);
    if (le.barred) im = bar(im);
    out.insert(out.end(), im.begin(), im.end());
  }
  return reduce(out);
}

namespace {

// Numeric spot check of a claimed identity on the relation variety
// (mu(x) = 1), used only to classify a free-group failure as
// relation-dependent. lhs/rhs are words in the tuple generators and the
// formal conjugator.
double numeric_residual_on_relation(const Word& lhs, const Word& rhs, int g,
                                    int l) {
  const int n = 3;
  Rng rng(0xC0FFEE ^ (std::uint64_t(g) << 8) ^ l);
  double worst = 0.0;
  for (int trial = 0; trial < 4; ++trial) {
    SurfaceTuple x = random_tuple_on_relation(n, Group::U, g, l, rng);
    const Mat u = haar_sample(n, Group::U, rng).m();
    auto eval = [&](const Word& w) {
      Mat m = Mat::Identity(n, n);
      for (const Letter& le : w) {
        Mat f;
        switch (le.kind) {
          case Gen::A: f = x.as[le.index - 1]; break;
          case Gen::B: f = x.bs[le.index - 1]; break;
          case Gen::C: f = x.cs[le.index - 1]; break;
          case Gen::U: f = u; break;
        }
        if (le.inverted) f = f.adjoint().eval();
        if (le.barred) f = f.conjugate().eval();
        m = m * f;
      }
      return m;
    };
    worst = std::max(worst, (eval(lhs) - eval(rhs)).norm());
  }
  return worst;
}

SymbolicCheck classify(const Word& lhs, const Word& rhs, int g, int l,
                       const std::string& what) {
  SymbolicCheck c;
  c.holds_freely = (lhs == rhs);
  if (!c.holds_freely) {
    const double res = numeric_residual_on_relation(lhs, rhs, g, l);
    if (res <= 1e-9) {
      c.relation_dependent = true;
      c.detail = what + ": fails freely, holds on the relation variety";
    } else {
      c.detail = what + ": fails freely and numerically, lhs=" +
                 to_string(lhs) + " rhs=" + to_string(rhs);
    }
  }
  return c;
}

}  // namespace

SymbolicCheck check_involution_symbolic(int g, int l) {
  const WordTuple beta = beta_symbolic(g, l);
  const WordTuple id = identity_tuple(g, l);
  SymbolicCheck out;
  out.holds_freely = true;
  for (int s = 0; s < beta.slot_count(); ++s) {
    const Word twice = substitute(beta.slots[s], beta);
    const SymbolicCheck c =
        classify(twice, id.slots[s], g, l, "involution slot " +
                 std::to_string(s));
    if (!c.holds_freely) {
      out.holds_freely = false;
      out.relation_dependent = out.relation_dependent || c.relation_dependent;
      out.detail += c.detail + "; ";
      if (!c.relation_dependent) return out;
    }
  }
  return out;
}

SymbolicCheck check_equivariance_symbolic(int g, int l) {
  const WordTuple beta = beta_symbolic(g, l);
  // Image tuple with every generator conjugated by the formal u.
  WordTuple conj;
  conj.g = g;
  conj.l = l;
  const Word u = {Letter{Gen::U, 0, false, false}};
  const WordTuple id = identity_tuple(g, l);
  for (const Word& s : id.slots)
    conj.slots.push_back(concat(concat(u, s), inverse(u)));
  SymbolicCheck out;
  out.holds_freely = true;
  for (int s = 0; s < beta.slot_count(); ++s) {
    const Word lhs = substitute(beta.slots[s], conj);
    const Word rhs = concat(concat(bar(u), beta.slots[s]), inverse(bar(u)));
    const SymbolicCheck c =
        classify(lhs, rhs, g, l, "equivariance slot " + std::to_string(s));
    if (!c.holds_freely) {
      out.holds_freely = false;
      out.relation_dependent = out.relation_dependent || c.relation_dependent;
      out.detail += c.detail + "; ";
      if (!c.relation_dependent) return out;
    }
  }
  return out;
}

SymbolicCheck check_momentum_compat_symbolic(int g, int l) {
  const WordTuple beta = beta_symbolic(g, l);
  Word lhs;
  for (int i = 1; i <= g; ++i)
    lhs = concat(lhs, commutator(beta.a(i), beta.b(i)));
  for (int j = 1; j <= l; ++j) lhs = concat(lhs, beta.c(j));
  const Word rhs = reduce(bar_inverse(momentum_word(g, l)));
  return classify(lhs, rhs, g, l, "momentum compatibility");
}

}  // namespace word
}  // namespace surfrep
