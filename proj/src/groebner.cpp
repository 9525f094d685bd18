#include "detsing/groebner.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <mutex>
#include <optional>
#include <set>

#include "detsing/error.hpp"

namespace detsing {

namespace {

int compare_grevlex_masked(const Monomial& a, const Monomial& b, std::uint64_t mask) {
  const unsigned da = a.degree_in(mask);
  const unsigned db = b.degree_in(mask);
  if (da != db) return da > db ? 1 : -1;
  std::uint64_t bits = (a.support() | b.support()) & mask;
  while (bits != 0) {
    const int v = 63 - std::countl_zero(bits);
    const unsigned ea = a.exponent(v);
    const unsigned eb = b.exponent(v);
    if (ea != eb) return ea < eb ? 1 : -1;
    bits &= ~(std::uint64_t{1} << v);
  }
  return 0;
}

}  // namespace

int MonomialOrder::compare(const Monomial& a, const Monomial& b) const {
  switch (kind_) {
    case Kind::GradedReverseLex:
      return compare_grevlex(a, b);
    case Kind::Lex: {
      std::uint64_t bits = a.support() | b.support();
      while (bits != 0) {
        const int v = std::countr_zero(bits);
        const unsigned ea = a.exponent(v);
        const unsigned eb = b.exponent(v);
        if (ea != eb) return ea > eb ? 1 : -1;
        bits &= bits - 1;
      }
      return 0;
    }
    case Kind::EliminationBlock: {
      const int c = compare_grevlex_masked(a, b, front_);
      if (c != 0) return c;
      return compare_grevlex_masked(a, b, ~front_);
    }
  }
  return 0;
}

std::string MonomialOrder::key() const {
  switch (kind_) {
    case Kind::GradedReverseLex: return "grevlex";
    case Kind::Lex: return "lex";
    case Kind::EliminationBlock: return "elim:" + std::to_string(front_);
  }
  return "?";
}

namespace {

std::mutex caps_mutex;
std::optional<ResourceCaps> installed_caps;

}  // namespace

void ResourceCaps::set_defaults(const ResourceCaps& caps) {
  std::lock_guard lock(caps_mutex);
  installed_caps = caps;
}

ResourceCaps ResourceCaps::defaults() {
  {
    std::lock_guard lock(caps_mutex);
    if (installed_caps) return *installed_caps;
  }
  ResourceCaps caps;
  if (const char* env = std::getenv("DETSING_MAX_TERMS")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) caps.max_terms = static_cast<std::size_t>(v);
  }
  return caps;
}

namespace {

/// Terms sorted descending in the working order, leading coefficient 1 once
/// inserted into the basis.
struct WorkPoly {
  std::vector<Term> terms;
  unsigned sugar = 0;

  bool empty() const { return terms.empty(); }
  const Monomial& lead() const { return terms.front().mono; }
};

class Engine {
 public:
  Engine(RingPtr ring, MonomialOrder order, ResourceCaps caps)
      : ring_(std::move(ring)), field_(ring_->field()), order_(order), caps_(caps) {}

  WorkPoly from_polynomial(const Polynomial& f) const {
    WorkPoly w;
    w.terms = f.terms();
    if (order_.kind() != MonomialOrder::Kind::GradedReverseLex) {
      std::sort(w.terms.begin(), w.terms.end(),
                [&](const Term& a, const Term& b) { return order_.compare(a.mono, b.mono) > 0; });
    }
    w.sugar = f.total_degree();
    return w;
  }

  Polynomial to_polynomial(const WorkPoly& w) const {
    if (order_.kind() == MonomialOrder::Kind::GradedReverseLex) {
      return Polynomial::from_sorted_terms(ring_, w.terms);
    }
    return Polynomial::from_terms(ring_, w.terms);
  }

  /// a - c * m * b, both sorted descending.
  std::vector<Term> sub_mul(const std::vector<Term>& a, std::size_t a_start, const Scalar& c,
                            const Monomial& m, const std::vector<Term>& b) const {
    std::vector<Term> out;
    out.reserve(a.size() - a_start + b.size());
    std::size_t i = a_start;
    std::size_t j = 0;
    Monomial bm;
    bool have_bm = false;
    while (i < a.size() || j < b.size()) {
      if (j < b.size() && !have_bm) {
        bm = b[j].mono * m;
        have_bm = true;
      }
      int cmp;
      if (i >= a.size()) {
        cmp = -1;
      } else if (j >= b.size()) {
        cmp = 1;
      } else {
        cmp = order_.compare(a[i].mono, bm);
      }
      if (cmp > 0) {
        out.push_back(a[i++]);
      } else if (cmp < 0) {
        out.push_back({bm, field_.neg(field_.mul(c, b[j].coeff))});
        ++j;
        have_bm = false;
      } else {
        Scalar s = field_.sub(a[i].coeff, field_.mul(c, b[j].coeff));
        if (s != 0) out.push_back({bm, std::move(s)});
        ++i;
        ++j;
        have_bm = false;
      }
    }
    if (out.size() > caps_.max_terms) {
      throw Error(ErrorCode::ResourceLimit, "polynomial exceeds " + std::to_string(caps_.max_terms) + " terms");
    }
    return out;
  }

  /// Index of a reducer whose leading monomial divides t, or -1.
  long find_reducer(const Monomial& t) const {
    for (std::size_t k = 0; k < reducers_.size(); ++k) {
      if (leads_[reducers_[k]].divides(t)) return static_cast<long>(reducers_[k]);
    }
    return -1;
  }

  /// Fully reduces h against the current reducers. Leading coefficient of
  /// the result is normalized to 1 when nonzero.
  void reduce(WorkPoly& h, bool full) const {
    std::vector<Term> done;
    std::vector<Term>& cur = h.terms;
    std::size_t start = 0;
    while (start < cur.size()) {
      const long r = find_reducer(cur[start].mono);
      if (r < 0) {
        if (!full) break;
        done.push_back(std::move(cur[start]));
        ++start;
        continue;
      }
      const WorkPoly& g = polys_[static_cast<std::size_t>(r)];
      const Monomial m = cur[start].mono / g.lead();
      h.sugar = std::max(h.sugar, m.degree() + g.sugar);
      const Scalar c = cur[start].coeff;
      cur = sub_mul(cur, start, c, m, g.terms);
      start = 0;
    }
    if (full) {
      for (std::size_t k = start; k < cur.size(); ++k) done.push_back(std::move(cur[k]));
      cur = std::move(done);
    } else if (start > 0) {
      cur.erase(cur.begin(), cur.begin() + static_cast<long>(start));
    }
    make_monic(h);
  }

  void make_monic(WorkPoly& h) const {
    if (h.empty() || h.terms.front().coeff == 1) return;
    const Scalar inv = field_.inv(h.terms.front().coeff);
    for (Term& t : h.terms) t.coeff = field_.mul(t.coeff, inv);
  }

  std::vector<Polynomial> run(const std::vector<Polynomial>& input) {
    std::vector<WorkPoly> start;
    for (const Polynomial& f : input) {
      if (!f.is_zero()) start.push_back(from_polynomial(f));
    }
    std::sort(start.begin(), start.end(), [&](const WorkPoly& a, const WorkPoly& b) {
      return order_.compare(a.lead(), b.lead()) < 0;
    });
    for (WorkPoly& w : start) {
      reduce(w, true);
      if (w.empty()) continue;
      if (insert(std::move(w))) return {Polynomial::constant(ring_, 1)};
    }
    while (!pairs_.empty()) {
      const Pair p = *pairs_.begin();
      pairs_.erase(pairs_.begin());
      WorkPoly s = spoly(p);
      reduce(s, true);
      if (s.empty()) continue;
      if (insert(std::move(s))) return {Polynomial::constant(ring_, 1)};
    }
    return finish();
  }

 private:
  struct Pair {
    unsigned sugar;
    Monomial lcm;
    std::size_t i;
    std::size_t j;
  };

  struct PairLess {
    const MonomialOrder* order;
    bool operator()(const Pair& a, const Pair& b) const {
      if (a.sugar != b.sugar) return a.sugar < b.sugar;
      const int c = order->compare(a.lcm, b.lcm);
      if (c != 0) return c < 0;
      if (a.j != b.j) return a.j < b.j;
      return a.i < b.i;
    }
  };

  WorkPoly spoly(const Pair& p) const {
    const WorkPoly& f = polys_[p.i];
    const WorkPoly& g = polys_[p.j];
    const Monomial mf = p.lcm / f.lead();
    const Monomial mg = p.lcm / g.lead();
    WorkPoly s;
    // Both monic: lcm/lf * f - lcm/lg * g, with the leading terms cancelling.
    std::vector<Term> left;
    left.reserve(f.terms.size());
    for (std::size_t k = 1; k < f.terms.size(); ++k) left.push_back({f.terms[k].mono * mf, f.terms[k].coeff});
    std::vector<Term> tail(g.terms.begin() + 1, g.terms.end());
    s.terms = sub_mul(left, 0, Scalar(1), mg, tail);
    s.sugar = std::max(f.sugar + mf.degree(), g.sugar + mg.degree());
    return s;
  }

  /// Adds h (reduced, monic) with the Gebauer–Möller update. Returns true if
  /// h is a nonzero constant.
  bool insert(WorkPoly h) {
    if (h.lead().is_one()) return true;
    if (polys_.size() + 1 > caps_.max_basis) {
      throw Error(ErrorCode::ResourceLimit, "Gröbner basis exceeds " + std::to_string(caps_.max_basis) + " elements");
    }
    const std::size_t t = polys_.size();
    const Monomial lt = h.lead();
    polys_.push_back(std::move(h));
    leads_.push_back(lt);

    struct Candidate {
      std::size_t i;
      Monomial lcm;
      bool coprime;
      bool keep = true;
    };
    std::vector<Candidate> cands;
    for (std::size_t i : active_) {
      cands.push_back({i, lcm(leads_[i], lt), coprime(leads_[i], lt)});
    }
    // Criterion M: drop a pair whose lcm is a proper multiple of another's;
    // among equal lcms keep one, preferring a coprime pair (criterion F).
    for (std::size_t a = 0; a < cands.size(); ++a) {
      for (std::size_t b = 0; b < cands.size() && cands[a].keep; ++b) {
        if (a == b || !cands[b].keep) continue;
        if (!cands[b].lcm.divides(cands[a].lcm)) continue;
        if (!(cands[b].lcm == cands[a].lcm)) {
          cands[a].keep = false;
        } else if (cands[b].coprime || !cands[a].coprime) {
          cands[a].keep = false;
        }
      }
    }
    // Criterion B on existing pairs.
    for (auto it = pairs_.begin(); it != pairs_.end();) {
      if (lt.divides(it->lcm) && !(lcm(leads_[it->i], lt) == it->lcm) &&
          !(lcm(leads_[it->j], lt) == it->lcm)) {
        it = pairs_.erase(it);
      } else {
        ++it;
      }
    }
    const WorkPoly& hp = polys_[t];
    for (const Candidate& c : cands) {
      if (!c.keep || c.coprime) continue;
      const WorkPoly& g = polys_[c.i];
      const unsigned sugar = std::max(g.sugar + (c.lcm.degree() - g.lead().degree()),
                                      hp.sugar + (c.lcm.degree() - lt.degree()));
      pairs_.insert({sugar, c.lcm, c.i, t});
    }
    if (pairs_.size() > caps_.max_pairs) {
      throw Error(ErrorCode::ResourceLimit, "pair queue exceeds " + std::to_string(caps_.max_pairs));
    }
    std::vector<std::size_t> still;
    for (std::size_t i : active_) {
      if (!lt.divides(leads_[i])) still.push_back(i);
    }
    still.push_back(t);
    active_ = std::move(still);
    reducers_ = active_;
    return false;
  }

  std::vector<Polynomial> finish() {
    std::vector<std::size_t> basis = active_;
    std::sort(basis.begin(), basis.end(),
              [&](std::size_t a, std::size_t b) { return order_.compare(leads_[a], leads_[b]) < 0; });
    std::vector<Polynomial> out;
    out.reserve(basis.size());
    for (std::size_t k = 0; k < basis.size(); ++k) {
      reducers_.clear();
      for (std::size_t other : basis) {
        if (other != basis[k]) reducers_.push_back(other);
      }
      WorkPoly g = polys_[basis[k]];
      Term lead = g.terms.front();
      g.terms.erase(g.terms.begin());
      g.terms = full_tail(std::move(g.terms));
      g.terms.insert(g.terms.begin(), std::move(lead));
      polys_[basis[k]] = g;
      out.push_back(to_polynomial(g));
    }
    return out;
  }

  /// Normal form of a tail without rescaling.
  std::vector<Term> full_tail(std::vector<Term> terms) const {
    std::vector<Term> done;
    std::size_t start = 0;
    std::vector<Term> cur = std::move(terms);
    while (start < cur.size()) {
      const long r = find_reducer(cur[start].mono);
      if (r < 0) {
        done.push_back(std::move(cur[start]));
        ++start;
        continue;
      }
      const WorkPoly& g = polys_[static_cast<std::size_t>(r)];
      const Monomial m = cur[start].mono / g.lead();
      const Scalar c = cur[start].coeff;
      cur = sub_mul(cur, start, c, m, g.terms);
      start = 0;
    }
    return done;
  }

  RingPtr ring_;
  const CoefficientField& field_;
  MonomialOrder order_;
  ResourceCaps caps_;
  std::vector<WorkPoly> polys_;
  std::vector<Monomial> leads_;
  std::vector<std::size_t> active_;
  std::vector<std::size_t> reducers_;
  std::set<Pair, PairLess> pairs_{PairLess{&order_}};
};

}  // namespace

Monomial leading_monomial(const Polynomial& f, const MonomialOrder& order) {
  if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "zero has no leading monomial");
  if (order.kind() == MonomialOrder::Kind::GradedReverseLex) return f.leading_term().mono;
  const Monomial* best = &f.terms().front().mono;
  for (const Term& t : f.terms()) {
    if (order.compare(t.mono, *best) > 0) best = &t.mono;
  }
  return *best;
}

GroebnerBasis::GroebnerBasis(RingPtr ring, MonomialOrder order, std::vector<Polynomial> elements)
    : ring_(std::move(ring)), order_(order), elements_(std::move(elements)) {
  leads_.reserve(elements_.size());
  for (const Polynomial& g : elements_) leads_.push_back(leading_monomial(g, order_));
}

Polynomial GroebnerBasis::normal_form(const Polynomial& f) const {
  require_same_ring(f.ring(), ring_);
  if (f.is_zero()) return f;
  if (is_unit()) return Polynomial(ring_);
  const CoefficientField& field = ring_->field();
  std::vector<Term> cur = f.terms();
  if (order_.kind() != MonomialOrder::Kind::GradedReverseLex) {
    std::sort(cur.begin(), cur.end(),
              [&](const Term& a, const Term& b) { return order_.compare(a.mono, b.mono) > 0; });
  }
  // Elements stored in canonical grevlex order; re-sort them once per call.
  std::vector<std::vector<Term>> basis;
  basis.reserve(elements_.size());
  for (const Polynomial& g : elements_) {
    std::vector<Term> terms = g.terms();
    if (order_.kind() != MonomialOrder::Kind::GradedReverseLex) {
      std::sort(terms.begin(), terms.end(),
                [&](const Term& a, const Term& b) { return order_.compare(a.mono, b.mono) > 0; });
    }
    basis.push_back(std::move(terms));
  }
  std::vector<Term> done;
  std::size_t start = 0;
  while (start < cur.size()) {
    long r = -1;
    for (std::size_t k = 0; k < leads_.size(); ++k) {
      if (leads_[k].divides(cur[start].mono)) {
        r = static_cast<long>(k);
        break;
      }
    }
    if (r < 0) {
      done.push_back(std::move(cur[start]));
      ++start;
      continue;
    }
    const std::vector<Term>& g = basis[static_cast<std::size_t>(r)];
    const Monomial m = cur[start].mono / g.front().mono;
    const Scalar c = field.mul(cur[start].coeff, field.inv(g.front().coeff));
    std::vector<Term> out;
    out.reserve(cur.size() - start + g.size());
    std::size_t i = start;
    std::size_t j = 0;
    while (i < cur.size() || j < g.size()) {
      const Monomial gm = j < g.size() ? g[j].mono * m : Monomial();
      int cmp;
      if (i >= cur.size()) {
        cmp = -1;
      } else if (j >= g.size()) {
        cmp = 1;
      } else {
        cmp = order_.compare(cur[i].mono, gm);
      }
      if (cmp > 0) {
        out.push_back(std::move(cur[i++]));
      } else if (cmp < 0) {
        out.push_back({gm, field.neg(field.mul(c, g[j].coeff))});
        ++j;
      } else {
        Scalar s = field.sub(cur[i].coeff, field.mul(c, g[j].coeff));
        if (s != 0) out.push_back({gm, std::move(s)});
        ++i;
        ++j;
      }
    }
    cur = std::move(out);
    start = 0;
  }
  return Polynomial::from_terms(ring_, std::move(done));
}

GroebnerBasis groebner(const Ideal& ideal, const MonomialOrder& order, const ResourceCaps& caps) {
  Engine engine(ideal.ring(), order, caps);
  return GroebnerBasis(ideal.ring(), order, engine.run(ideal.generators()));
}

std::shared_ptr<const GroebnerBasis> groebner_cached(const Ideal& ideal, const MonomialOrder& order,
                                                     const ResourceCaps& caps) {
  const std::string key = order.key();
  if (auto hit = ideal.cached_basis(key)) return hit;
  auto basis = std::make_shared<const GroebnerBasis>(groebner(ideal, order, caps));
  return ideal.store_basis(key, std::move(basis));
}

}  // namespace detsing
