#include "orbis/enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

#include "orbis/error.hpp"
#include "orbis/orbisurface.hpp"

namespace orbis {

// ---------------------------------------------------------------- presentation

GroupPresentation GroupPresentation::from_generators(std::span<const Moebius> gens,
                                                     const ClassifyOptions& opts) {
  if (gens.empty()) throw Error(ErrorCode::InvalidInput, "presentation needs at least one generator");
  if (gens.size() > 26) throw Error(ErrorCode::InvalidInput, "at most 26 generators are supported");

  GroupPresentation pres;
  auto known = [&](const Moebius& m) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < pres.generators.size(); ++i) {
      if (psl_distance(pres.generators[i], m) <= 1e-9) return i;
    }
    return std::nullopt;
  };

  ClassifyOptions strict = opts;
  strict.cocompact = true;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const Moebius g = canonicalize(gens[i]);
    const IsometryKind kind = classify(g, strict);
    if (std::holds_alternative<IdentityKind>(kind)) {
      throw Error(ErrorCode::InvalidInput, "generator " + std::to_string(i) + " is the identity");
    }
    if (known(g)) continue;
    const std::size_t at = pres.generators.size();
    pres.generators.push_back(g);
    pres.labels.push_back(static_cast<char>('a' + i));
    pres.inverse_of.push_back(at);

    const Moebius inv = canonicalize(g.inverse());
    if (auto j = known(inv)) {
      pres.inverse_of[at] = *j;
      pres.inverse_of[*j] = at;
    } else {
      pres.generators.push_back(inv);
      pres.labels.push_back(static_cast<char>('A' + i));
      pres.inverse_of.push_back(at);
      pres.inverse_of[at] = at + 1;
    }
  }
  return pres;
}

GroupPresentation GroupPresentation::triangle(int p, int q, int r) {
  const auto gens = triangle_group_generators(p, q, r);
  return from_generators(gens);
}

// ---------------------------------------------------------------- element set

std::size_t ElementSet::KeyHash::operator()(const Key& k) const {
  std::uint64_t h = 1469598103934665603ull;
  for (std::int64_t x : k.v) {
    h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

ElementSet::ElementSet(double tol) : tol_(tol), cell_(std::max(1e-6, 100.0 * tol)) {}

ElementSet::Key ElementSet::primary_key(const Moebius& m) const {
  return {{std::llround(m.a / cell_), std::llround(m.b / cell_), std::llround(m.c / cell_),
           std::llround(m.d / cell_)}};
}

template <typename Visit>
bool ElementSet::visit_candidate_keys(const Moebius& m, Visit&& visit) const {
  const double entries[4] = {m.a, m.b, m.c, m.d};
  Key base = primary_key(m);
  std::int64_t alt[4];
  const double edge = 0.5 - tol_ / cell_;
  for (int i = 0; i < 4; ++i) {
    const double frac = entries[i] / cell_ - static_cast<double>(base.v[i]);
    alt[i] = frac > edge ? base.v[i] + 1 : (frac < -edge ? base.v[i] - 1 : base.v[i]);
  }
  for (int mask = 0; mask < 16; ++mask) {
    Key k = base;
    bool distinct = true;
    for (int i = 0; i < 4; ++i) {
      if (mask & (1 << i)) {
        if (alt[i] == base.v[i]) {
          distinct = false;
          break;
        }
        k.v[i] = alt[i];
      }
    }
    if (distinct && visit(k)) return true;
  }
  return false;
}

std::optional<std::size_t> ElementSet::find(const Moebius& m) const {
  std::optional<std::size_t> hit;
  auto probe = [&](const Moebius& x) {
    return visit_candidate_keys(x, [&](const Key& k) {
      auto it = buckets_.find(k);
      if (it == buckets_.end()) return false;
      for (std::uint32_t idx : it->second) {
        if (psl_distance(elements_[idx].matrix, x) <= tol_) {
          hit = idx;
          return true;
        }
      }
      return false;
    });
  };
  if (probe(m)) return hit;
  // Near-zero trace: canonical sign is decided by a threshold, so also try -m.
  if (std::abs(m.trace()) < 1e-6 && probe(Moebius{-m.a, -m.b, -m.c, -m.d})) return hit;
  return std::nullopt;
}

std::pair<std::size_t, bool> ElementSet::insert(GroupElement e) {
  if (auto idx = find(e.matrix)) return {*idx, false};
  const auto idx = static_cast<std::uint32_t>(elements_.size());
  buckets_[primary_key(e.matrix)].push_back(idx);
  elements_.push_back(std::move(e));
  return {idx, true};
}

ElementSet enumerate_elements(const GroupPresentation& pres, int max_word_length,
                              const EnumerationOptions& opts) {
  if (max_word_length < 0) throw Error(ErrorCode::InvalidInput, "max_word_length must be >= 0");
  ElementSet set(opts.dedup_tol);
  set.insert({"", Moebius::identity()});

  // Frontier entries: element index and index of the last generator.
  std::vector<std::pair<std::size_t, std::size_t>> frontier;
  std::vector<std::pair<std::size_t, std::size_t>> next;
  const std::size_t none = pres.generators.size();
  frontier.push_back({0, none});

  for (int depth = 1; depth <= max_word_length; ++depth) {
    next.clear();
    for (const auto& [idx, last] : frontier) {
      for (std::size_t g = 0; g < pres.generators.size(); ++g) {
        if (last != none && g == pres.inverse_of[last]) continue;
        const GroupElement& parent = set[idx];
        GroupElement child{parent.word + pres.labels[g], compose(parent.matrix, pres.generators[g])};
        auto [at, inserted] = set.insert(std::move(child));
        if (inserted) {
          if (set.size() > opts.budget) {
            throw Error(ErrorCode::BudgetExceeded,
                        "element budget of " + std::to_string(opts.budget) + " exceeded at depth " +
                            std::to_string(depth));
          }
          next.push_back({at, g});
        }
      }
    }
    frontier.swap(next);
    set.set_max_word_length(depth);
    if (frontier.empty()) break;  // finite group exhausted
  }
  set.set_max_word_length(max_word_length);
  return set;
}

// ---------------------------------------------------------------- conjugacy

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t x, std::size_t y) {
    x = find(x);
    y = find(y);
    if (x == y) return;
    if (y < x) std::swap(x, y);
    parent_[y] = x;  // smaller index (shorter word) stays the root
  }

 private:
  std::vector<std::size_t> parent_;
};

double sort_key(const ConjugacyClassRecord& c) {
  if (const auto* e = std::get_if<EllipticKind>(&c.kind)) return e->rotation;
  return c.length;
}

}  // namespace

std::optional<std::size_t> ClassCensus::locate(const Moebius& m) const {
  auto class_at = [&](std::size_t idx) -> std::optional<std::size_t> {
    const std::int64_t c = class_of_element[idx];
    if (c < 0) return std::nullopt;
    return static_cast<std::size_t>(c);
  };
  const Moebius cm = canonicalize(m);
  if (auto idx = elements.find(cm)) return class_at(*idx);
  for (std::size_t w : conjugators) {
    if (auto idx = elements.find(conjugate(cm, elements[w].matrix))) return class_at(*idx);
  }
  return std::nullopt;
}

ClassCensus conjugacy_classes(ElementSet elements, int conjugator_depth, double tol,
                              double max_length) {
  if (conjugator_depth < 0 || conjugator_depth > elements.max_word_length()) {
    throw Error(ErrorCode::InvalidInput, "conjugator_depth must lie in [0, max_word_length]");
  }
  ClassCensus census{std::move(elements), {}, {}, {}};
  const ElementSet& els = census.elements;
  const std::size_t n = els.size();

  for (std::size_t i = 0; i < n; ++i) {
    if (static_cast<int>(els[i].word.size()) > conjugator_depth) break;
    if (i > 0) census.conjugators.push_back(i);
  }

  ClassifyOptions strict;
  strict.cocompact = true;
  std::vector<IsometryKind> kinds(n);
  std::vector<char> wanted(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    kinds[i] = classify(els[i].matrix, strict);
    const auto* h = std::get_if<HyperbolicKind>(&kinds[i]);
    wanted[i] = !std::holds_alternative<IdentityKind>(kinds[i]) &&
                (h == nullptr || h->length <= max_length + 1e-6);
  }

  DisjointSets sets(n);
  for (std::size_t i = 1; i < n; ++i) {
    if (!wanted[i]) continue;
    const Moebius& g = els[i].matrix;
    for (std::size_t w : census.conjugators) {
      const Moebius h = conjugate(g, els[w].matrix);
      if (std::abs(std::abs(h.trace()) - std::abs(g.trace())) > tol) continue;
      if (auto j = els.find(h)) sets.unite(i, *j);
    }
  }

  std::map<std::size_t, std::size_t> root_to_class;
  std::vector<ConjugacyClassRecord> classes;
  std::vector<std::int64_t> raw_class(n, -1);
  for (std::size_t i = 1; i < n; ++i) {
    if (!wanted[i]) continue;
    const std::size_t root = sets.find(i);
    auto [it, inserted] = root_to_class.try_emplace(root, classes.size());
    if (inserted) {
      ConjugacyClassRecord rec;
      rec.representative_word = els[root].word;
      rec.matrix = els[root].matrix;
      rec.kind = kinds[root];
      if (const auto* h = std::get_if<HyperbolicKind>(&rec.kind)) {
        rec.length = h->length;
        rec.norm = h->norm;
      }
      classes.push_back(std::move(rec));
    }
    classes[it->second].members += 1;
    raw_class[i] = static_cast<std::int64_t>(it->second);
  }

  // Deterministic order: elliptic by rotation, hyperbolic by length, then word.
  std::vector<std::size_t> order(classes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const auto& cx = classes[x];
    const auto& cy = classes[y];
    if (cx.elliptic() != cy.elliptic()) return cx.elliptic();
    const double kx = sort_key(cx);
    const double ky = sort_key(cy);
    if (std::abs(kx - ky) > 1e-9) return kx < ky;
    if (cx.representative_word.size() != cy.representative_word.size()) {
      return cx.representative_word.size() < cy.representative_word.size();
    }
    return cx.representative_word < cy.representative_word;
  });
  std::vector<std::size_t> new_index(classes.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    census.classes.push_back(std::move(classes[order[k]]));
    new_index[order[k]] = k;
  }
  census.class_of_element.assign(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (raw_class[i] >= 0) {
      census.class_of_element[i] = static_cast<std::int64_t>(new_index[raw_class[i]]);
    }
  }

  for (std::size_t k = 0; k < census.classes.size(); ++k) {
    auto& rec = census.classes[k];
    if (!rec.hyperbolic()) continue;
    if (auto inv = census.locate(rec.matrix.inverse())) rec.self_inverse_conjugate = (*inv == k);
  }
  return census;
}

void primitive_decomposition(ClassCensus& census, int max_cone_order) {
  auto& classes = census.classes;
  const ElementSet& els = census.elements;

  double shortest = 0.0;
  for (const auto& c : classes) {
    if (c.hyperbolic() && (shortest == 0.0 || c.length < shortest)) shortest = c.length;
  }

  // Members of each class, for the root search below.
  std::vector<std::vector<std::size_t>> members(classes.size());
  for (std::size_t i = 0; i < els.size(); ++i) {
    if (census.class_of_element[i] >= 0) members[census.class_of_element[i]].push_back(i);
  }

  for (std::size_t k = 0; k < classes.size(); ++k) {
    auto& rec = classes[k];
    rec.primitive_root = k;
    rec.power = 1;

    if (rec.elliptic()) {
      const auto& e = std::get<EllipticKind>(rec.kind);
      if (!e.order) {
        throw Error(ErrorCode::MissingRoot, "elliptic class " + rec.representative_word +
                                                " has no finite order below the search cap");
      }
      int best = 0;
      std::size_t root = k;
      for (int m = *e.order; m <= max_cone_order; m += *e.order) {
        const Moebius r = rotation_with_center_of(rec.matrix, 2.0 * std::numbers::pi / m);
        if (auto c = census.locate(r)) {
          best = m;
          root = *c;
        }
      }
      if (best == 0) {
        throw Error(ErrorCode::MissingRoot, "no primitive rotation found for elliptic class " +
                                                rec.representative_word);
      }
      rec.order = best;
      rec.exponent = static_cast<int>(std::lround(e.rotation * best / (2.0 * std::numbers::pi)));
      rec.primitive_root = root;
      rec.power = rec.exponent;
      continue;
    }

    const int max_power = static_cast<int>(std::floor(rec.length / shortest + 1e-6));
    bool found = false;
    // Route 1: a member of this class has a k-th root inside the ball.
    for (int p = max_power; p >= 2 && !found; --p) {
      for (std::size_t idx : members[k]) {
        const auto hit = els.find(hyperbolic_root(els[idx].matrix, p));
        if (!hit) continue;
        const std::int64_t c = census.class_of_element[*hit];
        if (c < 0 || !classes[c].hyperbolic()) {
          throw Error(ErrorCode::MissingRoot, "root of " + rec.representative_word +
                                                  " is not a hyperbolic class");
        }
        rec.primitive_root = static_cast<std::size_t>(c);
        rec.power = p;
        found = true;
        break;
      }
    }
    // Route 2: a shorter class whose p-th power lands in this class.
    for (std::size_t j = 0; j < k && !found; ++j) {
      const auto& cand = classes[j];
      if (!cand.hyperbolic() || cand.power != 1) continue;
      const double ratio = rec.length / cand.length;
      const int p = static_cast<int>(std::lround(ratio));
      if (p < 2 || std::abs(rec.length - p * cand.length) > 1e-6 * p) continue;
      if (auto c = census.locate(power(cand.matrix, p)); c && *c == k) {
        rec.primitive_root = j;
        rec.power = p;
        found = true;
      }
    }
  }

  // Roots found by route 1 may themselves be powers; chase to the primitive.
  for (auto& rec : classes) {
    if (!rec.hyperbolic()) continue;
    while (*rec.primitive_root != static_cast<std::size_t>(&rec - classes.data()) &&
           classes[*rec.primitive_root].power > 1) {
      const auto& parent = classes[*rec.primitive_root];
      rec.power *= parent.power;
      rec.primitive_root = parent.primitive_root;
    }
  }
}

// ---------------------------------------------------------------- spectra

std::size_t LengthSpectrum::total_multiplicity() const {
  std::size_t total = 0;
  for (const auto& e : entries) total += static_cast<std::size_t>(e.multiplicity);
  return total;
}

ClassCensus build_census(const GroupPresentation& pres, int depth, const SpectrumOptions& opts,
                         double max_length) {
  ElementSet els = enumerate_elements(pres, depth, opts.enumeration);
  ClassCensus census = conjugacy_classes(std::move(els), std::min(opts.conjugator_depth, depth),
                                         opts.enumeration.dedup_tol, max_length);
  primitive_decomposition(census);
  return census;
}

LengthSpectrum spectrum_from_census(const ClassCensus& census, double max_length, double merge_tol) {
  LengthSpectrum spec;
  spec.completeness_bound = max_length;
  std::vector<const ConjugacyClassRecord*> prims;
  for (std::size_t k = 0; k < census.classes.size(); ++k) {
    const auto& c = census.classes[k];
    if (c.hyperbolic() && c.primitive_root == k && c.length <= max_length) prims.push_back(&c);
  }
  std::stable_sort(prims.begin(), prims.end(),
                   [](const auto* x, const auto* y) { return x->length < y->length; });
  for (const auto* c : prims) {
    if (!spec.entries.empty() && c->length - spec.entries.back().length <= merge_tol) {
      auto& e = spec.entries.back();
      e.multiplicity += 1;
      // Shortlex-smallest word, so the choice does not depend on rounding.
      const auto& w = c->representative_word;
      if (w.size() < e.word.size() || (w.size() == e.word.size() && w < e.word)) e.word = w;
      continue;
    }
    spec.entries.push_back({c->length, 1, c->representative_word});
  }
  for (const auto& e : spec.entries) {
    if (e.multiplicity % 2 == 1) {
      std::ostringstream note;
      note.precision(15);
      note << "length " << e.length << " has odd oriented multiplicity " << e.multiplicity
           << " (a class conjugate to its own inverse)";
      spec.notes.push_back(note.str());
    }
  }
  return spec;
}

double agreement_bound(const LengthSpectrum& x, const LengthSpectrum& y, double max_length, double tol) {
  const std::size_t n = std::min(x.entries.size(), y.entries.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& ex = x.entries[i];
    const auto& ey = y.entries[i];
    if (std::abs(ex.length - ey.length) > tol || ex.multiplicity != ey.multiplicity) {
      return std::min({ex.length, ey.length, max_length});
    }
  }
  if (x.entries.size() > n) return std::min(x.entries[n].length, max_length);
  if (y.entries.size() > n) return std::min(y.entries[n].length, max_length);
  return max_length;
}

LengthSpectrum length_spectrum(const GroupPresentation& pres, double max_length, int depth,
                               const SpectrumOptions& opts) {
  if (!(max_length > 0.0)) throw Error(ErrorCode::InvalidInput, "max_length must be positive");
  const LengthSpectrum shallow =
      spectrum_from_census(build_census(pres, depth, opts, max_length), max_length, opts.merge_tol);
  LengthSpectrum deep =
      spectrum_from_census(build_census(pres, depth + 2, opts, max_length), max_length,
                           opts.merge_tol);
  deep.completeness_bound = agreement_bound(shallow, deep, max_length, opts.merge_tol);
  return deep;
}

std::vector<int> cone_points(const ClassCensus& census) {
  std::vector<int> orders;
  for (std::size_t k = 0; k < census.classes.size(); ++k) {
    const auto& c = census.classes[k];
    if (c.elliptic() && c.primitive_root == k) orders.push_back(c.order);
  }
  std::sort(orders.begin(), orders.end());
  return orders;
}

std::vector<int> cone_points(const GroupPresentation& pres, int depth, const SpectrumOptions& opts) {
  return cone_points(build_census(pres, depth, opts, 0.0));
}

}  // namespace orbis
