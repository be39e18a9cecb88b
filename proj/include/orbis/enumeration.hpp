#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "orbis/moebius.hpp"

namespace orbis {

// Generators closed under inverses, one printable symbol each. A generator
// labelled 'a' has its inverse labelled 'A' unless it is an involution.
struct GroupPresentation {
  std::vector<Moebius> generators;
  std::vector<char> labels;
  std::vector<std::size_t> inverse_of;

  static GroupPresentation from_generators(std::span<const Moebius> gens,
                                           const ClassifyOptions& opts = {});
  static GroupPresentation triangle(int p, int q, int r);
};

struct EnumerationOptions {
  double dedup_tol = 1e-8;
  std::size_t budget = 5'000'000;
};

struct GroupElement {
  std::string word;
  Moebius matrix;
};

// Group elements keyed by matrix up to an absolute entrywise tolerance.
class ElementSet {
 public:
  explicit ElementSet(double tol = 1e-8);

  // Returns the index of an element within tolerance of m, if any.
  std::optional<std::size_t> find(const Moebius& m) const;
  // Inserts unless a matching element exists; returns (index, inserted).
  std::pair<std::size_t, bool> insert(GroupElement e);

  const std::vector<GroupElement>& elements() const { return elements_; }
  const GroupElement& operator[](std::size_t i) const { return elements_[i]; }
  std::size_t size() const { return elements_.size(); }
  double tolerance() const { return tol_; }
  int max_word_length() const { return max_word_length_; }
  void set_max_word_length(int n) { max_word_length_ = n; }

 private:
  struct Key {
    std::int64_t v[4];
    bool operator==(const Key& o) const {
      return v[0] == o.v[0] && v[1] == o.v[1] && v[2] == o.v[2] && v[3] == o.v[3];
    }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };

  template <typename Visit>
  bool visit_candidate_keys(const Moebius& m, Visit&& visit) const;
  Key primary_key(const Moebius& m) const;

  double tol_;
  double cell_;
  int max_word_length_ = 0;
  std::vector<GroupElement> elements_;
  std::unordered_map<Key, std::vector<std::uint32_t>, KeyHash> buckets_;
};

// All reduced words up to max_word_length, shortest word kept per element.
// Order: word length, then lexicographic in presentation symbol order.
ElementSet enumerate_elements(const GroupPresentation& pres, int max_word_length,
                              const EnumerationOptions& opts = {});

struct ConjugacyClassRecord {
  std::string representative_word;
  Moebius matrix;
  IsometryKind kind;
  std::size_t members = 0;  // elements of the enumerated ball in this class

  // Filled by primitive_decomposition.
  std::optional<std::size_t> primitive_root;
  int power = 1;

  // Hyperbolic data.
  double length = 0.0;
  double norm = 1.0;
  bool self_inverse_conjugate = false;

  // Elliptic data: order m of the primitive root and exponent l in [1, m-1].
  int order = 0;
  int exponent = 0;

  bool hyperbolic() const { return is_hyperbolic(kind); }
  bool elliptic() const { return is_elliptic(kind); }
};

struct ClassCensus {
  ElementSet elements;
  std::vector<ConjugacyClassRecord> classes;
  std::vector<std::int64_t> class_of_element;  // -1 for the identity and unclassified
  std::vector<std::size_t> conjugators;        // element indices

  // Class of an arbitrary group element: direct lookup, then conjugation by
  // the conjugator list.
  std::optional<std::size_t> locate(const Moebius& m) const;
};

// Partitions the non-identity elements into conjugacy classes using every
// element of word length <= conjugator_depth as a candidate conjugator.
// Hyperbolic elements longer than max_length are left unclassified.
// Classes come out sorted: elliptic by rotation, then hyperbolic by length.
ClassCensus conjugacy_classes(ElementSet elements, int conjugator_depth, double tol = 1e-8,
                              double max_length = std::numeric_limits<double>::infinity());

// Fills primitive_root / power, and order / exponent for elliptic classes.
// Throws MissingRoot when a root that must exist cannot be found.
void primitive_decomposition(ClassCensus& census, int max_cone_order = 240);

struct SpectrumEntry {
  double length = 0.0;
  int multiplicity = 0;
  std::string word;
};

// Oriented primitive closed geodesics, ascending with equal lengths merged.
struct LengthSpectrum {
  std::vector<SpectrumEntry> entries;
  double completeness_bound = 0.0;
  std::vector<std::string> notes;

  std::size_t total_multiplicity() const;
};

struct SpectrumOptions {
  int conjugator_depth = 3;
  double merge_tol = 1e-6;
  EnumerationOptions enumeration;
};

ClassCensus build_census(const GroupPresentation& pres, int depth, const SpectrumOptions& opts = {},
                         double max_length = std::numeric_limits<double>::infinity());

// Spectrum of one census; completeness_bound is left at max_length.
LengthSpectrum spectrum_from_census(const ClassCensus& census, double max_length,
                                    double merge_tol = 1e-6);

// Largest L such that both spectra agree (lengths within tol, equal
// multiplicities) on all entries below L, capped at max_length.
double agreement_bound(const LengthSpectrum& x, const LengthSpectrum& y, double max_length,
                       double tol = 1e-6);

// Spectrum at depth + 2 with completeness_bound certified against depth.
LengthSpectrum length_spectrum(const GroupPresentation& pres, double max_length, int depth,
                               const SpectrumOptions& opts = {});

// Orders of the primitive elliptic classes, ascending.
std::vector<int> cone_points(const GroupPresentation& pres, int depth,
                             const SpectrumOptions& opts = {});
std::vector<int> cone_points(const ClassCensus& census);

}  // namespace orbis
