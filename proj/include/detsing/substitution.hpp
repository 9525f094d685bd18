#pragma once

#include <vector>

#include "detsing/polynomial.hpp"

namespace detsing {

/// Ring homomorphism source -> target given by the images of the source
/// variables.
class Substitution {
 public:
  /// Throws BadParameters if the image count differs from the source size,
  /// RingMismatch if an image is not in `target`.
  Substitution(RingPtr source, RingPtr target, std::vector<Polynomial> images);

  /// Maps each source variable to the target variable of the same name.
  static Substitution by_name(RingPtr source, RingPtr target);

  const RingPtr& source() const { return source_; }
  const RingPtr& target() const { return target_; }
  const Polynomial& image(VarId v) const { return images_.at(v); }
  const std::vector<Polynomial>& images() const { return images_; }

  /// (then o this): source -> then.target.
  Substitution then(const Substitution& next) const;

 private:
  RingPtr source_;
  RingPtr target_;
  std::vector<Polynomial> images_;
};

/// Throws RingMismatch if f is not in s.source().
Polynomial substitute(const Polynomial& f, const Substitution& s);

/// f rewritten in `target`, matching variables by name. Throws
/// UnknownVariable if a variable of f's support is missing from target.
Polynomial transfer_by_name(const Polynomial& f, const RingPtr& target);

/// num / den in a localization of a polynomial ring.
struct Fraction {
  Polynomial num;
  Polynomial den;

  bool equals(const Fraction& other) const { return num * other.den == other.num * den; }
};

/// Homomorphism into a localization: each source variable maps to a
/// fraction whose denominator is a product of units of the target chart.
class LocalizedSubstitution {
 public:
  LocalizedSubstitution(RingPtr source, RingPtr target, std::vector<Fraction> images);
  static LocalizedSubstitution from(const Substitution& s);

  const RingPtr& source() const { return source_; }
  const RingPtr& target() const { return target_; }
  const Fraction& image(VarId v) const { return images_.at(v); }

  Fraction apply(const Polynomial& f) const;
  LocalizedSubstitution then(const LocalizedSubstitution& next) const;

 private:
  RingPtr source_;
  RingPtr target_;
  std::vector<Fraction> images_;
};

}  // namespace detsing
