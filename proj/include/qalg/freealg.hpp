#ifndef QALG_FREEALG_HPP
#define QALG_FREEALG_HPP

#include "qalg/algebra.hpp"
#include "qalg/saturation.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qalg {

/// The unit of the term monad at a space: a -> [a], as a map into the
/// quotient carrier. Throws when a point is missing from the universe.
SpaceMap unit_map(const FiniteSpace& space, const SaturationResult& r);

/// Quotient carrier with machine-friendly point names prefix0, prefix1, ...
/// in class order, plus the name -> class-id table.
std::pair<FiniteSpace, std::map<std::string, int>> relabeled_quotient(
    const SaturationResult& r, const std::string& prefix);

/// Result of computing a map on classes member-by-member: the image per
/// class (aligned with classes()), plus everything that went wrong.
struct ClassMapReport {
  std::vector<std::optional<int>> image;   // target class per source class
  std::vector<std::string> partial;        // no member could be mapped
  std::vector<std::string> ill_defined;    // members disagreed
  std::vector<std::string> expansive;      // distance grew under the map

  bool ok() const {
    return partial.empty() && ill_defined.empty() && expansive.empty();
  }
  std::string summary() const;
};

/// Multiplication of the term monad: outer classes are terms over
/// constants naming inner classes; flattening substitutes the inner
/// representative for each constant and resolves the result in the inner
/// universe. Representative independence and nonexpansiveness are checked
/// across all members.
ClassMapReport flatten(const SaturationResult& outer,
                       const SaturationResult& inner,
                       const std::map<std::string, Term>& const_to_inner_rep);

/// Functor action on a nonexpansive map f: relabels the constants of every
/// source-universe term by f and resolves the image in the target
/// universe.
ClassMapReport map_terms(const SpaceMap& f, const SaturationResult& src,
                         const SaturationResult& dst);

/// The free extension f* of a generator map f into a model: evaluates each
/// class representative in the algebra with constants interpreted by f.
/// Since a homomorphism agreeing with f on generators is determined by
/// structural induction, agreement of all members of every class is both
/// the well-definedness check and the uniqueness argument.
struct FreeExtensionReport {
  std::vector<Element> image;  // per class, aligned with classes()
  std::vector<std::string> representative_dependence;
  std::vector<std::string> hom_violations;
  std::vector<std::string> expansive;
  std::size_t partial_skips = 0;

  bool ok() const {
    return representative_dependence.empty() && hom_violations.empty() &&
           expansive.empty();
  }
  std::string summary() const;
};

FreeExtensionReport free_extension(const std::map<std::string, Element>& f,
                                   const Algebra& alg,
                                   const SaturationResult& r);

/// Soundness of the saturation against a model of the theory: class
/// equality must imply equality in the model, and the model distance can
/// never exceed the derived distance. A violation falsifies the engine,
/// not the theory.
struct SoundnessReport {
  std::vector<std::string> violations;
  std::size_t pairs_checked = 0;
  std::size_t partial_skips = 0;
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

SoundnessReport check_soundness(const SaturationResult& r, const Algebra& alg);

}  // namespace qalg

#endif
