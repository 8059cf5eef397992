#pragma once

#include <cstdint>
#include <vector>

#include "freelat/expr.hpp"
#include "freelat/geometry.hpp"
#include "freelat/norms.hpp"

namespace fbl {

/// A positive contraction X -> l_p^N, given by its coordinate functionals.
struct PositiveContraction {
  FeasibleTuple tuple;

  int size() const { return static_cast<int>(tuple.functionals.size()); }
};

/// Vector lattice homomorphism l_p^N -> l_p^M of weighted-coordinate shape:
/// output j reads source coordinate sigma[j] scaled by lambda[j] >= 0.
/// These are exactly the lattice homomorphisms between finite l_p spaces
/// needed here, and contractivity is decidable in closed form.
struct FiniteLatticeHom {
  double p = kPInf;
  int source = 0;
  std::vector<int> sigma;
  Vec lambda;

  int target() const { return static_cast<int>(sigma.size()); }
  void validate() const;
  bool contractive(double tol = 1e-9) const;
  Vec apply(const Vec& v) const;
};

/// The factor morphism applied to nf: coordinate i is the evaluation of nf
/// at the i-th functional of phi. Throws when phi is not a feasible positive
/// contraction.
Vec factor(const PreorderedSpace& space, const PositiveContraction& phi,
           const NormalForm& nf);

struct ContractionReport {
  Vec image;            // factor(phi, nf)
  double image_norm = 0.0;
  double lattice_norm = 0.0;
  double tol = 0.0;
  bool pass = false;
};

/// Contractivity of the factor morphism on one element: the l_p norm of the
/// factored vector must not exceed the lattice norm. With the exact sup-norm
/// engine this is a real assertion; for finite p the engine value is itself
/// a lower bound, so the factored value is folded into the right-hand side
/// and a failure can only mean an engine bug.
ContractionReport verify_contraction(const PreorderedSpace& space,
                                     const PositiveContraction& phi,
                                     const NormalForm& nf,
                                     const NormEngine& engine);

struct ComposeReport {
  Vec via_composed;  // factor(psi o phi, nf)
  Vec via_after;     // psi(factor(phi, nf))
  double max_diff = 0.0;
  int forms_checked = 0;
  double tol = 0.0;
  bool pass = false;
};

/// Composition law: factoring through psi o phi agrees with applying psi
/// after factoring through phi. Checked on nf and on `extra_trials` random
/// expressions (seeded). Throws when psi is not contractive or shapes do
/// not line up.
ComposeReport compose_check(const PreorderedSpace& space,
                            const FiniteLatticeHom& psi,
                            const PositiveContraction& phi,
                            const NormalForm& nf, int extra_trials = 0,
                            std::uint64_t seed = 1, double tol = 1e-9);

struct SpaceDiagnostics {
  bool trivial = false;     // B+ = {0}: the whole lattice collapses
  bool injective = false;   // B+ separates points
  bool isometric = false;   // B+ is norming
  bool cone = false;        // the wedge is a cone, not just a wedge
  bool bipositive = false;  // sampled dual sign test == primal membership
  int bipositivity_samples = 0;
  std::uint64_t seed = 0;
  double j_norm = 0.0;  // 1 iff nontrivial
};

SpaceDiagnostics diagnostics(const PreorderedSpace& space, int samples = 200,
                             std::uint64_t seed = 7);

}  // namespace fbl
