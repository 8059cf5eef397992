#include "freelat/universal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fbl {
namespace {

double lp_norm(const Vec& v, double p) {
  if (p == kPInf) {
    double m = 0.0;
    for (double t : v) m = std::max(m, std::abs(t));
    return m;
  }
  double s = 0.0;
  for (double t : v) {
    double a = std::abs(t);
    s += (p == 1.0) ? a : (p == 2.0 ? a * a : std::pow(a, p));
  }
  if (p == 1.0) return s;
  if (p == 2.0) return std::sqrt(s);
  return std::pow(s, 1.0 / p);
}

}  // namespace

void FiniteLatticeHom::validate() const {
  if (source < 1) throw std::invalid_argument("lattice hom: empty source");
  if (sigma.size() != lambda.size())
    throw std::invalid_argument("lattice hom: sigma/lambda size mismatch");
  if (sigma.empty()) throw std::invalid_argument("lattice hom: empty target");
  for (int i : sigma) {
    if (i < 0 || i >= source)
      throw std::invalid_argument("lattice hom: sigma index out of range");
  }
  for (double l : lambda) {
    if (!(l >= 0.0))
      throw std::invalid_argument("lattice hom: weights must be >= 0");
  }
  if (!(p >= 1.0)) throw std::invalid_argument("lattice hom: p must be >= 1");
}

bool FiniteLatticeHom::contractive(double tol) const {
  validate();
  if (p == kPInf) {
    for (double l : lambda) {
      if (l > 1.0 + tol) return false;
    }
    return true;
  }
  for (int i = 0; i < source; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < sigma.size(); ++j) {
      if (sigma[j] == i) s += std::pow(lambda[j], p);
    }
    if (std::pow(s, 1.0 / p) > 1.0 + tol) return false;
  }
  return true;
}

Vec FiniteLatticeHom::apply(const Vec& v) const {
  if (static_cast<int>(v.size()) != source)
    throw std::invalid_argument("lattice hom: vector has wrong size");
  Vec out(sigma.size());
  for (std::size_t j = 0; j < sigma.size(); ++j)
    out[j] = lambda[j] * v[sigma[j]];
  return out;
}

Vec factor(const PreorderedSpace& space, const PositiveContraction& phi,
           const NormalForm& nf) {
  if (!phi.tuple.feasible(space))
    throw std::invalid_argument(
        "factor: the tuple is not a feasible positive contraction");
  Vec out(phi.tuple.functionals.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = evaluate(nf, phi.tuple.functionals[i].coords);
  return out;
}

ContractionReport verify_contraction(const PreorderedSpace& space,
                                     const PositiveContraction& phi,
                                     const NormalForm& nf,
                                     const NormEngine& engine) {
  ContractionReport rep;
  rep.tol = engine.tol;
  rep.image = factor(space, phi, nf);
  rep.image_norm = lp_norm(rep.image, phi.tuple.p);
  double base = engine_norm(space, engine, nf);
  // Finite-p engine values are lower bounds; the factored value is itself
  // one, so the honest right-hand side is their max.
  rep.lattice_norm =
      engine.p == kPInf ? base : std::max(base, rep.image_norm);
  rep.pass = rep.image_norm <= rep.lattice_norm + rep.tol;
  return rep;
}

ComposeReport compose_check(const PreorderedSpace& space,
                            const FiniteLatticeHom& psi,
                            const PositiveContraction& phi,
                            const NormalForm& nf, int extra_trials,
                            std::uint64_t seed, double tol) {
  psi.validate();
  if (!psi.contractive())
    throw std::invalid_argument("compose_check: psi is not contractive");
  if (psi.source != phi.size())
    throw std::invalid_argument(
        "compose_check: psi source size differs from the tuple size");
  if (psi.p != phi.tuple.p)
    throw std::invalid_argument("compose_check: p of psi and phi differ");
  if (!phi.tuple.feasible(space))
    throw std::invalid_argument(
        "compose_check: the tuple is not a feasible positive contraction");

  // Coordinate j of psi o phi is lambda_j * x*_{sigma(j)}.
  PositiveContraction composed;
  composed.tuple.p = phi.tuple.p;
  for (std::size_t j = 0; j < psi.sigma.size(); ++j) {
    composed.tuple.functionals.push_back(DualFunctional{
        scaled(phi.tuple.functionals[psi.sigma[j]].coords, psi.lambda[j])});
  }
  if (!composed.tuple.feasible(space))
    throw std::runtime_error(
        "compose_check: composed tuple failed its feasibility check");

  ComposeReport rep;
  rep.tol = tol;
  rep.via_composed = factor(space, composed, nf);
  rep.via_after = psi.apply(factor(space, phi, nf));
  for (std::size_t j = 0; j < rep.via_composed.size(); ++j)
    rep.max_diff = std::max(
        rep.max_diff, std::abs(rep.via_composed[j] - rep.via_after[j]));
  rep.forms_checked = 1;

  Rng rng(seed);
  for (int t = 0; t < extra_trials; ++t) {
    NormalForm extra = normalize(*random_expression(space.dim(), 3, rng));
    Vec a = factor(space, composed, extra);
    Vec b = psi.apply(factor(space, phi, extra));
    for (std::size_t j = 0; j < a.size(); ++j)
      rep.max_diff = std::max(rep.max_diff, std::abs(a[j] - b[j]));
    ++rep.forms_checked;
  }
  rep.pass = rep.max_diff <= tol;
  return rep;
}

SpaceDiagnostics diagnostics(const PreorderedSpace& space, int samples,
                             std::uint64_t seed) {
  SpaceDiagnostics d;
  d.bipositivity_samples = samples;
  d.seed = seed;

  bool only_zero = true;
  for (const auto& v : space.positive_dual().vertices) {
    if (max_abs(v) > kGeoTol) only_zero = false;
  }
  d.trivial = only_zero;
  d.injective = separates_points(space);
  d.isometric = is_norming(space);
  d.cone = is_cone(space);
  d.j_norm = d.trivial ? 0.0 : 1.0;

  d.bipositive = true;
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    Vec x = rng.uniform_vec(space.dim(), -2.0, 2.0);
    if (dual_cone_membership(space, x) != cone_membership(space, x)) {
      d.bipositive = false;
      break;
    }
  }
  return d;
}

}  // namespace fbl
