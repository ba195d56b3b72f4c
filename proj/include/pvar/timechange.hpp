#pragma once

#include <span>
#include <vector>

#include "pvar/construct.hpp"
#include "pvar/partition.hpp"
#include "pvar/path.hpp"

namespace pvar {

/// x o phi on the level-n points of the refining sequence. The value list is
/// x's own, index for index; only the grid changes.
SampledPath pullback_path(const SampledPath& x, const HomeomorphismTable& phi);

/// max over level-n points s of |[x o phi]^(p)(s) - [x]^(p)(phi(s))|, where
/// phi(s) is located on x's grid by exact lookup.
double transported_pvar_check(const SampledPath& x, const HomeomorphismTable& phi, double p);

struct TransportedRecipe {
  SampledPath y;                ///< on the refining grid
  RecipeResult qadic;           ///< the recipe run along the q-adic grid
  std::vector<double> hprime;   ///< finite-difference derivative of H o phi^{-1}
};

/// Runs the recipe on h = H o phi^{-1} along the level-n q-adic grid and pulls
/// the result back. `H` holds samples at the level-n refining points.
TransportedRecipe transported_recipe(std::span<const double> H, double p, const HomeomorphismTable& phi,
                                     const UniformMagnitudeSpec& spec, double constant, int n,
                                     const Limits& limits = Limits::from_env());

}  // namespace pvar
