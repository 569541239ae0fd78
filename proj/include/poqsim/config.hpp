#pragma once

#include <map>
#include <string>

#include "poqsim/sim.hpp"

namespace poqsim {

using ConfigMap = std::map<std::string, std::string>;

// Flat key=value file; '#' starts a comment, blank lines are ignored.
// Recognized keys: rounds, seed, alpha_f, beta_f, alpha_m, beta_m, k,
// k_policy, scheduling.
ConfigMap parse_config_file(const std::string& path);

// POQSIM_<KEY> environment variables, mapped to lowercase keys.
ConfigMap env_overrides();

// Layers settings over the built-in defaults: file, then environment,
// then flags. Unknown keys and unparsable values are ValidationErrors.
// The resolved config is validated before it is returned.
SimConfig resolve_sim_config(const ConfigMap& file, const ConfigMap& env,
                             const ConfigMap& flags);

// The config rendered back to strings, for run manifests.
ConfigMap config_as_map(const SimConfig& config);

}  // namespace poqsim
