#include "poqsim/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>

#include "jsonl_util.hpp"
#include "poqsim/csv.hpp"

namespace poqsim {

namespace {

const char* kKeys[] = {"rounds",  "seed", "alpha_f",  "beta_f",    "alpha_m",
                       "beta_m",  "k",    "k_policy", "scheduling"};

std::string trim(const std::string& s) {
  std::size_t begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  std::size_t end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* first = value.data();
  const char* last = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last)
    throw ValidationError("bad value for '" + key + "': '" + value + "'");
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  // from_chars for doubles is incomplete on some toolchains
  try {
    std::size_t pos = 0;
    double out = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return out;
  } catch (const std::exception&) {
    throw ValidationError("bad value for '" + key + "': '" + value + "'");
  }
}

void apply(SimConfig& config, const ConfigMap& settings) {
  for (const auto& [key, value] : settings) {
    if (key == "rounds") config.rounds = parse_number<int64_t>(key, value);
    else if (key == "seed") config.seed = parse_number<uint64_t>(key, value);
    else if (key == "alpha_f") config.params.alpha_f = parse_double(key, value);
    else if (key == "beta_f") config.params.beta_f = parse_double(key, value);
    else if (key == "alpha_m") config.params.alpha_m = parse_double(key, value);
    else if (key == "beta_m") config.params.beta_m = parse_double(key, value);
    else if (key == "k") config.params.k = parse_number<int>(key, value);
    else if (key == "k_policy") config.k_policy = k_policy_from_string(value);
    else if (key == "scheduling") config.scheduling = scheduling_from_string(value);
    else throw ValidationError("unknown config key '" + key + "'");
  }
}

}  // namespace

ConfigMap parse_config_file(const std::string& path) {
  if (!std::filesystem::exists(path)) throw MissingInputError("no such file: " + path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingInputError("cannot open: " + path);

  ConfigMap out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::size_t hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw LoadError(path, line_no, "expected key=value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw LoadError(path, line_no, "empty key");
    if (out.count(key)) throw LoadError(path, line_no, "duplicate key '" + key + "'");
    out[key] = value;
  }
  return out;
}

ConfigMap env_overrides() {
  ConfigMap out;
  for (const char* key : kKeys) {
    std::string env_name = "POQSIM_";
    for (const char* p = key; *p; ++p)
      env_name += static_cast<char>(std::toupper(static_cast<unsigned char>(*p)));
    if (const char* value = std::getenv(env_name.c_str())) out[key] = value;
  }
  return out;
}

SimConfig resolve_sim_config(const ConfigMap& file, const ConfigMap& env,
                             const ConfigMap& flags) {
  SimConfig config;
  apply(config, file);
  apply(config, env);
  apply(config, flags);
  validate_config(config);
  return config;
}

ConfigMap config_as_map(const SimConfig& config) {
  return {
      {"rounds", std::to_string(config.rounds)},
      {"seed", std::to_string(config.seed)},
      {"alpha_f", format_double(config.params.alpha_f)},
      {"beta_f", format_double(config.params.beta_f)},
      {"alpha_m", format_double(config.params.alpha_m)},
      {"beta_m", format_double(config.params.beta_m)},
      {"k", std::to_string(config.params.k)},
      {"k_policy", to_string(config.k_policy)},
      {"scheduling", to_string(config.scheduling)},
  };
}

}  // namespace poqsim
