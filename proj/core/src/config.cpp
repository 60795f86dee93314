// Copyright 2026 The MLGCL Authors
// SPDX-License-Identifier: Apache-2.0

#include "mlgcl/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mlgcl/error.hpp"
#include "mlgcl/random.hpp"

namespace mlgcl {
namespace {

using json = nlohmann::json;

constexpr std::uint64_t kProbeSeedStream = 7;

struct Field {
  std::function<void(ExperimentConfig&, const json&)> set;
  std::function<json(const ExperimentConfig&)> get;
};

[[noreturn]] void bad_value(const std::string& key, const std::string& expected, const json& v) {
  throw ValidationError("config key '" + key + "': expected " + expected + ", got " + v.dump());
}

double as_double(const std::string& key, const json& v) {
  if (!v.is_number()) bad_value(key, "a number", v);
  return v.get<double>();
}

std::int64_t as_int(const std::string& key, const json& v) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d == static_cast<double>(static_cast<std::int64_t>(d))) return static_cast<std::int64_t>(d);
  }
  bad_value(key, "an integer", v);
}

std::uint64_t as_u64(const std::string& key, const json& v) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  bad_value(key, "a non-negative integer", v);
}

bool as_bool(const std::string& key, const json& v) {
  if (!v.is_boolean()) bad_value(key, "true or false", v);
  return v.get<bool>();
}

std::string as_string(const std::string& key, const json& v) {
  if (!v.is_string()) bad_value(key, "a string", v);
  return v.get<std::string>();
}

// Enum parsers throw ValidationError without the key; add it.
template <class F>
auto keyed(const std::string& key, F&& f) {
  try {
    return f();
  } catch (const ValidationError& e) {
    throw ValidationError("config key '" + key + "': " + e.what());
  }
}

// Accepts a JSON array or a comma-separated string.
std::vector<json> as_list(const std::string& key, const json& v) {
  std::vector<json> out;
  if (v.is_array()) {
    for (const auto& e : v) out.push_back(e);
  } else if (v.is_string()) {
    std::stringstream ss(v.get<std::string>());
    std::string item;
    while (std::getline(ss, item, ',')) {
      json parsed = json::parse(item, nullptr, false);
      out.push_back(parsed.is_discarded() ? json(item) : parsed);
    }
  } else {
    bad_value(key, "a list", v);
  }
  if (out.empty()) throw ValidationError("config key '" + key + "': list must not be empty");
  return out;
}

template <class T, class Parse>
std::vector<T> enum_list(const std::string& key, const json& v, Parse parse) {
  std::vector<T> out;
  for (const auto& e : as_list(key, v)) out.push_back(keyed(key, [&] { return parse(as_string(key, e)); }));
  return out;
}

template <class T>
json names(const std::vector<T>& v) {
  json out = json::array();
  for (const auto& e : v) out.push_back(std::string(to_string(e)));
  return out;
}

const std::map<std::string, Field>& fields() {
  static const std::map<std::string, Field> table = [] {
    std::map<std::string, Field> t;
    auto int_field = [&t](const std::string& key, auto member) {
      t[key] = {[key, member](ExperimentConfig& c, const json& v) { member(c) = static_cast<std::remove_reference_t<decltype(member(c))>>(as_int(key, v)); },
                [member](const ExperimentConfig& c) { return json(member(const_cast<ExperimentConfig&>(c))); }};
    };
    auto double_field = [&t](const std::string& key, auto member) {
      t[key] = {[key, member](ExperimentConfig& c, const json& v) { member(c) = as_double(key, v); },
                [member](const ExperimentConfig& c) { return json(member(const_cast<ExperimentConfig&>(c))); }};
    };
    auto bool_field = [&t](const std::string& key, auto member) {
      t[key] = {[key, member](ExperimentConfig& c, const json& v) { member(c) = as_bool(key, v); },
                [member](const ExperimentConfig& c) { return json(member(const_cast<ExperimentConfig&>(c))); }};
    };
    auto enum_field = [&t](const std::string& key, auto member, auto parse) {
      t[key] = {[key, member, parse](ExperimentConfig& c, const json& v) {
                  member(c) = keyed(key, [&] { return parse(as_string(key, v)); });
                },
                [member](const ExperimentConfig& c) {
                  return json(std::string(to_string(member(const_cast<ExperimentConfig&>(c)))));
                }};
    };

    t["seed"] = {[](ExperimentConfig& c, const json& v) { c.set_seed(as_u64("seed", v)); },
                 [](const ExperimentConfig& c) { return json(c.seed); }};

    int_field("model.layers", [](ExperimentConfig& c) -> std::size_t& { return c.train.layers; });
    int_field("model.dim", [](ExperimentConfig& c) -> Index& { return c.train.dim; });
    enum_field("model.activation", [](ExperimentConfig& c) -> Activation& { return c.train.encoder_activation; },
               parse_activation);
    enum_field("model.head_activation", [](ExperimentConfig& c) -> Activation& { return c.train.head_activation; },
               parse_activation);

    int_field("train.epochs", [](ExperimentConfig& c) -> int& { return c.train.epochs; });
    double_field("train.lr", [](ExperimentConfig& c) -> double& { return c.train.lr; });
    int_field("train.patience", [](ExperimentConfig& c) -> int& { return c.train.patience; });
    enum_field("train.mode", [](ExperimentConfig& c) -> ContrastMode& { return c.train.mode; }, parse_contrast_mode);

    enum_field("aug.scheme", [](ExperimentConfig& c) -> AugmentScheme& { return c.train.view2.scheme; },
               parse_augment_scheme);
    int_field("aug.k", [](ExperimentConfig& c) -> Index& { return c.train.view2.k; });
    enum_field("aug.similarity", [](ExperimentConfig& c) -> SimilarityKind& { return c.train.view2.similarity; },
               parse_similarity_kind);
    double_field("aug.p", [](ExperimentConfig& c) -> double& { return c.train.view2.p; });
    int_field("aug.refresh", [](ExperimentConfig& c) -> int& { return c.train.refresh_interval; });
    bool_field("aug.bootstrap", [](ExperimentConfig& c) -> bool& { return c.train.bootstrap_from_features; });
    enum_field("aug.mask_mode", [](ExperimentConfig& c) -> MaskMode& { return c.train.view2.mask_mode; },
               parse_mask_mode);
    t["aug.sigma"] = {[](ExperimentConfig& c, const json& v) {
                        if (v.is_null()) {
                          c.train.view2.sigma.reset();
                        } else {
                          c.train.view2.sigma = as_double("aug.sigma", v);
                        }
                      },
                      [](const ExperimentConfig& c) {
                        return c.train.view2.sigma ? json(*c.train.view2.sigma) : json(nullptr);
                      }};

    double_field("loss.tau", [](ExperimentConfig& c) -> double& { return c.train.loss.tau; });
    double_field("loss.lambda", [](ExperimentConfig& c) -> double& { return c.train.loss.lambda; });
    bool_field("loss.literal_denominator", [](ExperimentConfig& c) -> bool& { return c.train.loss.literal_denominator; });

    int_field("probe.epochs", [](ExperimentConfig& c) -> int& { return c.probe.epochs; });
    double_field("probe.lr", [](ExperimentConfig& c) -> double& { return c.probe.lr; });
    double_field("probe.weight_decay", [](ExperimentConfig& c) -> double& { return c.probe.weight_decay; });
    int_field("probe.runs", [](ExperimentConfig& c) -> int& { return c.probe.runs; });

    t["ablate.schemes"] = {[](ExperimentConfig& c, const json& v) {
                             c.ablate.schemes = enum_list<AugmentScheme>("ablate.schemes", v, parse_augment_scheme);
                           },
                           [](const ExperimentConfig& c) { return names(c.ablate.schemes); }};
    t["ablate.modes"] = {[](ExperimentConfig& c, const json& v) {
                           c.ablate.modes = enum_list<ContrastMode>("ablate.modes", v, parse_contrast_mode);
                         },
                         [](const ExperimentConfig& c) { return names(c.ablate.modes); }};
    t["ablate.ks"] = {[](ExperimentConfig& c, const json& v) {
                        c.ablate.ks.clear();
                        for (const auto& e : as_list("ablate.ks", v)) c.ablate.ks.push_back(as_int("ablate.ks", e));
                      },
                      [](const ExperimentConfig& c) { return json(c.ablate.ks); }};
    return t;
  }();
  return table;
}

void set_key(ExperimentConfig& cfg, const std::string& key, const json& value) {
  const auto it = fields().find(key);
  if (it == fields().end()) throw ValidationError("unknown config key '" + key + "'");
  it->second.set(cfg, value);
}

}  // namespace

void ExperimentConfig::set_seed(std::uint64_t s) {
  seed = s;
  train.seed = s;
  train.view2.seed = s;
  probe.seed = derive_seed(s, kProbeSeedStream);
}

void ExperimentConfig::validate() const {
  train.validate();
  probe.validate();
  if (ablate.schemes.empty() || ablate.modes.empty() || ablate.ks.empty()) {
    throw ValidationError("ablation grid must not be empty");
  }
  for (Index k : ablate.ks) {
    if (k < 1) throw ValidationError("config key 'ablate.ks': k must be >= 1");
  }
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& [k, _] : fields()) out.push_back(k);
  return out;
}

ExperimentConfig parse_config(std::string_view json_text) {
  json j = json::parse(json_text, nullptr, false);
  if (j.is_discarded()) throw ValidationError("config is not valid JSON");
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  ExperimentConfig cfg;
  cfg.set_seed(0);
  // Seed first so that later keys never see a stale derived seed.
  if (j.contains("seed")) set_key(cfg, "seed", j["seed"]);
  for (const auto& [key, value] : j.items()) {
    if (key != "seed") set_key(cfg, key, value);
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void apply_override(ExperimentConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ValidationError("override '" + std::string(assignment) + "' is not of the form key=value");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  set_key(cfg, key, value);
}

std::string to_json(const ExperimentConfig& cfg) {
  json j = json::object();
  for (const auto& [key, field] : fields()) j[key] = field.get(cfg);
  return j.dump(2) + "\n";
}

}  // namespace mlgcl
