//
// Copyright 2026 The NeuGuard Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//


#include "neuguard/harness/config.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace neuguard::harness {
namespace {

using nlohmann::json;

// A JSON object whose keys must all be consumed.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(Name() + " must be an object");
  }

  bool Has(std::string_view key) const { return j_.contains(std::string(key)); }

  const json& Require(std::string_view key) {
    used_.insert(std::string(key));
    if (!Has(key)) throw ConfigError("missing required field " + Field(key));
    return j_.at(std::string(key));
  }
  const json* Optional(std::string_view key) {
    used_.insert(std::string(key));
    return Has(key) ? &j_.at(std::string(key)) : nullptr;
  }

  std::uint64_t Seed(std::string_view key) {
    const json& v = Require(key);
    if (!v.is_number_unsigned()) {
      throw ConfigError(Field(key) + " must be a nonnegative integer");
    }
    return v.get<std::uint64_t>();
  }
  int Int(std::string_view key, std::optional<int> fallback = std::nullopt) {
    const json* v = fallback ? Optional(key) : &Require(key);
    if (v == nullptr) return *fallback;
    if (!v->is_number_integer()) throw ConfigError(Field(key) + " must be an integer");
    return v->get<int>();
  }
  double Real(std::string_view key, std::optional<double> fallback = std::nullopt) {
    const json* v = fallback ? Optional(key) : &Require(key);
    if (v == nullptr) return *fallback;
    if (!v->is_number()) throw ConfigError(Field(key) + " must be a number");
    return v->get<double>();
  }
  bool Bool(std::string_view key, bool fallback) {
    const json* v = Optional(key);
    if (v == nullptr) return fallback;
    if (!v->is_boolean()) throw ConfigError(Field(key) + " must be a boolean");
    return v->get<bool>();
  }
  std::string String(std::string_view key,
                     std::optional<std::string> fallback = std::nullopt) {
    const json* v = fallback ? Optional(key) : &Require(key);
    if (v == nullptr) return *fallback;
    if (!v->is_string()) throw ConfigError(Field(key) + " must be a string");
    return v->get<std::string>();
  }
  std::vector<int> IntList(std::string_view key, std::vector<int> fallback) {
    const json* v = Optional(key);
    if (v == nullptr) return fallback;
    if (!v->is_array()) throw ConfigError(Field(key) + " must be an array of integers");
    std::vector<int> out;
    for (const json& e : *v) {
      if (!e.is_number_integer()) {
        throw ConfigError(Field(key) + " must be an array of integers");
      }
      out.push_back(e.get<int>());
    }
    return out;
  }
  Section Child(std::string_view key) { return Section(Require(key), Field(key)); }
  std::optional<Section> OptionalChild(std::string_view key) {
    const json* v = Optional(key);
    if (v == nullptr) return std::nullopt;
    return Section(*v, Field(key));
  }

  // Rejects keys nobody asked for.
  void Finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!used_.count(key)) throw ConfigError("unknown key " + Field(key));
    }
  }

  std::string Field(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

 private:
  std::string Name() const { return path_.empty() ? "config" : path_; }

  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

void RequirePositive(int value, const std::string& field) {
  if (value <= 0) throw ConfigError(field + " must be positive");
}

std::set<int> DecaySet(Section& s, std::set<int> fallback) {
  const std::vector<int> list =
      s.IntList("decay_epochs", std::vector<int>(fallback.begin(), fallback.end()));
  for (int e : list) {
    if (e < 0) throw ConfigError(s.Field("decay_epochs") + " entries must be >= 0");
  }
  return std::set<int>(list.begin(), list.end());
}

void ParseDecayFactor(Section& s, double& factor) {
  factor = s.Real("decay_factor", factor);
  if (!(factor > 0.0 && factor <= 1.0)) {
    throw ConfigError(s.Field("decay_factor") + " must be in (0, 1]");
  }
}

void ParseAttackTraining(Section& s, attacks::AttackTrainConfig& c, bool nsh) {
  c.epochs = s.Int("epochs", c.epochs);
  if (c.epochs < 0) throw ConfigError(s.Field("epochs") + " must be >= 0");
  c.batch_size = s.Int("batch_size", c.batch_size);
  RequirePositive(c.batch_size, s.Field("batch_size"));
  c.learning_rate = s.Real("learning_rate", c.learning_rate);
  if (!(c.learning_rate > 0.0)) throw ConfigError(s.Field("learning_rate") + " must be positive");
  c.decay_epochs = DecaySet(s, c.decay_epochs);
  ParseDecayFactor(s, c.decay_factor);
  auto widths = [&](std::string_view key, std::vector<int>& w) {
    w = s.IntList(key, w);
    for (int x : w) RequirePositive(x, s.Field(key));
  };
  if (nsh) {
    widths("encoder_widths", c.encoder_widths);
    if (c.encoder_widths.empty()) throw ConfigError(s.Field("encoder_widths") + " is empty");
    widths("combiner_hidden", c.combiner_hidden);
  } else {
    widths("hidden", c.sorted_hidden);
  }
  s.Finish();
}

void ParseDataset(Section s, DatasetSection& d, const std::filesystem::path& base) {
  const std::string kind = s.String("kind");
  d.standardize = s.Bool("standardize", true);
  if (kind == "synthetic") {
    d.kind = DatasetKind::kSynthetic;
    auto& g = d.synthetic;
    g.num_classes = s.Int("num_classes", g.num_classes);
    g.dim = s.Int("dim", g.dim);
    g.per_class_train = s.Int("per_class_train", g.per_class_train);
    g.per_class_test = s.Int("per_class_test", g.per_class_test);
    g.cluster_spread = s.Real("cluster_spread", g.cluster_spread);
    if (g.num_classes < 2) throw ConfigError(s.Field("num_classes") + " must be >= 2");
    RequirePositive(g.dim, s.Field("dim"));
    RequirePositive(g.per_class_train, s.Field("per_class_train"));
    RequirePositive(g.per_class_test, s.Field("per_class_test"));
    if (!(g.cluster_spread >= 0.0)) {
      throw ConfigError(s.Field("cluster_spread") + " must be >= 0");
    }
  } else if (kind == "csv") {
    d.kind = DatasetKind::kCsv;
    std::filesystem::path p = s.String("path");
    if (p.is_relative()) p = base / p;
    if (!std::filesystem::is_regular_file(p)) {
      throw ConfigError(s.Field("path") + ": file not found: " + p.string());
    }
    d.csv_path = p;
  } else {
    throw ConfigError(s.Field("kind") + " must be \"synthetic\" or \"csv\"");
  }
  s.Finish();
}

void ParseSplits(Section s, data::SplitConfig& c) {
  auto count = [&](std::string_view key) -> std::size_t {
    const int v = s.Int(key);
    if (v < 0) throw ConfigError(s.Field(key) + " must be >= 0");
    return static_cast<std::size_t>(v);
  };
  if (s.Has("train_size")) c.train_size = count("train_size");
  if (s.Has("test_size")) c.test_size = count("test_size");
  c.known_members = count("known_members");
  c.known_nonmembers = count("known_nonmembers");
  c.eval_members = count("eval_members");
  c.eval_nonmembers = count("eval_nonmembers");
  s.Finish();
}

void ParseModel(Section s, std::vector<LayerSection>& layers) {
  const json& arr = s.Require("layers");
  if (!arr.is_array() || arr.empty()) {
    throw ConfigError(s.Field("layers") + " must be a nonempty array");
  }
  for (std::size_t i = 0; i < arr.size(); ++i) {
    Section l(arr[i], s.Field("layers") + "[" + std::to_string(i) + "]");
    LayerSection layer;
    layer.width = l.Int("width");
    RequirePositive(layer.width, l.Field("width"));
    try {
      layer.activation = nn::ParseActivation(l.String("activation"));
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(l.Field("activation") + ": " + e.what());
    }
    l.Finish();
    layers.push_back(layer);
  }
  for (std::size_t i = 0; i + 1 < layers.size(); ++i) {
    if (layers[i].activation == nn::Activation::kSoftmax) {
      throw ConfigError(s.Field("layers") + ": softmax only allowed on the last layer");
    }
  }
  if (layers.back().activation != nn::Activation::kSoftmax) {
    throw ConfigError(s.Field("layers") + ": last layer must be softmax");
  }
  s.Finish();
}

void ParseTrain(Section s, TrainSection& t) {
  t.epochs = s.Int("epochs");
  if (t.epochs < 0) throw ConfigError(s.Field("epochs") + " must be >= 0");
  t.batch_size = s.Int("batch_size", t.batch_size);
  RequirePositive(t.batch_size, s.Field("batch_size"));
  const std::string opt = s.String("optimizer", std::string("adam"));
  if (opt == "adam") {
    t.optimizer.kind = nn::OptimizerKind::kAdam;
  } else if (opt == "sgd") {
    t.optimizer.kind = nn::OptimizerKind::kSGD;
  } else {
    throw ConfigError(s.Field("optimizer") + " must be \"adam\" or \"sgd\"");
  }
  t.optimizer.learning_rate = s.Real("learning_rate", t.optimizer.learning_rate);
  if (!(t.optimizer.learning_rate > 0.0)) {
    throw ConfigError(s.Field("learning_rate") + " must be positive");
  }
  t.optimizer.decay_epochs = DecaySet(s, {});
  ParseDecayFactor(s, t.optimizer.decay_factor);
  s.Finish();
}

void ParseDefense(Section s, DefenseSection& d) {
  const std::string kind = s.String("kind");
  if (kind == "none") {
    d.kind = DefenseKind::kNone;
  } else if (kind == "early_stop") {
    d.kind = DefenseKind::kEarlyStop;
    d.early_stop_epochs = s.Int("epochs");
    RequirePositive(d.early_stop_epochs, s.Field("epochs"));
  } else if (kind == "neuguard") {
    d.kind = DefenseKind::kNeuGuard;
    auto& r = d.neuguard;
    r.alpha = s.Real("alpha");
    r.beta = s.Real("beta");
    try {
      r.variance_mode = reg::ParseVarianceMode(
          s.String("variance_mode", std::string("class_wise")));
    } catch (const Error& e) {
      throw ConfigError(s.Field("variance_mode") + ": " + e.what());
    }
    r.amp_train_fraction = s.Real("amp_train_fraction", 0.0);
    r.amp_infer_fraction = s.Real("amp_infer_fraction", 0.0);
    r.amp_factor = s.Real("amp_factor", 1.0);
    r.reset_tracker_each_epoch = s.Bool("reset_tracker_each_epoch", false);
    try {
      r.Validate();
    } catch (const Error& e) {
      throw ConfigError(std::string("defense: ") + e.what());
    }
  } else {
    throw ConfigError(s.Field("kind") +
                      " must be \"none\", \"early_stop\" or \"neuguard\"");
  }
  s.Finish();
}

void ParseAttacks(Section s, AttacksSection& a) {
  if (const json* list = s.Optional("enabled")) {
    if (!list->is_array()) throw ConfigError(s.Field("enabled") + " must be an array");
    for (const json& e : *list) {
      const std::string name = e.is_string() ? e.get<std::string>() : "";
      if (std::find(std::begin(kAttackNames), std::end(kAttackNames), name) ==
          std::end(kAttackNames)) {
        throw ConfigError(s.Field("enabled") + ": unknown attack '" + e.dump() + "'");
      }
      a.enabled.insert(name);
    }
  } else {
    a.enabled.insert(std::begin(kAttackNames), std::end(kAttackNames));
  }
  if (auto c = s.OptionalChild("sorted_nn")) ParseAttackTraining(*c, a.sorted_nn, false);
  if (auto c = s.OptionalChild("unsorted_nsh")) ParseAttackTraining(*c, a.unsorted_nsh, true);
  if (auto c = s.OptionalChild("label_only")) {
    auto& b = a.label_only;
    b.max_steps = c->Int("max_steps", b.max_steps);
    b.initial_step = c->Real("initial_step", b.initial_step);
    b.step_growth = c->Real("step_growth", b.step_growth);
    b.max_radius = c->Real("max_radius", b.max_radius);
    b.bisection_steps = c->Int("bisection_steps", b.bisection_steps);
    if (b.max_steps < 0 || !(b.initial_step > 0.0) || !(b.step_growth >= 1.0) ||
        !(b.max_radius > 0.0) || b.bisection_steps < 0) {
      throw ConfigError("attacks.label_only has out-of-range values");
    }
    c->Finish();
  }
  s.Finish();
}

}  // namespace

int ExperimentConfig::effective_epochs() const {
  return defense.kind == DefenseKind::kEarlyStop ? defense.early_stop_epochs
                                                 : train.epochs;
}

std::string_view DefenseName(DefenseKind kind) {
  switch (kind) {
    case DefenseKind::kNone: return "none";
    case DefenseKind::kEarlyStop: return "early_stop";
    case DefenseKind::kNeuGuard: return "neuguard";
  }
  return "unknown";
}

ExperimentConfig ParseExperimentConfig(std::string_view json_text,
                                       const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  Section s(root, "");
  ExperimentConfig c;
  c.name = s.String("name", std::string("experiment"));
  {
    Section seeds = s.Child("seeds");
    c.seeds.data = seeds.Seed("data");
    c.seeds.model = seeds.Seed("model");
    c.seeds.split = seeds.Seed("split");
    c.seeds.attack = seeds.Seed("attack");
    seeds.Finish();
  }
  ParseDataset(s.Child("dataset"), c.dataset, base_dir);
  ParseSplits(s.Child("splits"), c.splits);
  ParseModel(s.Child("model"), c.layers);
  ParseTrain(s.Child("train"), c.train);
  if (auto d = s.OptionalChild("defense")) ParseDefense(*d, c.defense);
  if (auto a = s.OptionalChild("attacks")) {
    ParseAttacks(*a, c.attacks);
  } else {
    c.attacks.enabled.insert(std::begin(kAttackNames), std::end(kAttackNames));
  }
  std::filesystem::path out = "runs/" + c.name;
  if (auto r = s.OptionalChild("report")) {
    out = r->String("output_dir", out.string());
    c.report.histogram_bins = r->Int("histogram_bins", c.report.histogram_bins);
    RequirePositive(c.report.histogram_bins, r->Field("histogram_bins"));
    r->Finish();
  }
  c.report.output_dir = out.is_relative() ? base_dir / out : out;
  s.Finish();

  if (c.dataset.kind == DatasetKind::kSynthetic &&
      c.layers.back().width != c.dataset.synthetic.num_classes) {
    throw ConfigError("model.layers: last layer width must equal dataset.num_classes");
  }
  c.attacks.sorted_nn.seed = c.seeds.attack;
  c.attacks.unsorted_nsh.seed = c.seeds.attack;
  c.attacks.label_only.seed = c.seeds.attack;
  return c;
}

ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  const std::filesystem::path base =
      std::filesystem::absolute(path).parent_path();
  return ParseExperimentConfig(text.str(), base);
}

}  // namespace neuguard::harness
