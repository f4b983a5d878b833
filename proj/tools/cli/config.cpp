#include "config.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace fibercos::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) fail(where, std::string("missing key `") + key + "`");
  return obj.at(key);
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number, got " + v.dump());
  return v.get<double>();
}

std::size_t count(const json& v, const std::string& where) {
  if (!v.is_number_integer() || v.get<long long>() < 0) fail(where, "expected a non-negative integer");
  return v.get<std::size_t>();
}

double number_or(const json& obj, const char* key, double fallback, const std::string& where) {
  return obj.contains(key) ? number(obj.at(key), where + "." + key) : fallback;
}

// A complex number is either a real number or a two-element [re, im] array.
Complex complex_value(const json& v, const std::string& where) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  fail(where, "expected a number or [re, im], got " + v.dump());
}

std::string type_of(const json& spec, const std::string& where) {
  const json& t = require(spec, "type", where);
  if (!t.is_string()) fail(where, "`type` must be a string");
  return t.get<std::string>();
}

CVector finite_generator(const json& spec, std::size_t N, const std::string& where) {
  CVector v = CVector::Zero(static_cast<Eigen::Index>(N));
  if (spec.is_array()) {
    if (spec.size() != N) {
      fail(where, "inline vector has " + std::to_string(spec.size()) + " entries, group order is " +
                      std::to_string(N));
    }
    for (std::size_t k = 0; k < N; ++k) {
      v(static_cast<Eigen::Index>(k)) = complex_value(spec[k], where + "[" + std::to_string(k) + "]");
    }
    return v;
  }
  const auto add_delta = [&](const json& index, Complex c, const std::string& at) {
    const std::size_t k = count(index, at);
    if (k >= N) fail(at, "delta index " + std::to_string(k) + " outside Z_" + std::to_string(N));
    v(static_cast<Eigen::Index>(k)) += c;
  };
  const std::string type = type_of(spec, where);
  if (type == "delta") {
    const Complex c = spec.contains("coefficient") ? complex_value(spec.at("coefficient"), where) : Complex(1.0);
    add_delta(require(spec, "index", where), c, where + ".index");
  } else if (type == "deltas") {
    const json& terms = require(spec, "terms", where);
    if (!terms.is_array() || terms.empty()) fail(where, "`terms` must be a non-empty array of [index, coefficient]");
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const std::string at = where + ".terms[" + std::to_string(i) + "]";
      if (!terms[i].is_array() || terms[i].size() != 2) fail(at, "expected [index, coefficient]");
      add_delta(terms[i][0], complex_value(terms[i][1], at), at);
    }
  } else {
    fail(where, "unknown finite-group generator type `" + type + "`");
  }
  return v;
}

FourierProfile profile(const json& spec, const std::filesystem::path& base_dir, const std::string& where) {
  const std::string type = type_of(spec, where);
  try {
    if (type == "gaussian") return FourierProfile::gaussian(number_or(spec, "a", 1.0, where));
    if (type == "bspline") return FourierProfile::bspline(static_cast<int>(count(require(spec, "p", where), where + ".p")));
    if (type == "bandlimit") {
      return FourierProfile::bandlimit(number(require(spec, "c", where), where + ".c"),
                                       number(require(spec, "d", where), where + ".d"));
    }
    if (type == "delta") return FourierProfile::delta(number_or(spec, "t", 0.0, where));
    if (type == "windowed-cosine") {
      return FourierProfile::windowed_cosine(number(require(spec, "c", where), where + ".c"),
                                             number(require(spec, "d", where), where + ".d"),
                                             number_or(spec, "phase", 0.0, where),
                                             number(require(spec, "rate", where), where + ".rate"));
    }
    if (type == "sum") {
      const json& terms = require(spec, "terms", where);
      if (!terms.is_array()) fail(where, "`terms` must be an array");
      std::vector<std::pair<Complex, FourierProfile>> parts;
      for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string at = where + ".terms[" + std::to_string(i) + "]";
        const Complex c = terms[i].contains("coefficient") ? complex_value(terms[i].at("coefficient"), at)
                                                           : Complex(1.0);
        parts.emplace_back(c, profile(require(terms[i], "profile", at), base_dir, at + ".profile"));
      }
      return FourierProfile::sum(std::move(parts));
    }
    if (type == "custom-table") {
      if (spec.contains("path")) {
        const json& p = spec.at("path");
        if (!p.is_string()) fail(where, "`path` must be a string");
        std::filesystem::path path = p.get<std::string>();
        if (path.is_relative()) path = base_dir / path;
        return FourierProfile::load_custom_table(path);
      }
      const json& table = require(spec, "table", where);
      if (!table.is_array()) fail(where, "`table` must be an array of [xi, value]");
      std::vector<std::pair<double, Complex>> rows;
      for (std::size_t i = 0; i < table.size(); ++i) {
        const std::string at = where + ".table[" + std::to_string(i) + "]";
        if (!table[i].is_array() || table[i].size() != 2) fail(at, "expected [xi, value]");
        rows.emplace_back(number(table[i][0], at), complex_value(table[i][1], at));
      }
      return FourierProfile::custom_table(std::move(rows));
    }
  } catch (const Error& e) {
    fail(where, e.what());
  }
  fail(where, "unknown profile type `" + type + "`");
}

std::optional<std::string> role(const json& roles, const char* key) {
  if (!roles.contains(key)) return std::nullopt;
  const json& v = roles.at(key);
  if (!v.is_string()) fail(std::string("roles.") + key, "expected a set name");
  return v.get<std::string>();
}

}  // namespace

RankTolerance ToleranceOverrides::apply(RankTolerance base) const {
  if (rank) base.relative_threshold = *rank;
  if (intersect) base.intersect_threshold = *intersect;
  if (close) base.close_threshold = *close;
  try {
    base.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("tolerances: ") + e.what());
  }
  return base;
}

const SetSpec& InstanceConfig::set(const std::string& name) const {
  const auto it = sets.find(name);
  if (it == sets.end()) throw ConfigError("roles: unknown set `" + name + "`");
  return it->second;
}

FiberedGeneratorSet InstanceConfig::fibered(const std::string& name) const {
  const SetSpec& s = set(name);
  if (realization == Realization::FiniteGroup) {
    if (!pair) throw ConfigError("finite-group config has no group");
    return fiberize_group(s.vectors, *pair);
  }
  return fiberize_real_line(s.profiles, grid_size, truncation, grid_rule);
}

void InstanceConfig::resolve_random_instance(std::uint64_t use_seed) {
  if (!random_instance) return;
  const auto& spec = *random_instance;
  RandomInstance inst;
  try {
    inst = make_random_instance(use_seed, spec.family, spec.index, spec.min_order, spec.max_order,
                                spec.max_generators);
  } catch (const Error& e) {
    throw ConfigError(std::string("random_instance: ") + e.what());
  }
  seed = use_seed;
  pair = inst.pair;
  if (spec.family == InstanceFamily::Angle) {
    sets["A"] = SetSpec{inst.first, {}};
    sets["B"] = SetSpec{inst.second, {}};
    if (!a) a = "A";
    if (!b) b = "B";
  } else {
    sets["measuring"] = SetSpec{inst.first, {}};
    sets["target"] = SetSpec{inst.second, {}};
    if (!measuring) measuring = "measuring";
    if (targets.empty()) targets = {"target"};
  }
}

std::string InstanceConfig::describe() const {
  std::ostringstream out;
  if (realization == Realization::FiniteGroup) {
    out << "finite-group";
    if (pair) out << " N=" << pair->group_order() << " M=" << pair->coset_count() << " L=" << pair->subgroup_order();
    if (random_instance) {
      out << " random-instance family="
          << (random_instance->family == InstanceFamily::Angle ? "angle" : "injectivity")
          << " index=" << random_instance->index;
      if (seed) out << " seed=" << *seed;
    }
  } else {
    out << "real-line n=" << grid_size << " K=" << truncation
        << " grid=" << (grid_rule == GridRule::Midpoint ? "midpoint" : "left");
  }
  return out.str();
}

InstanceConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("config", "top level must be an object");

  InstanceConfig cfg;
  const json& real = require(doc, "realization", "config");
  if (!real.is_string()) fail("realization", "expected a string");
  const std::string realization = real.get<std::string>();
  if (realization == "finite-group") {
    cfg.realization = Realization::FiniteGroup;
  } else if (realization == "real-line") {
    cfg.realization = Realization::RealLine;
  } else {
    fail("realization", "expected `finite-group` or `real-line`, got `" + realization + "`");
  }

  if (doc.contains("seed")) cfg.seed = count(doc.at("seed"), "seed");

  if (doc.contains("tolerances")) {
    const json& t = doc.at("tolerances");
    if (!t.is_object()) fail("tolerances", "expected an object");
    if (t.contains("rank")) cfg.tolerances.rank = number(t.at("rank"), "tolerances.rank");
    if (t.contains("intersect")) cfg.tolerances.intersect = number(t.at("intersect"), "tolerances.intersect");
    if (t.contains("close")) cfg.tolerances.close = number(t.at("close"), "tolerances.close");
    cfg.tolerances.apply({});
  }

  if (cfg.realization == Realization::FiniteGroup) {
    if (doc.contains("random_instance")) {
      const json& r = doc.at("random_instance");
      RandomInstanceSpec spec;
      if (r.contains("family")) {
        const std::string fam = r.at("family").is_string() ? r.at("family").get<std::string>() : "";
        if (fam == "angle") spec.family = InstanceFamily::Angle;
        else if (fam == "injectivity") spec.family = InstanceFamily::Injectivity;
        else fail("random_instance.family", "expected `angle` or `injectivity`");
      }
      spec.index = count(require(r, "index", "random_instance"), "random_instance.index");
      if (r.contains("min_order")) spec.min_order = count(r.at("min_order"), "random_instance.min_order");
      if (r.contains("max_order")) spec.max_order = count(r.at("max_order"), "random_instance.max_order");
      if (r.contains("max_generators")) {
        spec.max_generators = count(r.at("max_generators"), "random_instance.max_generators");
      }
      if (spec.min_order < 1 || spec.min_order > spec.max_order || spec.max_generators < 1 ||
          spec.max_generators > kMaxGeneratorsPerSet) {
        fail("random_instance", "need 1 <= min_order <= max_order and 1 <= max_generators <= " +
                                    std::to_string(kMaxGeneratorsPerSet));
      }
      cfg.random_instance = spec;
    } else {
      const json& g = require(doc, "group", "config");
      try {
        cfg.pair = FiniteGroupPair(count(require(g, "N", "group"), "group.N"),
                                   count(require(g, "M", "group"), "group.M"));
      } catch (const Error& e) {
        fail("group", e.what());
      }
    }
  } else {
    cfg.grid_size = count(require(doc, "grid_size", "config"), "grid_size");
    if (cfg.grid_size == 0) fail("grid_size", "must be at least 1");
    if (doc.contains("truncation")) cfg.truncation = count(doc.at("truncation"), "truncation");
    if (doc.contains("grid")) {
      const json& g = doc.at("grid");
      const std::string rule = g.is_string() ? g.get<std::string>() : "";
      if (rule == "midpoint") cfg.grid_rule = GridRule::Midpoint;
      else if (rule == "left") cfg.grid_rule = GridRule::LeftEndpoint;
      else fail("grid", "expected `midpoint` or `left`");
    }
  }

  if (doc.contains("sets")) {
    const json& sets = doc.at("sets");
    if (!sets.is_object()) fail("sets", "expected an object of named generator lists");
    for (const auto& [name, list] : sets.items()) {
      const std::string where = "sets." + name;
      if (!list.is_array() || list.empty()) fail(where, "expected a non-empty array of generators");
      if (list.size() > kMaxGeneratorsPerSet) {
        fail(where, "at most " + std::to_string(kMaxGeneratorsPerSet) + " generators per set");
      }
      SetSpec spec;
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string at = where + "[" + std::to_string(i) + "]";
        if (cfg.realization == Realization::FiniteGroup) {
          if (!cfg.pair) fail(at, "explicit sets need a `group` (not available with random_instance)");
          spec.vectors.push_back(finite_generator(list[i], cfg.pair->group_order(), at));
        } else {
          spec.profiles.push_back(profile(list[i], base_dir, at));
        }
      }
      cfg.sets.emplace(name, std::move(spec));
    }
  } else if (!cfg.random_instance) {
    fail("config", "missing key `sets`");
  }

  const json roles = doc.contains("roles") ? doc.at("roles") : json::object();
  if (!roles.is_object()) fail("roles", "expected an object");
  // Without explicit roles, sets named A, B and measuring take those roles.
  const auto pick = [&](const char* key) -> std::optional<std::string> {
    if (auto r = role(roles, key)) return r;
    if (cfg.sets.count(key)) return std::string(key);
    return std::nullopt;
  };
  cfg.a = pick("A");
  cfg.b = pick("B");
  cfg.measuring = pick("measuring");
  if (roles.contains("targets")) {
    const json& t = roles.at("targets");
    if (!t.is_array()) fail("roles.targets", "expected an array of set names");
    if (t.size() > kMaxTargets) fail("roles.targets", "at most " + std::to_string(kMaxTargets) + " targets");
    for (const auto& name : t) {
      if (!name.is_string()) fail("roles.targets", "expected set names");
      cfg.targets.push_back(name.get<std::string>());
    }
  }
  if (!cfg.random_instance) {
    for (const auto* name : {&cfg.a, &cfg.b, &cfg.measuring}) {
      if (*name) cfg.set(**name);
    }
    for (const auto& name : cfg.targets) cfg.set(name);
  }
  return cfg;
}

InstanceConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path());
}

}  // namespace fibercos::cli
