#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <sstream>

namespace fibercos::cli {

namespace {

struct Prepared {
  InstanceConfig config;
  RankTolerance tol;
};

Prepared prepare(const InstanceConfig& config, const RunOptions& options) {
  Prepared p{config, {}};
  p.tol = options.tolerances.apply(config.tolerances.apply({}));
  if (p.config.random_instance) {
    p.config.resolve_random_instance(options.seed.value_or(config.seed.value_or(kDefaultSeed)));
  }
  return p;
}

const std::string& need(const std::optional<std::string>& name, const char* role) {
  if (!name) throw ConfigError(std::string("config names no `") + role + "` set");
  return *name;
}

CommandResult guarded(const std::function<CommandResult()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    return {kConfigError, {}, {}, std::string("config error: ") + e.what()};
  } catch (const Error& e) {
    const int code = e.kind() == ErrorKind::NumericalInconsistency ? kNumericalInconsistency : kConfigError;
    return {code, {}, {}, e.what()};
  }
}

const char* flag(bool b) { return b ? "1" : "0"; }

std::string index_list(const FiberIndexSet& idx) {
  if (idx.empty()) return "none";
  std::ostringstream out;
  for (std::size_t k = 0; k < idx.size(); ++k) out << (k ? " " : "") << idx[k];
  return out.str();
}

std::size_t count_if_fibers(const AngleProfile& p, bool FiberAngle::*member) {
  return static_cast<std::size_t>(
      std::count_if(p.fibers.begin(), p.fibers.end(), [&](const FiberAngle& f) { return f.*member; }));
}

void header(std::ostringstream& out, const char* command, const Prepared& p) {
  out << "command: " << command << "\n";
  out << "instance: " << p.config.describe() << "\n";
  out << "tolerances: rank=" << p.tol.relative_threshold << " intersect=" << p.tol.intersect_threshold
      << " close=" << p.tol.close_threshold << "\n";
}

void angle_summary(std::ostringstream& out, const AngleProfile& profile) {
  out << "fibers: " << profile.fibers.size() << " omega: " << count_if_fibers(profile, &FiberAngle::in_omega)
      << " omega_prime: " << count_if_fibers(profile, &FiberAngle::in_omega_prime) << "\n";
  out << "ess_sup_omega: " << format_real(profile.ess_sup_omega) << "\n";
  if (profile.argmax_omega) {
    const auto& f = profile.fibers[*profile.argmax_omega];
    out << "argmax_omega: fiber " << f.index << " x=" << format_real(f.x) << "\n";
  } else {
    out << "argmax_omega: none\n";
  }
  out << "ess_sup_omega_prime: " << format_real(profile.ess_sup_omega_prime) << "\n";
}

// Dense-oracle verdict for a finite-group instance; nullopt for real-line.
std::optional<bool> dense_check(const Prepared& p, const std::string& measuring,
                                const std::vector<std::string>& target_sets) {
  if (p.config.realization != Realization::FiniteGroup) return std::nullopt;
  std::vector<CVector> gens;
  for (const auto& name : target_sets) {
    const auto& v = p.config.set(name).vectors;
    gens.insert(gens.end(), v.begin(), v.end());
  }
  const CMatrix T = sampling_matrix_finite(*p.config.pair, p.config.set(measuring).vectors);
  return dense_injectivity(T, dense_space(*p.config.pair, gens, p.tol), p.tol);
}

}  // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string angle_profile_csv(const AngleProfile& profile) {
  std::ostringstream out;
  out << "fiber_index,x_value,dim_J_A,dim_J_B,angle,in_omega,in_omega_prime\n";
  for (const auto& f : profile.fibers) {
    out << f.index << ',' << format_real(f.x) << ',' << f.dim_a << ',' << f.dim_b << ',' << format_real(f.angle)
        << ',' << flag(f.in_omega) << ',' << flag(f.in_omega_prime) << '\n';
  }
  return out.str();
}

CommandResult run_angle(const InstanceConfig& config, const RunOptions& options) {
  return guarded([&] {
    const Prepared p = prepare(config, options);
    const auto& a = need(p.config.a, "A");
    const auto& b = need(p.config.b, "B");
    const auto profile = ess_sup_angle(p.config.fibered(a), p.config.fibered(b), p.tol);
    std::ostringstream out;
    header(out, "angle", p);
    out << "sets: A=" << a << " (r=" << p.config.set(a).size() << ") B=" << b << " (r=" << p.config.set(b).size()
        << ")\n";
    angle_summary(out, profile);
    return CommandResult{kOk, out.str(), angle_profile_csv(profile), {}};
  });
}

CommandResult run_closedness(const InstanceConfig& config, const RunOptions& options) {
  return guarded([&] {
    const Prepared p = prepare(config, options);
    const auto& a = need(p.config.a, "A");
    const auto& b = need(p.config.b, "B");
    const auto report = closedness_diagnosis(p.config.fibered(a), p.config.fibered(b), p.tol);
    std::ostringstream out;
    header(out, "closedness", p);
    out << "sets: A=" << a << " B=" << b << "\n";
    angle_summary(out, report.profile);
    out << "witness_fibers: " << index_list(report.witnesses) << "\n";
    out << "verdict: " << (report.closed ? "closed" : "not closed") << "\n";
    return CommandResult{kOk, out.str(), angle_profile_csv(report.profile), {}};
  });
}

CommandResult run_frame_bounds(const InstanceConfig& config, const RunOptions& options) {
  return guarded([&] {
    const Prepared p = prepare(config, options);
    std::vector<std::string> names{need(p.config.a, "A")};
    if (p.config.b && *p.config.b != names.front()) names.push_back(*p.config.b);

    std::ostringstream out, csv;
    header(out, "frame-bounds", p);
    csv << "set,fiber_index,x_value,dim,lower,upper\n";
    for (const auto& name : names) {
      const auto set = p.config.fibered(name);
      std::optional<double> lo, hi;
      std::size_t nonzero = 0;
      for (std::size_t j = 0; j < set.size(); ++j) {
        const auto g = gramian(set.fiber(j));
        const auto bounds = fiber_frame_bounds(g, p.tol);
        const std::size_t dim = bounds ? numerical_rank(g.entries, p.tol) : 0;
        csv << name << ',' << j << ',' << format_real(set.grid().coords()[j]) << ',' << dim << ','
            << format_real(bounds ? bounds->lower : 0.0) << ',' << format_real(bounds ? bounds->upper : 0.0)
            << '\n';
        if (!bounds) continue;
        ++nonzero;
        lo = lo ? std::min(*lo, bounds->lower) : bounds->lower;
        hi = hi ? std::max(*hi, bounds->upper) : bounds->upper;
      }
      out << "set " << name << ": r=" << set.generator_count() << " spectrum_fibers=" << nonzero << "/"
          << set.size();
      if (lo) out << " lower=" << format_real(*lo) << " upper=" << format_real(*hi);
      out << "\n";
    }
    return CommandResult{kOk, out.str(), csv.str(), {}};
  });
}

CommandResult run_sampling(const InstanceConfig& config, const RunOptions& options) {
  return guarded([&] {
    const Prepared p = prepare(config, options);
    const auto& m = need(p.config.measuring, "measuring");
    if (p.config.targets.size() != 1) {
      throw ConfigError("sampling needs exactly one target (use `union` for several)");
    }
    const auto& t = p.config.targets.front();
    const auto report = injectivity_check(p.config.fibered(m), p.config.fibered(t), p.tol);

    std::ostringstream out, csv;
    header(out, "sampling", p);
    out << "sets: measuring=" << m << " target=" << t << "\n";
    for (const auto& f : report.failing) {
      out << "failing fiber " << f.index << " x=" << format_real(f.x) << ": mixed_rank=" << f.mixed_rank
          << " dim_target=" << f.dim_target << "\n";
    }
    csv << "fiber_index,x_value,dim_target,mixed_rank,measuring_upper_bound,ok\n";
    for (const auto& f : report.fibers) {
      csv << f.index << ',' << format_real(f.x) << ',' << f.dim_target << ',' << f.mixed_rank << ','
          << format_real(f.measuring_upper_bound) << ',' << flag(f.ok) << '\n';
    }
    if (const auto dense = dense_check(p, m, {t})) {
      out << "dense_oracle: " << (*dense ? "injective" : "not injective") << "\n";
      if (*dense != report.injective) {
        return CommandResult{kNumericalInconsistency, out.str(), csv.str(),
                             "fiberwise and dense injectivity verdicts disagree"};
      }
    }
    out << "verdict: " << (report.injective ? "injective" : "not injective") << "\n";
    return CommandResult{kOk, out.str(), csv.str(), {}};
  });
}

CommandResult run_union(const InstanceConfig& config, const RunOptions& options) {
  return guarded([&] {
    const Prepared p = prepare(config, options);
    const auto& m = need(p.config.measuring, "measuring");
    if (p.config.targets.empty()) throw ConfigError("union needs at least one target");
    std::vector<FiberedGeneratorSet> targets;
    for (const auto& name : p.config.targets) targets.push_back(p.config.fibered(name));
    const auto report = union_injectivity_check(p.config.fibered(m), targets, p.tol);

    std::ostringstream out, csv;
    header(out, "union", p);
    out << "sets: measuring=" << m << " targets=";
    for (std::size_t k = 0; k < p.config.targets.size(); ++k) out << (k ? "," : "") << p.config.targets[k];
    out << "\n";
    csv << "delta,theta,fiber_index,x_value,angle,in_omega_prime,dim_target,mixed_rank,ok\n";
    bool dense_disagrees = false;
    for (const auto& pr : report.pairs) {
      const auto& dn = p.config.targets[pr.delta];
      const auto& tn = p.config.targets[pr.theta];
      out << "pair (" << pr.delta << "," << pr.theta << ") " << dn << "+" << tn
          << ": ess_sup_omega_prime=" << format_real(pr.closedness.ess_sup_omega_prime) << " "
          << (pr.closedness.closed ? "closed" : "not closed") << ", "
          << (pr.injectivity.injective ? "injective" : "not injective");
      if (!pr.injectivity.failing.empty()) {
        FiberIndexSet failing;
        for (const auto& f : pr.injectivity.failing) failing.push_back(f.index);
        out << " (failing fibers " << index_list(failing) << ")";
      }
      const std::vector<std::string> pair_sets =
          pr.delta == pr.theta ? std::vector<std::string>{dn} : std::vector<std::string>{dn, tn};
      if (const auto dense = dense_check(p, m, pair_sets)) {
        out << ", dense " << (*dense ? "injective" : "not injective");
        dense_disagrees = dense_disagrees || *dense != pr.injectivity.injective;
      }
      out << "\n";
      for (std::size_t j = 0; j < pr.injectivity.fibers.size(); ++j) {
        const auto& fa = pr.closedness.profile.fibers[j];
        const auto& fi = pr.injectivity.fibers[j];
        csv << pr.delta << ',' << pr.theta << ',' << j << ',' << format_real(fa.x) << ',' << format_real(fa.angle)
            << ',' << flag(fa.in_omega_prime) << ',' << fi.dim_target << ',' << fi.mixed_rank << ','
            << flag(fi.ok) << '\n';
      }
    }
    if (!report.hypothesis_violations.empty()) {
      out << "hypothesis_violations:";
      for (const auto& [d, t] : report.hypothesis_violations) {
        out << " (" << d << "," << t << ")=" << p.config.targets[d] << "+" << p.config.targets[t];
      }
      out << "\n";
    }
    switch (report.verdict) {
      case UnionVerdict::Injective: out << "verdict: injective\n"; break;
      case UnionVerdict::NotInjective: out << "verdict: not injective\n"; break;
      case UnionVerdict::Inapplicable: out << "verdict: inapplicable\n"; break;
    }
    if (dense_disagrees) {
      return CommandResult{kNumericalInconsistency, out.str(), csv.str(),
                           "fiberwise and dense injectivity verdicts disagree"};
    }
    return CommandResult{kOk, out.str(), csv.str(), {}};
  });
}

CommandResult run_crosscheck(const CrosscheckOptions& options) {
  return guarded([&] {
    if (options.min_order < 1 || options.min_order > options.max_order || options.max_generators < 1) {
      throw ConfigError("crosscheck needs 1 <= min-order <= max-order and max-generators >= 1");
    }
    options.tol.validate();
    const auto summary = crosscheck_suite(options);
    std::ostringstream out, csv;
    out << "command: crosscheck\n";
    out << "seed: " << options.seed << "\n";
    out << "angle_instances: " << options.angle_instances << "\n";
    out << "injectivity_instances: " << options.injectivity_instances << "\n";
    out << "max_angle_deviation: " << format_real(summary.max_angle_deviation) << " (limit "
        << options.angle_tolerance << ")\n";
    out << "max_route_deviation: " << format_real(summary.max_route_deviation) << " (limit "
        << options.route_tolerance << ")\n";
    out << "injectivity_disagreements: " << summary.injectivity_disagreements << "\n";
    out << "failures: " << summary.failures.size() << "\n";
    const std::size_t shown = std::min<std::size_t>(summary.failures.size(), 20);
    for (std::size_t k = 0; k < shown; ++k) out << "  " << summary.failures[k] << "\n";
    if (shown < summary.failures.size()) out << "  ... " << summary.failures.size() - shown << " more\n";
    out << "status: " << (summary.passed() ? "PASS" : "FAIL") << "\n";

    csv << "family,index,kind,N,M,r_first,r_second,fiber_value,dense_value,deviation,route_deviation\n";
    for (const auto& r : summary.angle_records) {
      csv << "angle," << r.index << ',' << r.kind << ',' << r.N << ',' << r.M << ',' << r.r_a << ',' << r.r_b << ','
          << format_real(r.fiber_angle) << ',' << format_real(r.dense_angle) << ',' << format_real(r.deviation)
          << ',' << format_real(r.route_deviation) << '\n';
    }
    for (const auto& r : summary.injectivity_records) {
      csv << "injectivity," << r.index << ',' << r.kind << ',' << r.N << ',' << r.M << ',' << r.r_measuring << ','
          << r.r_target << ',' << flag(r.fiber_injective) << ',' << flag(r.dense_injective) << ','
          << (r.fiber_injective == r.dense_injective ? "0" : "1") << ",0\n";
    }
    return CommandResult{summary.passed() ? kOk : kAcceptanceFailure, out.str(), csv.str(),
                         summary.passed() ? std::string{} : "crosscheck failed"};
  });
}

}  // namespace fibercos::cli
