#include "hydrolat/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hydrolat/svg.hpp"

namespace hydrolat {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  std::size_t b = s.find_last_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

double parse_double(const std::string& v, const std::string& path) {
  try {
    std::size_t used = 0;
    double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (...) {
    throw ValidationError("config: " + path + ": not a number: '" + v + "'");
  }
}

int parse_int(const std::string& v, const std::string& path) {
  double x = parse_double(v, path);
  if (x != std::floor(x)) throw ValidationError("config: " + path + ": not an integer");
  return static_cast<int>(x);
}

bool parse_bool(const std::string& v, const std::string& path) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ValidationError("config: " + path + ": not a boolean");
}

std::vector<double> parse_list(const std::string& v, const std::string& path) {
  std::vector<double> out;
  for (const std::string& p : split(v, ','))
    if (!p.empty()) out.push_back(parse_double(p, path));
  if (out.empty()) throw ValidationError("config: " + path + ": empty list");
  return out;
}

RVec parse_vector(const std::string& v, const std::string& path) {
  std::vector<std::string> parts = split(v, ';');
  RVec out(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) out[i] = parse_double(parts[i], path);
  return out;
}

ExperimentKind parse_kind(const std::string& v) {
  if (v == "euler") return ExperimentKind::Euler;
  if (v == "ns") return ExperimentKind::NavierStokes;
  if (v == "higher-k") return ExperimentKind::HigherK;
  if (v == "halfspace-euler") return ExperimentKind::HalfspaceEuler;
  if (v == "halfspace-ns") return ExperimentKind::HalfspaceNs;
  if (v == "wigner") return ExperimentKind::Wigner;
  if (v == "conservation") return ExperimentKind::Conservation;
  if (v == "conditions") return ExperimentKind::Conditions;
  throw ValidationError("config: [experiment].kind: unknown kind '" + v + "'");
}

std::string join_coords(const RVec& v) {
  std::string out;
  for (int i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += format_double(v[i]);
  }
  return out;
}

std::string join_coords(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(v[i]);
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  cfg.raw_text = text;
  cfg.r = RVec::Zero(1);
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  bool saw_r = false;
  while (std::getline(is, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ValidationError("config: line " + std::to_string(lineno) + ": bad section header");
      section = line.substr(1, line.size() - 2);
      if (section != "model" && section != "profile" && section != "experiment" &&
          section != "output")
        throw ValidationError("config: unknown section [" + section + "]");
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config: line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    std::string path = "[" + section + "]." + key;

    if (section == "model") {
      if (key == "family") cfg.family = val;
      else if (key == "d") cfg.d = parse_int(val, path);
      else if (key == "n") cfg.n = parse_int(val, path);
      else if (key == "gamma") cfg.gamma = parse_list(val, path);
      else if (key == "m") cfg.mass = parse_list(val, path);
      else throw ValidationError("config: unknown key " + path);
    } else if (section == "profile") {
      if (key == "T") cfg.t_family = val;
      else if (key == "c") cfg.t_const = parse_double(val, path);
      else if (key == "a") cfg.bump_a = parse_double(val, path);
      else if (key == "w") cfg.bump_w = parse_double(val, path);
      else if (key == "q0") cfg.q0_source = val;
      else if (key == "T0") cfg.gibbs_T0 = parse_double(val, path);
      else throw ValidationError("config: unknown key " + path);
    } else if (section == "experiment") {
      if (key == "kind") cfg.kind = parse_kind(val);
      else if (key == "tau") cfg.tau = parse_double(val, path);
      else if (key == "r") { cfg.r = parse_vector(val, path); saw_r = true; }
      else if (key == "kappa") cfg.kappa = parse_double(val, path);
      else if (key == "eps") cfg.eps_list = parse_list(val, path);
      else if (key == "offsets") cfg.offsets = parse_int(val, path);
      else if (key == "theta_samples") cfg.theta_samples = parse_int(val, path);
      else if (key == "mgrid") cfg.mgrid = parse_int(val, path);
      else if (key == "k") cfg.higher_k = parse_int(val, path);
      else if (key == "nsamples") cfg.nsamples = parse_int(val, path);
      else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_double(val, path));
      else if (key == "min_box") cfg.min_box = parse_int(val, path);
      else if (key == "tolerance") cfg.tolerance = parse_double(val, path);
      else if (key == "override_conditions") cfg.override_conditions = parse_bool(val, path);
      else if (key == "r_samples") cfg.r_samples = parse_int(val, path);
      else if (key == "r_span") cfg.r_span = parse_double(val, path);
      else if (key == "y_max") cfg.y_max = parse_int(val, path);
      else if (key == "jobs") cfg.jobs = parse_int(val, path);
      else throw ValidationError("config: unknown key " + path);
    } else if (section == "output") {
      if (key == "dir") cfg.out_dir = val;
      else if (key == "formats") {
        cfg.want_csv = false;
        cfg.want_svg = false;
        for (const auto& f : split(val, ',')) {
          if (f == "csv") cfg.want_csv = true;
          else if (f == "svg") cfg.want_svg = true;
          else throw ValidationError("config: [output].formats: unknown format '" + f + "'");
        }
      } else {
        throw ValidationError("config: unknown key " + path);
      }
    } else {
      throw ValidationError("config: key outside any section at line " + std::to_string(lineno));
    }
  }

  // shape and invariant checks
  if (cfg.family != "nearest_neighbor")
    throw ValidationError("config: [model].family: only 'nearest_neighbor' is supported");
  if (static_cast<int>(cfg.gamma.size()) != cfg.n || static_cast<int>(cfg.mass.size()) != cfg.n)
    throw ValidationError("config: [model].gamma/m: need exactly n entries");
  if (!saw_r) cfg.r = RVec::Zero(cfg.d);
  if (cfg.r.size() != cfg.d) throw ValidationError("config: [experiment].r: needs d coordinates");
  for (std::size_t i = 1; i < cfg.eps_list.size(); ++i)
    if (cfg.eps_list[i] >= cfg.eps_list[i - 1])
      throw ValidationError("config: [experiment].eps: list must be strictly decreasing");
  if (cfg.t_family != "gaussian_bump" && cfg.t_family != "constant")
    throw ValidationError("config: [profile].T: unknown family '" + cfg.t_family + "'");
  if (cfg.q0_source != "gibbs")
    throw ValidationError("config: [profile].q0: only 'gibbs' is supported");
  if (cfg.kind == ExperimentKind::HigherK && (cfg.higher_k < 2 || cfg.higher_k > 3))
    throw ValidationError("config: [experiment].k: must be 2 or 3");
  if (cfg.kind == ExperimentKind::Wigner && cfg.nsamples < 100)
    throw ValidationError("config: [experiment].nsamples: at least 100 for wigner runs");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("config: cannot open " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

InteractionMatrix ExperimentConfig::model() const {
  return build_nearest_neighbor(d, gamma, mass);
}

CovarianceProfile ExperimentConfig::profile() const {
  CovarianceProfile spectral = gibbs_spectral(model(), gibbs_T0);
  TProfile t = t_family == "constant" ? TProfile::constant(t_const)
                                      : TProfile::gaussian_bump(bump_a, bump_w);
  return product_profile(t, spectral);
}

std::string ExperimentConfig::config_hash() const {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char c : raw_text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void ResultTable::write_csv(std::ostream& os) const {
  os << "# config=" << config_hash << "\n";
  os << "experiment,eps,tau,kappa,r,z,zp,i,j,kind,re,im\n";
  for (const ResultRow& row : rows) {
    os << row.experiment << ',' << format_double(row.eps) << ',' << format_double(row.tau)
       << ',' << format_double(row.kappa) << ',' << row.r << ',' << row.z << ',' << row.zp
       << ',' << row.i << ',' << row.j << ',' << row.kind << ',' << format_double(row.re)
       << ',' << format_double(row.im) << "\n";
  }
}

ResultTable ResultTable::read_csv(std::istream& is) {
  ResultTable t;
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.rfind("# config=", 0) == 0) {
      t.config_hash = line.substr(9);
      continue;
    }
    if (!header_seen) {
      header_seen = true;  // column header line
      continue;
    }
    std::vector<std::string> f = split(line, ',');
    if (f.size() != 12) throw ValidationError("csv: malformed row: " + line);
    ResultRow r;
    r.experiment = f[0];
    r.eps = std::stod(f[1]);
    r.tau = std::stod(f[2]);
    r.kappa = std::stod(f[3]);
    r.r = f[4];
    r.z = f[5];
    r.zp = f[6];
    r.i = std::stoi(f[7]);
    r.j = std::stoi(f[8]);
    r.kind = f[9];
    r.re = std::stod(f[10]);
    r.im = std::stod(f[11]);
    t.rows.push_back(r);
  }
  return t;
}

namespace {

struct RowSink {
  ResultTable& table;
  std::string experiment;
  double eps = 0.0, tau = 0.0, kappa = 0.0;
  std::string r;

  void block(const std::string& kind, const OffsetPair& pr, const Mat& m) {
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) {
        ResultRow row;
        row.experiment = experiment;
        row.eps = eps;
        row.tau = tau;
        row.kappa = kappa;
        row.r = r;
        row.z = join_coords(pr.first);
        row.zp = join_coords(pr.second);
        row.i = i;
        row.j = j;
        row.kind = kind;
        row.re = m(i, j).real();
        row.im = m(i, j).imag();
        table.rows.push_back(row);
      }
  }

  void scalar(const std::string& kind, double re, const std::string& z = "0",
              const std::string& zp = "0") {
    ResultRow row;
    row.experiment = experiment;
    row.eps = eps;
    row.tau = tau;
    row.kappa = kappa;
    row.r = r;
    row.z = z;
    row.zp = zp;
    row.kind = kind;
    row.re = re;
    table.rows.push_back(row);
  }
};

void emit_pair_set(RowSink& sink, const PairCov& micro, const PairCov& limit,
                   const std::string& limit_kind) {
  for (const auto& [pr, mc] : micro) {
    sink.block("micro", pr, mc.m);
    const BlockCov& lm = limit.at(pr);
    sink.block(limit_kind, pr, lm.m);
    sink.block("err", pr, (mc.m - lm.m).cwiseAbs().cast<cplx>());
  }
}

int auto_mgrid(const ExperimentConfig& cfg, double eps) {
  // resolve the bump features of width ~ eps^{kappa-1}/tau in theta
  double sharp = std::abs(cfg.tau) / std::pow(eps, cfg.kappa - 1.0);
  int m = next_pow2(std::max(static_cast<double>(cfg.mgrid), 16.0 * sharp));
  return std::min(m, 16384);
}

}  // namespace

ResultTable run_experiment(const ExperimentConfig& cfg) {
  InteractionMatrix V = cfg.model();
  ResultTable table;
  table.config_hash = cfg.config_hash();

  ConditionReport conditions = check_conditions(V, 32);
  if (!conditions.all_pass() && !cfg.override_conditions)
    throw ValidationError("run: model conditions failed; set override_conditions = true to force");
  if (!conditions.all_pass()) table.config_hash += ":conditions-overridden";

  CovarianceProfile profile = cfg.profile();

  std::vector<OffsetPair> offsets = offset_range(cfg.d, cfg.offsets);

  auto make_query = [&](double eps, double kappa) {
    ScaledQuery q;
    q.tau = cfg.tau;
    q.kappa = kappa;
    q.r = cfg.r;
    q.eps = eps;
    q.offsets = offsets;
    q.min_box = cfg.min_box;
    return q;
  };

  switch (cfg.kind) {
    case ExperimentKind::Euler: {
      for (double eps : cfg.eps_list) {
        RowSink sink{table, "euler", eps, cfg.tau, cfg.kappa, join_coords(cfg.r)};
        PairCov micro = propagate_covariance(V, profile, make_query(eps, cfg.kappa));
        PairCov limit = limit_position_pairs(LimitKind::Euler, V, profile, cfg.tau, cfg.r, eps,
                                             0, offsets, auto_mgrid(cfg, eps));
        emit_pair_set(sink, micro, limit, "limit");
      }
      break;
    }
    case ExperimentKind::NavierStokes: {
      for (double eps : cfg.eps_list) {
        RowSink sink{table, "ns", eps, cfg.tau, 2.0, join_coords(cfg.r)};
        PairCov micro = propagate_covariance(V, profile, make_query(eps, 2.0));
        PairCov ns = limit_position_pairs(LimitKind::NavierStokes, V, profile, cfg.tau, cfg.r,
                                          eps, 0, offsets, auto_mgrid(cfg, eps));
        PairCov kfree = limit_position_pairs(LimitKind::KernelFree, V, profile, cfg.tau, cfg.r,
                                             eps, 0, offsets, auto_mgrid(cfg, eps));
        for (const auto& [pr, mc] : micro) {
          sink.block("micro", pr, mc.m);
          sink.block("ns-limit", pr, ns.at(pr).m);
          sink.block("limit", pr, kfree.at(pr).m);
          sink.block("err", pr, (mc.m - ns.at(pr).m).cwiseAbs().cast<cplx>());
        }
      }
      break;
    }
    case ExperimentKind::HigherK: {
      double kappa = static_cast<double>(cfg.higher_k);
      for (double eps : cfg.eps_list) {
        RowSink sink{table, "higher-k", eps, cfg.tau, kappa, join_coords(cfg.r)};
        PairCov micro = propagate_covariance(V, profile, make_query(eps, kappa));
        PairCov lim = limit_position_pairs(LimitKind::Higher, V, profile, cfg.tau, cfg.r, eps,
                                           cfg.higher_k, offsets, auto_mgrid(cfg, eps));
        emit_pair_set(sink, micro, lim, "ns-limit");
      }
      break;
    }
    case ExperimentKind::HalfspaceEuler: {
      PairCov limit = halfspace_euler(V, profile, cfg.tau, cfg.r, offsets);
      for (double eps : cfg.eps_list) {
        RowSink sink{table, "halfspace-euler", eps, cfg.tau, 1.0, join_coords(cfg.r)};
        PairCov micro = halfspace_covariance(V, profile, make_query(eps, 1.0));
        emit_pair_set(sink, micro, limit, "limit");
      }
      break;
    }
    case ExperimentKind::HalfspaceNs: {
      for (double eps : cfg.eps_list) {
        RowSink sink{table, "halfspace-ns", eps, cfg.tau, 2.0, join_coords(cfg.r)};
        PairCov micro = halfspace_covariance(V, profile, make_query(eps, 2.0));
        PairCov ns = halfspace_ns(V, profile, cfg.tau, cfg.r, eps, offsets);
        PairCov kfree = halfspace_euler(V, profile, cfg.tau / eps, cfg.r, offsets);
        for (const auto& [pr, mc] : micro) {
          sink.block("micro", pr, mc.m);
          sink.block("ns-limit", pr, ns.at(pr).m);
          sink.block("limit", pr, kfree.at(pr).m);
          sink.block("err", pr, (mc.m - ns.at(pr).m).cwiseAbs().cast<cplx>());
        }
      }
      break;
    }
    case ExperimentKind::Wigner: {
      std::vector<double> thetas;
      for (int k = 0; k < cfg.theta_samples; ++k)
        thetas.push_back(-pi + 2.0 * pi * (k + 0.5) / cfg.theta_samples);
      WignerOptions opt;
      opt.y_max = cfg.y_max;
      opt.jobs = cfg.jobs;
      for (int ir = 0; ir < cfg.r_samples; ++ir) {
        RVec r = cfg.r;
        if (cfg.r_samples > 1)
          r[0] += -cfg.r_span + 2.0 * cfg.r_span * ir / (cfg.r_samples - 1);
        std::string rstr = join_coords(r);
        for (double eps : cfg.eps_list) {
          WignerGrid emp = wigner_empirical(V, profile, eps, cfg.tau, r, thetas, cfg.nsamples,
                                            cfg.seed, opt);
          WignerGrid det = wigner_deterministic(V, profile, eps, cfg.tau, r, thetas, opt);
          for (std::size_t k = 0; k < thetas.size(); ++k) {
            RowSink sink{table, "wigner", eps, cfg.tau, 1.0, rstr};
            OffsetPair pr{{static_cast<int>(k)}, {0}};
            sink.block("micro", pr, emp.values[k]);
            sink.block("stderr", pr, emp.stderr_[k].cast<cplx>());
            sink.block("err", pr, (emp.values[k] - det.values[k]).cwiseAbs().cast<cplx>());
            RowSink dsink{table, "wigner:det", eps, cfg.tau, 1.0, rstr};
            dsink.block("limit", pr, det.values[k]);
          }
        }
        RVec tv(1);
        for (std::size_t k = 0; k < thetas.size(); ++k) {
          tv[0] = thetas[k];
          RowSink sink{table, "wigner:wp", 0.0, cfg.tau, 1.0, rstr};
          OffsetPair pr{{static_cast<int>(k)}, {0}};
          try {
            sink.block("limit", pr, wigner_limit(V, profile, cfg.tau, r, tv, false).value);
          } catch (const CriticalSetError&) {
            // theta on the critical set; no limit value at this sample
          }
        }
      }
      break;
    }
    case ExperimentKind::Conservation: {
      // limit density and current on an r-grid around r
      for (int ir = 0; ir < 9; ++ir) {
        RVec r = cfg.r;
        r[0] += -1.0 + 0.25 * ir;
        EnergyDensity e = energy_density_limit(V, profile, cfg.tau, r, cfg.theta_samples);
        RVec j = energy_current_limit(V, profile, cfg.tau, r, cfg.theta_samples);
        RowSink sink{table, "conservation:e", 0.0, cfg.tau, 1.0, join_coords(r)};
        sink.scalar("limit", e.value);
        sink.scalar("err", e.route_difference());
        RowSink sinkj{table, "conservation:j", 0.0, cfg.tau, 1.0, join_coords(r)};
        sinkj.scalar("limit", j[0]);
      }
      // microscopic energy sweep
      EnergyDensity e0 = energy_density_limit(V, profile, cfg.tau, cfg.r, cfg.theta_samples);
      for (double eps : cfg.eps_list) {
        double em = microscopic_energy(V, profile, cfg.tau, cfg.r, eps);
        RowSink sink{table, "conservation:micro-e", eps, cfg.tau, 1.0, join_coords(cfg.r)};
        sink.scalar("micro", em);
        sink.scalar("limit", e0.value);
        sink.scalar("err", std::abs(em - e0.value));
      }
      // continuity residual under refinement
      double h = 0.04;
      double res_h = continuity_residual(V, profile, cfg.tau, h, 5, cfg.r[0], h, 5,
                                         cfg.theta_samples);
      double res_h2 = continuity_residual(V, profile, cfg.tau, h / 2, 5, cfg.r[0], h / 2, 5,
                                          cfg.theta_samples);
      RowSink sink{table, "conservation:continuity", 0.0, cfg.tau, 1.0, join_coords(cfg.r)};
      sink.scalar("err", res_h, "1");
      sink.scalar("err", res_h2, "2");
      break;
    }
    case ExperimentKind::Conditions: {
      for (const ConditionEntry& e : conditions.entries) {
        RowSink sink{table, "conditions:" + e.name, 0.0, 0.0, 0.0, "0"};
        sink.scalar("err", e.margin);
      }
      break;
    }
  }
  return table;
}

std::string convergence_table(const ResultTable& results) {
  // group err rows by experiment, then eps (descending)
  std::map<std::string, std::map<double, std::pair<double, std::pair<double, int>>>> grouped;
  for (const ResultRow& row : results.rows) {
    if (row.kind != "err") continue;
    auto& cell = grouped[row.experiment][row.eps];
    cell.first = std::max(cell.first, row.re);
    cell.second.first += row.re;
    cell.second.second += 1;
  }
  std::ostringstream os;
  bool any = false;
  for (const auto& [exp, by_eps] : grouped) {
    if (by_eps.size() < 2) continue;
    any = true;
    os << "experiment: " << exp << "\n";
    os << "    eps          max_err        mean_err       ratio\n";
    double prev = -1.0;
    std::vector<double> lx, ly;
    for (auto it = by_eps.rbegin(); it != by_eps.rend(); ++it) {
      double eps = it->first;
      double mx = it->second.first;
      double mean = it->second.second.first / std::max(1, it->second.second.second);
      os << "    " << format_double(eps).substr(0, 10) << "   ";
      char buf[64];
      std::snprintf(buf, sizeof buf, "%-12.6g  %-12.6g  ", mx, mean);
      os << buf;
      if (prev > 0.0)
        os << format_double(mx / prev).substr(0, 8);
      os << "\n";
      prev = mx;
      lx.push_back(std::log(eps));
      ly.push_back(std::log(std::max(mx, 1e-300)));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i]; sy += ly[i]; sxx += lx[i] * lx[i]; sxy += lx[i] * ly[i];
    }
    double m = static_cast<double>(lx.size());
    double order = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    os << "    fitted order: " << format_double(order).substr(0, 8) << "\n";
  }
  if (!any)
    throw InvalidParameterError("convergence_table: need err rows for at least 2 eps values");
  return os.str();
}

std::vector<std::string> render_plots(const ResultTable& results, const std::string& dir) {
  std::vector<std::string> files;
  if (results.rows.empty()) {
    std::cerr << "render_plots: empty table, nothing to plot\n";
    return files;
  }

  // error-vs-eps per experiment
  std::map<std::string, std::map<double, double>> err;
  for (const ResultRow& row : results.rows)
    if (row.kind == "err" && row.eps > 0.0) {
      double& v = err[row.experiment][row.eps];
      v = std::max(v, row.re);
    }
  std::vector<SvgSeries> series;
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  int ci = 0;
  for (const auto& [exp, by_eps] : err) {
    if (by_eps.size() < 2) continue;
    SvgSeries s;
    s.label = exp;
    s.color = colors[ci++ % 5];
    for (const auto& [eps, v] : by_eps) {
      s.x.push_back(eps);
      s.y.push_back(v);
    }
    series.push_back(s);
  }
  if (!series.empty()) {
    std::string path = dir + "/err_vs_eps.svg";
    svg_line_plot(path, "max err vs eps (log-log)", series, true, true);
    files.push_back(path);
  }

  // micro vs limit overlay at the smallest eps
  {
    double eps_min = 1e300;
    for (const ResultRow& row : results.rows)
      if (row.kind == "micro" && row.eps > 0.0) eps_min = std::min(eps_min, row.eps);
    SvgSeries sm, sl;
    sm.label = "micro";
    sm.color = "#1f77b4";
    sl.label = "limit";
    sl.color = "#d62728";
    int idx = 0;
    for (const ResultRow& row : results.rows) {
      if (row.eps != eps_min) continue;
      if (row.kind == "micro") {
        sm.x.push_back(idx);
        sm.y.push_back(row.re);
        ++idx;
      }
    }
    idx = 0;
    for (const ResultRow& row : results.rows) {
      if (row.kind == "limit" || row.kind == "ns-limit") {
        if (row.eps != eps_min && row.eps != 0.0) continue;
        sl.x.push_back(idx);
        sl.y.push_back(row.re);
        ++idx;
      }
    }
    if (!sm.x.empty() && !sl.x.empty()) {
      std::string path = dir + "/overlay.svg";
      svg_line_plot(path, "micro vs limit (smallest eps)", {sm, sl}, false, false);
      files.push_back(path);
    }
  }

  // wigner heatmap over (r, theta)
  {
    std::map<std::string, std::map<int, double>> byr;
    for (const ResultRow& row : results.rows)
      if (row.experiment == "wigner:wp" && row.i == 0 && row.j == 0)
        byr[row.r][std::stoi(row.z)] = row.re;
    if (byr.size() >= 2) {
      std::vector<std::vector<double>> vals;
      std::vector<double> xs, ys;
      for (const auto& [rstr, m] : byr) {
        ys.push_back(std::stod(rstr));
        std::vector<double> rowv;
        for (const auto& [k, v] : m) rowv.push_back(v);
        vals.push_back(rowv);
        if (xs.empty())
          for (const auto& [k, v] : m) xs.push_back(k);
      }
      std::string path = dir + "/wigner_heatmap.svg";
      svg_heatmap(path, "Wigner limit over (r, theta)", vals, xs, ys);
      files.push_back(path);
    }
  }
  return files;
}

bool run_checks(const ExperimentConfig& cfg, std::ostream& os) {
  InteractionMatrix V = cfg.model();
  ConditionReport rep = check_conditions(V, std::max(32, cfg.theta_samples));
  auto show = [&](const ConditionEntry& e) {
    const char* status = e.status == CheckStatus::Pass          ? "pass"
                         : e.status == CheckStatus::Fail        ? "FAIL"
                         : e.status == CheckStatus::SampledPass ? "sampled-pass"
                                                                : "sampled-FAIL";
    os << "  " << e.name << ": " << status << "  margin=" << format_double(e.margin);
    if (!e.note.empty()) os << "  (" << e.note << ")";
    os << "\n";
  };
  os << "model conditions:\n";
  for (const auto& e : rep.entries) show(e);
  os << "  critical-set samples flagged: " << rep.critical_samples.size() << "\n";

  CovarianceProfile profile = cfg.profile();
  ProfileReport prep = verify_profile(profile, cfg.eps_list);
  os << "profile conditions:\n";
  for (const auto& e : prep.entries) show(e);

  return rep.all_pass() && prep.all_pass();
}

}  // namespace hydrolat
