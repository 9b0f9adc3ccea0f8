#ifndef HYDROLAT_EXPERIMENT_HPP
#define HYDROLAT_EXPERIMENT_HPP

#include <iosfwd>

#include "hydrolat/conservation.hpp"
#include "hydrolat/wigner.hpp"

namespace hydrolat {

enum class ExperimentKind {
  Euler,
  NavierStokes,
  HigherK,
  HalfspaceEuler,
  HalfspaceNs,
  Wigner,
  Conservation,
  Conditions,
};

struct ExperimentConfig {
  // [model]
  std::string family = "nearest_neighbor";
  int d = 1;
  int n = 1;
  std::vector<double> gamma{1.0};
  std::vector<double> mass{1.0};

  // [profile]
  std::string t_family = "gaussian_bump";  // or "constant"
  double t_const = 1.0;
  double bump_a = 0.5;
  double bump_w = 1.0;
  std::string q0_source = "gibbs";
  double gibbs_T0 = 1.0;

  // [experiment]
  ExperimentKind kind = ExperimentKind::Euler;
  double tau = 1.0;
  RVec r;
  double kappa = 1.0;
  std::vector<double> eps_list{0.1, 0.05, 0.025};
  int offsets = 2;          // pairs with |z|,|z'| <= offsets
  int theta_samples = 64;
  int mgrid = 512;          // theta grid for position-space limits
  int higher_k = 3;
  int nsamples = 2000;
  std::uint64_t seed = 12345;
  int min_box = 0;          // 0 = auto
  double tolerance = 1e-9;  // check-mode threshold
  bool override_conditions = false;
  int r_samples = 1;        // wigner: r sweep size
  double r_span = 1.0;      // wigner: half-width of the r sweep
  int y_max = 64;
  int jobs = 1;

  // [output]
  std::string out_dir = "out";
  bool want_csv = true;
  bool want_svg = true;

  std::string raw_text;  // exact config text, hashed into outputs

  InteractionMatrix model() const;
  CovarianceProfile profile() const;
  std::string config_hash() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

struct ResultRow {
  std::string experiment;
  double eps = 0.0;
  double tau = 0.0;
  double kappa = 0.0;
  std::string r;   // semicolon-joined coordinates
  std::string z;   // semicolon-joined offset
  std::string zp;
  int i = 0;
  int j = 0;
  std::string kind;  // micro | limit | ns-limit | err | stderr
  double re = 0.0;
  double im = 0.0;
};

struct ResultTable {
  std::string config_hash;
  std::vector<ResultRow> rows;

  void write_csv(std::ostream& os) const;
  static ResultTable read_csv(std::istream& is);
};

ResultTable run_experiment(const ExperimentConfig& config);

// per-eps max/mean err, ratio to the previous eps, fitted order
std::string convergence_table(const ResultTable& results);

// emitted SVG files (paths) under dir
std::vector<std::string> render_plots(const ResultTable& results, const std::string& dir);

// condition/profile checks; returns true when everything passes the
// configured tolerance
bool run_checks(const ExperimentConfig& config, std::ostream& os);

std::string format_double(double v);  // 17 significant digits

}  // namespace hydrolat

#endif
