#include "memwave/crossbar.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "memwave/rng.hpp"

namespace memwave {

namespace {

constexpr std::uint64_t kStreamProgram = stream_tag("program-cell");
constexpr std::uint64_t kStreamPerturb = stream_tag("perturb-matrix");

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

}  // namespace

void DeviceBounds::validate() const {
  if (!(g_min < g_max)) fail("DeviceBounds: g_min must be < g_max");
  if (levels < 2) fail("DeviceBounds: levels must be >= 2");
}

void ProgrammingPolicy::validate() const {
  if (!(delta_g > 0.0)) fail("ProgrammingPolicy: delta_g must be > 0");
  if (max_pulses < 1) fail("ProgrammingPolicy: max_pulses must be >= 1");
  if (pulse_step_sd < 0.0) fail("ProgrammingPolicy: pulse_step_sd must be >= 0");
  if (read_noise_sd < 0.0) fail("ProgrammingPolicy: read_noise_sd must be >= 0");
}

CrossbarArray::CrossbarArray(int rows, int cols, DeviceBounds bounds)
    : CrossbarArray(rows, cols, bounds, bounds.g_min) {}

CrossbarArray::CrossbarArray(int rows, int cols, DeviceBounds bounds, double initial_g)
    : bounds_(bounds) {
  bounds_.validate();
  if (rows < 1 || cols < 1) fail("CrossbarArray: rows and cols must be >= 1");
  if (initial_g < bounds_.g_min || initial_g > bounds_.g_max)
    fail("CrossbarArray: initial conductance outside device bounds");
  g_ = Eigen::MatrixXd::Constant(rows, cols, initial_g);
  col_enable_.assign(static_cast<std::size_t>(cols), 1);
}

double CrossbarArray::conductance(int i, int j) const {
  if (i < 0 || i >= rows() || j < 0 || j >= cols())
    fail("CrossbarArray: cell index out of range");
  return g_(i, j);
}

void CrossbarArray::set_conductance(int i, int j, double g) {
  if (i < 0 || i >= rows() || j < 0 || j >= cols())
    fail("CrossbarArray: cell index out of range");
  if (g < bounds_.g_min || g > bounds_.g_max)
    fail("CrossbarArray: conductance outside device bounds");
  g_(i, j) = g;
}

void CrossbarArray::set_conductances(const Eigen::MatrixXd& g) {
  if (g.rows() != g_.rows() || g.cols() != g_.cols())
    fail("CrossbarArray: conductance matrix shape mismatch");
  if ((g.array() < bounds_.g_min).any() || (g.array() > bounds_.g_max).any())
    fail("CrossbarArray: conductance outside device bounds");
  g_ = g;
}

bool CrossbarArray::column_enabled(int j) const {
  if (j < 0 || j >= cols()) fail("CrossbarArray: column index out of range");
  return col_enable_[static_cast<std::size_t>(j)] != 0;
}

void CrossbarArray::set_column_enabled(int j, bool on) {
  if (j < 0 || j >= cols()) fail("CrossbarArray: column index out of range");
  col_enable_[static_cast<std::size_t>(j)] = on ? 1 : 0;
}

void CrossbarArray::enable_all() {
  std::fill(col_enable_.begin(), col_enable_.end(), std::uint8_t{1});
}

void CrossbarArray::enable_only(int first_col, int last_col) {
  if (first_col < 0 || last_col >= cols() || first_col > last_col)
    fail("CrossbarArray: enable range out of bounds");
  for (int j = 0; j < cols(); ++j)
    col_enable_[static_cast<std::size_t>(j)] = (j >= first_col && j <= last_col) ? 1 : 0;
}

void CrossbarArray::check_row_count(const Eigen::VectorXd& v) const {
  if (v.size() != g_.rows())
    fail("CrossbarArray: voltage vector length " + std::to_string(v.size()) +
         " does not match row count " + std::to_string(rows()));
}

double CrossbarArray::column_current(const Eigen::VectorXd& v, int j) const {
  double current = 0.0;
  for (int i = 0; i < rows(); ++i) current += v(i) * g_(i, j);
  return current;
}

Eigen::VectorXd CrossbarArray::mvm(const Eigen::VectorXd& v) const {
  check_row_count(v);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(cols());
  for (int j = 0; j < cols(); ++j) {
    if (!col_enable_[static_cast<std::size_t>(j)]) continue;
    out(j) = column_current(v, j);
  }
  return out;
}

double CrossbarArray::differential_output(const Eigen::VectorXd& v, int pair) const {
  check_row_count(v);
  if (cols() % 2 != 0) fail("CrossbarArray: differential readout needs an even column count");
  const int neg = 2 * pair;      // odd-numbered column (1-based), negative weights
  const int pos = 2 * pair + 1;  // even-numbered column (1-based), positive weights
  if (pair < 0 || pos >= cols()) fail("CrossbarArray: pair index out of range");
  if (!column_enabled(neg) || !column_enabled(pos))
    fail("CrossbarArray: differential pair has a disabled column");
  return column_current(v, pos) - column_current(v, neg);
}

double CrossbarArray::offset_output(const Eigen::VectorXd& v, int col,
                                    double g_offset) const {
  check_row_count(v);
  if (col < 0 || col >= cols()) fail("CrossbarArray: column index out of range");
  if (!(g_offset > 0.0)) fail("CrossbarArray: g_offset must be > 0");
  if (!column_enabled(col)) fail("CrossbarArray: offset readout of a disabled column");
  return column_current(v, col) - g_offset * v.sum();
}

ProgramReport CrossbarArray::program_cell(int i, int j, double target,
                                          const ProgrammingPolicy& policy,
                                          std::uint64_t seed) {
  policy.validate();
  if (i < 0 || i >= rows() || j < 0 || j >= cols())
    fail("program_cell: cell index out of range");
  if (target < bounds_.g_min + policy.delta_g || target > bounds_.g_max - policy.delta_g)
    fail("program_cell: target " + std::to_string(target) +
         " uS leaves no room for the accept band within device bounds");

  Rng rng(seed);
  double g = g_(i, j);
  ProgramReport report;
  for (int pulse = 0; pulse <= policy.max_pulses; ++pulse) {
    const double read =
        policy.read_noise_sd > 0.0 ? g + rng.normal(0.0, policy.read_noise_sd) : g;
    if (read >= target - policy.delta_g && read <= target + policy.delta_g) {
      report.converged = true;
      report.pulses_used = pulse;
      break;
    }
    if (pulse == policy.max_pulses) {
      report.converged = false;
      report.pulses_used = pulse;
      break;
    }
    const double step = std::abs(rng.normal(policy.pulse_step_mean, policy.pulse_step_sd));
    g = std::clamp(read < target ? g + step : g - step, bounds_.g_min, bounds_.g_max);
  }
  g_(i, j) = g;
  report.final_g = g;
  return report;
}

std::vector<ProgramReport> CrossbarArray::program_matrix(const Eigen::MatrixXd& targets,
                                                         const ProgrammingPolicy& policy,
                                                         std::uint64_t seed) {
  policy.validate();
  if (targets.rows() != g_.rows() || targets.cols() != g_.cols())
    fail("program_matrix: target matrix shape mismatch");
  for (int i = 0; i < rows(); ++i)
    for (int j = 0; j < cols(); ++j)
      if (targets(i, j) < bounds_.g_min + policy.delta_g ||
          targets(i, j) > bounds_.g_max - policy.delta_g)
        fail("program_matrix: target at (" + std::to_string(i) + "," + std::to_string(j) +
             ") leaves no room for the accept band within device bounds");

  std::vector<ProgramReport> reports;
  reports.reserve(static_cast<std::size_t>(rows()) * static_cast<std::size_t>(cols()));
  for (int i = 0; i < rows(); ++i)
    for (int j = 0; j < cols(); ++j)
      reports.push_back(
          program_cell(i, j, targets(i, j), policy,
                       derive_seed(seed, {kStreamProgram, static_cast<std::uint64_t>(i),
                                          static_cast<std::uint64_t>(j)})));
  return reports;
}

Eigen::MatrixXd perturb_matrix(const Eigen::MatrixXd& targets, double programming_error,
                               const DeviceBounds& bounds, std::uint64_t seed) {
  bounds.validate();
  if (programming_error < 0.0 || programming_error > 1.0)
    fail("perturb_matrix: programming_error must be in [0, 1]");
  if ((targets.array() < bounds.g_min).any() || (targets.array() > bounds.g_max).any())
    fail("perturb_matrix: target outside device bounds");
  if (programming_error == 0.0) return targets;

  const double dg = programming_error * bounds.span() / 2.0;
  Eigen::MatrixXd out(targets.rows(), targets.cols());
  for (Eigen::Index i = 0; i < targets.rows(); ++i) {
    for (Eigen::Index j = 0; j < targets.cols(); ++j) {
      Rng rng = Rng::derive(seed, {kStreamPerturb, static_cast<std::uint64_t>(i),
                                   static_cast<std::uint64_t>(j)});
      out(i, j) = std::clamp(targets(i, j) + rng.uniform(-dg, dg), bounds.g_min,
                             bounds.g_max);
    }
  }
  return out;
}

}  // namespace memwave
