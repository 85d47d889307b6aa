#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace memwave {

// Conductances are in uS, voltages in V, currents in uA (uS * V = uA).

struct DeviceBounds {
  double g_min = 10.0;   // uS
  double g_max = 180.0;  // uS
  int levels = 17;       // distinguishable conductance states

  double span() const { return g_max - g_min; }
  double level_spacing() const { return span() / (levels - 1); }
  void validate() const;
};

// Closed-loop write parameters. The accept band is [target - delta_g,
// target + delta_g]; programming_error() is the normalized band width
// 2*delta_g / (g_max - g_min).
struct ProgrammingPolicy {
  double delta_g = 2.5;          // uS, band half-width
  double pulse_step_mean = 1.0;  // uS per pulse
  double pulse_step_sd = 0.3;    // uS
  int max_pulses = 1000;
  double read_noise_sd = 0.0;  // uS, additive on each verify read

  double programming_error(const DeviceBounds& bounds) const {
    return 2.0 * delta_g / bounds.span();
  }
  void validate() const;
};

struct ProgramReport {
  int pulses_used = 0;
  double final_g = 0.0;  // uS
  bool converged = false;
};

// A 1T1R array: a conductance matrix plus per-column transistor gates.
// Readout (mvm, differential_output, offset_output) is pure on a snapshot;
// programming mutates state and must be serialized per array.
class CrossbarArray {
 public:
  CrossbarArray(int rows, int cols, DeviceBounds bounds);
  CrossbarArray(int rows, int cols, DeviceBounds bounds, double initial_g);

  int rows() const { return static_cast<int>(g_.rows()); }
  int cols() const { return static_cast<int>(g_.cols()); }
  const DeviceBounds& bounds() const { return bounds_; }

  double conductance(int i, int j) const;
  void set_conductance(int i, int j, double g);
  const Eigen::MatrixXd& conductances() const { return g_; }
  void set_conductances(const Eigen::MatrixXd& g);

  bool column_enabled(int j) const;
  void set_column_enabled(int j, bool on);
  void enable_all();
  void enable_only(int first_col, int last_col);  // inclusive range

  // Ohm's-law accumulate: I_j = sum_i v_i * g_ij over enabled columns,
  // disabled columns read exactly 0.
  Eigen::VectorXd mvm(const Eigen::VectorXd& v) const;

  // Signed output of a differential column pair (0-based pair p = columns
  // 2p, 2p+1): current of the even-numbered (1-based) column minus the
  // odd-numbered one, i.e. I[2p+1] - I[2p]. The second column of the pair
  // carries the positive weight part.
  double differential_output(const Eigen::VectorXd& v, int pair) const;

  // Column current minus the offset-branch current g_offset * sum(v): a
  // device programmed to a*w + g_offset realizes effective weight a*w for
  // arbitrary inputs.
  double offset_output(const Eigen::VectorXd& v, int col, double g_offset) const;

  // Closed-loop write: verify-read with additive noise, then a positive
  // (negative) pulse of size |N(step_mean, step_sd)| while the read is below
  // (above) the accept band. Stops inside the band or after max_pulses.
  // Deterministic for a given seed.
  ProgramReport program_cell(int i, int j, double target,
                             const ProgrammingPolicy& policy, std::uint64_t seed);

  // Elementwise program_cell with per-cell noise streams derived from the
  // seed. All targets are validated before any cell is written.
  std::vector<ProgramReport> program_matrix(const Eigen::MatrixXd& targets,
                                            const ProgrammingPolicy& policy,
                                            std::uint64_t seed);

 private:
  void check_row_count(const Eigen::VectorXd& v) const;
  double column_current(const Eigen::VectorXd& v, int j) const;

  Eigen::MatrixXd g_;
  std::vector<std::uint8_t> col_enable_;
  DeviceBounds bounds_;
};

// Device-variability model: each cell becomes clamp(target + U(-dg, +dg))
// with dg = programming_error * span / 2. The uniform law matches the
// observed flat deviation distribution of closed-loop writes.
Eigen::MatrixXd perturb_matrix(const Eigen::MatrixXd& targets,
                               double programming_error, const DeviceBounds& bounds,
                               std::uint64_t seed);

}  // namespace memwave
