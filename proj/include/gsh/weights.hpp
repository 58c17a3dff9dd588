#pragma once

#include <functional>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "gsh/types.hpp"

namespace gsh::weights {

enum class Family { gevrey, power_log, exp_power, from_weight_fn, from_weight_table, custom };

/// A positive weight sequence {M_p} with M_0 = 1, held and queried in log
/// domain (M_p itself overflows doubles near p ~ 150).
///
/// Closed-form families (gevrey, power_log, exp_power) answer log_m(p) for
/// any p >= 0; table-backed families (custom, from_weight_table) refuse
/// queries beyond p_max instead of extrapolating. from_weight_fn computes
/// log M_p = sup_rho (p log rho - omega(rho)) by a refined geometric scan.
class WeightSequence {
 public:
  /// Gevrey family M_p = (p!)^alpha, alpha > 0.
  static WeightSequence gevrey(double alpha, long p_max);
  /// M_p = p^{sp} * lf(p)^{tp} with lf(p) = max(log p, 1); s >= 1/2, t >= 0.
  /// The clamped log factor keeps M_1 > 0 and log-convexity near the origin.
  static WeightSequence power_log(double s, double t, long p_max);
  /// M_p = exp(p^r), r in (1, 2].
  static WeightSequence exp_power(double r, long p_max);
  /// Braun-Meise-Taylor style M_p = sup_rho rho^p e^{-omega(rho)} for a
  /// nondecreasing, nonnegative weight function omega.
  static WeightSequence from_weight_fn(std::function<double(double)> omega, long p_max);
  /// Same construction, with omega given by a finite table of (rho, omega) pairs.
  static WeightSequence from_weight_table(std::vector<std::pair<double, double>> table, long p_max);
  /// Finite table of log M_p values; log_values[0] must be 0.
  static WeightSequence custom(std::vector<double> log_values);

  Family family() const { return family_; }
  long p_max() const { return p_max_; }
  /// True when log_m(p) is defined for every p >= 0 (not table-bounded).
  bool unbounded() const;

  /// log M_p. Throws std::out_of_range beyond p_max for table families.
  double log_m(long p) const;

  /// Family parameters, for reports and serialization.
  const std::map<std::string, double>& params() const { return params_; }
  const std::vector<double>& table() const { return log_table_; }

 private:
  WeightSequence() = default;
  double compute(long p) const;

  Family family_ = Family::custom;
  long p_max_ = 0;
  std::map<std::string, double> params_;
  std::vector<double> log_table_;                       // materialized 0..p_max
  std::function<double(double)> omega_;                 // from_weight_fn only
  std::vector<std::pair<double, double>> omega_table_;  // from_weight_table only
};

enum class Condition { M1, M2, M3_quasi, M3_roumieu, M3_beurling };
enum class Verdict { holds, fails, inconclusive };

std::string to_string(Condition c);
std::string to_string(Verdict v);

/// Verdict plus the evidence it was decided on: fitted constants, partial
/// sums, violating indices. Finite-prefix semantics: "holds" always means
/// "on the checked range, with the reported trend".
struct ConditionReport {
  Condition condition;
  Verdict verdict = Verdict::inconclusive;
  long checked_up_to = 0;
  std::vector<std::pair<std::string, double>> witnesses;

  double witness(const std::string& name) const;
  bool has_witness(const std::string& name) const;
};

/// (M.1) log convexity: M_p^2 <= M_{p-1} M_{p+1} for 1 <= p <= p_max-1.
ConditionReport check_m1(const WeightSequence& seq);

/// (M.2) separativity: M_p <= A H^p min_q M_q M_{p-q}. Fits the smallest H
/// from the scan of g(p)/p, g(p) = log M_p - min_q (log M_q + log M_{p-q}).
ConditionReport check_m2(const WeightSequence& seq);

/// (M.3)' non-quasianalyticity: sum M_{p-1}/M_p < infinity, decided by the
/// fitted power exponent of the ratio tail (+/- 0.05 band, with a
/// partial-sum growth tiebreak inside the band).
ConditionReport check_m3_quasi(const WeightSequence& seq);

enum class NontrivialityMode { roumieu, beurling };

/// (M.3)'' / (M.3)''' nontriviality: p^{p/2} <= C L^p M_p for some (every) L.
ConditionReport check_m3_nontrivial(const WeightSequence& seq, NontrivialityMode mode);

struct AssocResult {
  double value = 0.0;
  long p_star = 0;
  bool saturated = false;
};

enum class ScanMode {
  unimodal,  ///< ascending scan, stop at first strict decrease (needs (M.1))
  full,      ///< defensive full scan over 0..p_cap
  bracket    ///< binary search on the first difference (needs (M.1)); for large p_cap
};

struct AssocOptions {
  long p_cap = 10000;
  ScanMode mode = ScanMode::unimodal;
};

/// Associated function M(rho) = sup_p log(rho^p / M_p) with the maximizing
/// index. Saturation (maximum at p_cap, or at the table end while still
/// rising) is reported, never silently truncated.
AssocResult associated_fn(const WeightSequence& seq, double rho, const AssocOptions& opt = {});

/// Memoized associated-function evaluations for one sequence. Write-once per
/// key; safe for concurrent readers and writers.
class AssociatedFunctionTable {
 public:
  explicit AssociatedFunctionTable(const WeightSequence& seq, AssocOptions opt = {})
      : seq_(seq), opt_(opt) {}

  AssocResult lookup(double rho) const;
  const WeightSequence& sequence() const { return seq_; }
  const AssocOptions& options() const { return opt_; }

 private:
  const WeightSequence& seq_;
  AssocOptions opt_;
  mutable std::shared_mutex mutex_;
  mutable std::map<double, AssocResult> entries_;
};

struct LogWeightResult {
  double value = 0.0;
  bool saturated = false;
};

/// sum_k M(theta_k sqrt(n_k)), the log of the membership weight at n.
LogWeightResult log_weight(const AssociatedFunctionTable& table, std::span<const double> theta,
                           const MultiIndex& n);

}  // namespace gsh::weights
