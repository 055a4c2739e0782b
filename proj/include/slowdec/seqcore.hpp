#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace slowdec {

using Complex = std::complex<double>;

// One zero of the product, with multiplicity.  The origin is never a zero.
struct ZeroPoint {
  Complex value;
  int multiplicity = 1;
};

// Analytic knowledge of the zeros beyond the materialization radius,
// reduced to power sums T_m = sum_{|lambda| > R} lambda^{-m}.  A truncated
// log-modulus sum then extends to the full product via
//   sum_{|lambda|>R} ln|1 - z/lambda| = -Re sum_{m>=1} z^m T_m / m,
// valid for |z| < R.  power_sum_err[m] bounds the error of T_m; abs_sum_top
// bounds sum |lambda|^{-M} and controls the series remainder.
struct TailModel {
  bool available = false;
  bool complete = false;  // no zeros beyond the radius at all
  double radius = 0.0;
  std::vector<Complex> power_sums;    // index m = 1..M; [0] unused
  std::vector<double> power_sum_err;  // same indexing
  double abs_sum_top = 0.0;

  int max_power() const { return power_sums.empty() ? 0 : static_cast<int>(power_sums.size()) - 1; }

  // Correction sum_{|lambda|>R} ln|1-z/lambda| and a rigorous bound on its error.
  // Requires |z| <= radius/2 (throws otherwise).
  struct Correction {
    double value = 0.0;
    double error = 0.0;
  };
  Correction correction(Complex z) const;

  static TailModel none() { return {}; }
  static TailModel complete_at(double radius);
};

// n(center, t) as a right-continuous step function of t, cached as sorted
// breakpoints with cumulative jumps.
class CountingSnapshot {
 public:
  struct Breakpoint {
    double radius;
    std::int64_t jump;
  };

  CountingSnapshot(Complex center, std::vector<Breakpoint> merged_sorted);

  Complex center() const { return center_; }
  const std::vector<Breakpoint>& breakpoints() const { return bps_; }

  // Number of points with |lambda - center| <= t, multiplicities included.
  std::int64_t count(double t) const;

 private:
  Complex center_;
  std::vector<Breakpoint> bps_;
  std::vector<std::int64_t> cum_;
};

class SequenceSpec;

// A zero set materialized completely up to a modulus radius, sorted by
// nondecreasing modulus (ties broken by argument).  Immutable once built.
class ZeroSequence {
 public:
  // `density` is the half-line density Delta: the sorted moduli satisfy
  // j / |lambda_j| -> 2 Delta.
  static ZeroSequence from_points(std::vector<ZeroPoint> pts, double radius,
                                  std::optional<double> density = std::nullopt,
                                  bool even = false,
                                  TailModel tail = TailModel::complete_at(0.0));

  const std::vector<ZeroPoint>& points() const { return points_; }
  double radius() const { return radius_; }
  std::optional<double> density() const { return density_; }
  bool even() const { return even_; }
  bool real_mode() const { return real_; }
  // Smallest M0 with |Im mu| <= M0 ln|mu| over the materialized points
  // (complex mode only; points with |mu| <= 1.05 are excluded from the sup).
  std::optional<double> imag_log_bound() const { return m0_; }
  const TailModel& tail() const { return tail_; }
  std::int64_t total_multiplicity() const { return total_mult_; }
  std::size_t size() const { return points_.size(); }
  double max_modulus() const;

  // --- real-mode interval counts (multiplicities included) ---
  // Total multiplicity of points with value <= v (resp. < v).
  std::int64_t count_le(double v) const;
  std::int64_t count_lt(double v) const;
  // Signed count: #(0,t] for t > 0, -#[t,0) for t < 0.
  std::int64_t nu(double t) const;
  // Counts in (x, x+t] and (x-t, x].
  std::int64_t n_plus(double x, double t) const;
  std::int64_t n_minus(double x, double t) const;
  // m(x, r): points in the closed disc of radius r about real x.
  std::int64_t disc_count(double x, double r) const;

  CountingSnapshot counting_snapshot(Complex center) const;

  // Sorted positive values / sorted-by-value full array (real mode).
  const std::vector<double>& sorted_values() const { return vals_; }
  const std::vector<std::int64_t>& sorted_value_mult_prefix() const { return cum_; }

 private:
  ZeroSequence() = default;
  void finalize();

  std::vector<ZeroPoint> points_;  // by (|value|, arg)
  double radius_ = 0.0;
  std::optional<double> density_;
  bool even_ = false;
  bool real_ = false;
  std::optional<double> m0_;
  TailModel tail_;
  std::int64_t total_mult_ = 0;

  // real mode: values sorted ascending with multiplicity prefix sums
  std::vector<double> vals_;
  std::vector<std::int64_t> cum_;  // cum_[i] = multiplicity of vals_[0..i]

  friend ZeroSequence build_sequence(const SequenceSpec&, double);
  friend ZeroSequence project_real(const ZeroSequence&);
};

// Generator description; serializable to the config format documented in
// the CLI.  Union takes two children, even-closure one.
class SequenceSpec {
 public:
  enum class Kind {
    ExplicitList,
    IntegerLattice,
    Perturbed,
    Lacunary,
    Union,
    EvenClosure,
    ComplexPerturbed,
  };
  // ln(1+t^2) | ln^2 t | constant shift
  enum class Offset { Log1pSq, LogSq, Const };
  enum class ImagOffset { Log1p };  // ln(1+t)

  Kind kind = Kind::IntegerLattice;

  // ExplicitList
  std::vector<ZeroPoint> points;
  // Perturbed: lambda_j = j + l(|j|), j in Z\{0} (or j >= 1 when one-sided)
  Offset offset = Offset::Log1pSq;
  double shift = 0.0;  // Offset::Const
  bool positive_side_only = false;
  // Lacunary: +-q^k, or +-e^{sqrt k} when exp_sqrt is set
  double ratio = 2.0;
  bool exp_sqrt = false;
  // IntegerLattice: optionally drop +-q^k (q > 1) from the lattice
  double exclude_lacunary_ratio = 0.0;
  // ComplexPerturbed: mu_j = j + i f(|j|)
  ImagOffset imag_offset = ImagOffset::Log1p;
  // every point of index 2^k gets multiplicity ceil(ln^2 2^k)
  bool inflate_dyadic = false;
  // children: Union -> {a, b}; EvenClosure -> {inner}
  std::vector<SequenceSpec> children;

  void validate() const;  // throws std::invalid_argument

  static SequenceSpec explicit_list(std::vector<ZeroPoint> pts);
  static SequenceSpec integer_lattice(double exclude_ratio = 0.0);
  static SequenceSpec perturbed(Offset off, bool positive_only = false, double shift = 0.0);
  static SequenceSpec lacunary(double q);
  static SequenceSpec lacunary_exp_sqrt();
  static SequenceSpec union_of(SequenceSpec a, SequenceSpec b);
  static SequenceSpec even_closure(SequenceSpec inner);
  static SequenceSpec complex_perturbed(ImagOffset off, bool positive_only = false,
                                        bool inflate = false);
};

// Materializes every generator point of modulus <= radius.
ZeroSequence build_sequence(const SequenceSpec& spec, double radius);

// Signed one-dimensional count; |t| must be within the radius, real mode only.
std::int64_t nu(const ZeroSequence& seq, double t);
std::int64_t n_plus(const ZeroSequence& seq, double x, double t);
std::int64_t n_minus(const ZeroSequence& seq, double x, double t);
CountingSnapshot counting_snapshot(const ZeroSequence& seq, Complex center);

struct DensityEstimate {
  double delta = 0.0;   // half-line density Delta
  double spread = 0.0;  // half the 10-90 percentile spread of the ratio samples
  bool exact = false;
  std::string method;
};

// Generator-exact Delta when known; otherwise median of j/|lambda_j| over the
// last decade of materialized points, halved.  Requires >= 100 points.
DensityEstimate density_estimate(const ZeroSequence& seq);

// {Re mu_j} with multiplicities preserved, re-sorted by modulus.  Throws if
// some Re mu_j == 0.
ZeroSequence project_real(const ZeroSequence& seq);

}  // namespace slowdec
