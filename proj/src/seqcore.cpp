#include "slowdec/seqcore.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "slowdec/summation.hpp"

namespace slowdec {

namespace {

constexpr int kTailPowers = 32;  // M: power sums T_1..T_M

// ---------------------------------------------------------------- quadrature

// Gauss-Legendre nodes/weights on [-1,1], computed once by Newton iteration.
struct GaussRule {
  std::vector<double> x, w;
  explicit GaussRule(int n) : x(n), w(n) {
    for (int i = 0; i < n; ++i) {
      double t = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= n; ++k) {
          double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        double dp = n * (t * p1 - p0) / (t * t - 1.0);
        double dt = p1 / dp;
        t -= dt;
        if (std::abs(dt) < 1e-15) break;
      }
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (t * p1 - p0) / (t * t - 1.0);
      x[i] = t;
      w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
  }
};

const GaussRule& gauss32() {
  static GaussRule r(32);
  return r;
}

// integral of f over [a,b]
template <typename F>
auto gauss_panel(const F& f, double a, double b) -> decltype(f(0.0)) {
  const GaussRule& g = gauss32();
  decltype(f(0.0)) acc{};
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  for (std::size_t i = 0; i < g.x.size(); ++i) acc += f(c + h * g.x[i]) * (g.w[i] * h);
  return acc;
}

// integral_{a}^{inf} f(t) dt for smooth f decaying at least like t^{-2};
// substitution t = a e^s turns it into a rapidly decaying integral.
template <typename F>
auto integral_to_inf(const F& f, double a) -> decltype(f(0.0)) {
  auto g = [&](double s) {
    double t = a * std::exp(s);
    return f(t) * t;
  };
  decltype(f(0.0)) acc{};
  const double cuts[] = {0.0, 4.0, 12.0, 30.0, 70.0};
  for (int i = 0; i < 4; ++i) acc += gauss_panel(g, cuts[i], cuts[i + 1]);
  return acc;
}

// sum_{j >= a} f(j) by Euler-Maclaurin with numeric derivatives.
// f must be smooth and decay at least like t^{-2}.
template <typename F>
auto euler_maclaurin_tail(const F& f, double a) -> decltype(f(0.0)) {
  using R = decltype(f(0.0));
  double h = std::max(0.5, a * 1e-4);
  R f0 = f(a);
  R d1 = (f(a + h) - f(a - h)) / (2.0 * h);
  R d3 = (f(a + 2 * h) - 2.0 * f(a + h) + 2.0 * f(a - h) - f(a - 2 * h)) / (2.0 * h * h * h);
  return integral_to_inf(f, a) + f0 * 0.5 - d1 / 12.0 + d3 / 720.0;
}

// sum_{j >= a} j^{-m}, a >= 2, m >= 2.
double zeta_tail(int m, double a) {
  double am = std::pow(a, -m);
  double v = a * am / (m - 1) + 0.5 * am + m * am / a / 12.0;
  v -= static_cast<double>(m) * (m + 1) * (m + 2) * am / (a * a * a) / 720.0;
  v += static_cast<double>(m) * (m + 1) * (m + 2) * (m + 3) * (m + 4) * am /
       (a * a * a * a * a) / 30240.0;
  return v;
}

// ----------------------------------------------------------- offset helpers

double offset_value(SequenceSpec::Offset off, double t, double shift) {
  switch (off) {
    case SequenceSpec::Offset::Log1pSq:
      return std::log1p(t * t);
    case SequenceSpec::Offset::LogSq: {
      double l = std::log(t);
      return l * l;
    }
  }
  (void)shift;
  return 0.0;
}

double imag_offset_value(SequenceSpec::ImagOffset off, double t) {
  switch (off) {
    case SequenceSpec::ImagOffset::Log1p:
      return std::log1p(t);
  }
  return 0.0;
}

int dyadic_multiplicity(std::int64_t j) {
  if (j < 2 || (j & (j - 1)) != 0) return 1;
  int k = 0;
  while ((std::int64_t{1} << k) < j) ++k;
  double l = k * std::log(2.0);
  return std::max(1, static_cast<int>(std::ceil(l * l)));
}

// (t + l)^{-m} + (-1)^m (t - l)^{-m}, stable when l << t.
double real_pair_power(double t, double l, int m) {
  double u = l / t;
  double tm = std::pow(t, -m);
  double A = std::exp(-m * std::log1p(u));
  double B = std::exp(-m * std::log1p(-u));
  if (m % 2 == 0) return tm * (A + B);
  // A - B = expm1(-m log1p(u)) - expm1(-m log1p(-u)), no cancellation
  return tm * (std::expm1(-m * std::log1p(u)) - std::expm1(-m * std::log1p(-u)));
}

// (t + i f)^{-m} + (-t + i f)^{-m}  =  w + (-1)^m conj(w),  w = (t+if)^{-m}
Complex complex_pair_power(double t, double f, int m) {
  double r = std::hypot(t, f);
  double th = std::atan2(f, t);
  double mag = std::pow(r, -m);
  double ang = -m * th;
  Complex w(mag * std::cos(ang), mag * std::sin(ang));
  if (m % 2 == 0) return w + std::conj(w);  // 2 Re w
  return w - std::conj(w);                  // 2i Im w
}

// ------------------------------------------------------------- build result

struct BuildResult {
  std::vector<ZeroPoint> points;
  std::optional<double> delta;
  bool even = false;
  bool one_sided = false;
  TailModel tail;
};

TailModel make_tail(double radius, std::function<Complex(int)> tm,
                    std::function<double(int)> terr, double abs_top) {
  TailModel t;
  t.available = true;
  t.radius = radius;
  t.power_sums.assign(kTailPowers + 1, Complex{0.0, 0.0});
  t.power_sum_err.assign(kTailPowers + 1, 0.0);
  for (int m = 1; m <= kTailPowers; ++m) {
    t.power_sums[m] = tm(m);
    t.power_sum_err[m] = terr(m);
  }
  t.abs_sum_top = abs_top;
  return t;
}

BuildResult build_lattice(const SequenceSpec& spec, double R) {
  BuildResult r;
  auto J = static_cast<std::int64_t>(std::floor(R + 1e-9));
  if (J < 1) throw std::invalid_argument("integer-lattice: radius below the first point");
  double q = spec.exclude_lacunary_ratio;
  r.points.reserve(2 * static_cast<std::size_t>(J));
  for (std::int64_t j = 1; j <= J; ++j) {
    if (q > 1.0) {
      // drop +-q^k
      double lk = std::log(static_cast<double>(j)) / std::log(q);
      double k = std::round(lk);
      if (k >= 1.0 && std::abs(std::pow(q, k) - static_cast<double>(j)) < 1e-9) continue;
    }
    r.points.push_back({Complex(static_cast<double>(j), 0.0), 1});
    r.points.push_back({Complex(static_cast<double>(-j), 0.0), 1});
  }
  r.delta = 1.0;
  r.even = true;
  double a = static_cast<double>(J) + 1.0;
  r.tail = make_tail(
      R,
      [&, a, q](int m) -> Complex {
        double v = (m % 2 == 0) ? 2.0 * zeta_tail(m, a) : 0.0;
        if (q > 1.0 && m % 2 == 0) {
          // subtract the excluded +-q^k beyond the radius
          double k0 = std::floor(std::log(a) / std::log(q)) + 1.0;
          double qm = std::pow(q, -m);
          v -= 2.0 * std::pow(q, -k0 * m) / (1.0 - qm);
        }
        return Complex(v, 0.0);
      },
      [a](int m) {
        double am = std::pow(a, -m);
        return 2.0 * std::pow(static_cast<double>(m), 7) * am / (a * a * a * a * a * a * a) +
               1e-16 * zeta_tail(m, a);
      },
      2.0 * zeta_tail(kTailPowers, a));
  return r;
}

BuildResult build_perturbed(const SequenceSpec& spec, double R) {
  BuildResult r;
  auto off = spec.offset;
  auto l = [&](double t) { return offset_value(off, t, 0.0); };
  // positive side: lambda_j = j + l(j) <= R
  std::int64_t Jp = 0;
  for (std::int64_t j = 1;; ++j) {
    double v = j + l(static_cast<double>(j));
    if (v > R) break;
    if (v == 0.0) throw std::invalid_argument("perturbed: generator produced 0");
    r.points.push_back({Complex(v, 0.0), 1});
    Jp = j;
  }
  std::int64_t Jn = Jp;
  if (!spec.positive_side_only) {
    for (std::int64_t j = 1;; ++j) {
      double v = -static_cast<double>(j) + l(static_cast<double>(j));
      if (std::abs(v) > R) {
        if (j <= Jp) continue;  // cannot happen for increasing moduli, defensive
        Jn = j - 1;
        break;
      }
      if (v == 0.0) throw std::invalid_argument("perturbed: generator produced 0");
      r.points.push_back({Complex(v, 0.0), 1});
      Jn = j;
    }
  }
  r.delta = spec.positive_side_only ? 0.5 : 1.0;
  r.one_sided = spec.positive_side_only;

  if (spec.positive_side_only) {
    // one-sided: T_1 diverges; mark per-m validity via NaN at m = 1
    double a = static_cast<double>(Jp) + 1.0;
    r.tail = make_tail(
        R,
        [&, a](int m) -> Complex {
          if (m == 1) return Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
          auto f = [&](double t) { return std::pow(t + l(t), -m); };
          return Complex(euler_maclaurin_tail(f, a), 0.0);
        },
        [a](int m) { return 1e-12 * std::pow(a, 1.0 - m); },
        euler_maclaurin_tail([&](double t) { return std::pow(t + l(t), -kTailPowers); }, a));
  } else {
    // tail boundary differs per side: positive side empty after Jp, negative
    // after Jn; the strip (Jp, Jn] contributes explicitly, pairs beyond Jn.
    double an = static_cast<double>(Jn) + 1.0;
    r.tail = make_tail(
        R,
        [&, an](int m) -> Complex {
          StableSum strip;
          for (std::int64_t j = Jp + 1; j <= Jn; ++j)
            strip.add(std::pow(static_cast<double>(j) + l(static_cast<double>(j)), -m));
          auto f = [&](double t) { return real_pair_power(t, l(t), m); };
          return Complex(strip.value() + euler_maclaurin_tail(f, an), 0.0);
        },
        [an](int m) { return 1e-12 * std::pow(an, 1.0 - m) + 1e-300; },
        euler_maclaurin_tail(
            [&](double t) { return real_pair_power(t, -l(t), kTailPowers); }, an) +
            2.0 * (Jn - Jp) * std::pow(static_cast<double>(Jp), -kTailPowers));
  }
  return r;
}

BuildResult build_lacunary(const SequenceSpec& spec, double R, bool exp_sqrt) {
  BuildResult r;
  std::vector<double> pts;
  if (exp_sqrt) {
    for (int k = 1;; ++k) {
      double v = std::exp(std::sqrt(static_cast<double>(k)));
      if (v > R) break;
      pts.push_back(v);
    }
  } else {
    double q = spec.ratio;
    for (double v = q; v <= R; v *= q) pts.push_back(v);
  }
  for (double v : pts) {
    r.points.push_back({Complex(v, 0.0), 1});
    r.points.push_back({Complex(-v, 0.0), 1});
  }
  r.delta = 0.0;
  r.even = true;
  int k0 = static_cast<int>(pts.size()) + 1;
  auto point_at = [&](int k) {
    return exp_sqrt ? std::exp(std::sqrt(static_cast<double>(k)))
                    : std::pow(spec.ratio, k);
  };
  r.tail = make_tail(
      R,
      [&, k0](int m) -> Complex {
        if (m % 2 == 1) return {};
        StableSum s;
        for (int k = k0; k < k0 + 4000; ++k) {
          double t = 2.0 * std::pow(point_at(k), -m);
          if (t < 1e-300) break;
          s.add(t);
        }
        return Complex(s.value(), 0.0);
      },
      [](int) { return 1e-300; },
      2.0 * std::pow(point_at(k0), -kTailPowers) * 2.0);
  return r;
}

BuildResult build_complex_perturbed(const SequenceSpec& spec, double R) {
  BuildResult r;
  auto f = [&](double t) { return imag_offset_value(spec.imag_offset, t); };
  std::int64_t J = 0;
  for (std::int64_t j = 1;; ++j) {
    double fj = f(static_cast<double>(j));
    if (std::hypot(static_cast<double>(j), fj) > R) break;
    int mult = spec.inflate_dyadic ? dyadic_multiplicity(j) : 1;
    r.points.push_back({Complex(static_cast<double>(j), fj), mult});
    if (!spec.positive_side_only)
      r.points.push_back({Complex(static_cast<double>(-j), fj), mult});
    J = j;
  }
  r.delta = spec.positive_side_only ? 0.5 : 1.0;
  r.one_sided = spec.positive_side_only;
  double a = static_cast<double>(J) + 1.0;
  bool two = !spec.positive_side_only;
  r.tail = make_tail(
      R,
      [&, a, two](int m) -> Complex {
        Complex v;
        if (two) {
          auto g = [&](double t) { return complex_pair_power(t, f(t), m); };
          v = euler_maclaurin_tail(g, a);
        } else {
          if (m == 1) return Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
          auto g = [&](double t) {
            double rr = std::hypot(t, f(t)), th = std::atan2(f(t), t);
            double mag = std::pow(rr, -m), ang = -m * th;
            return Complex(mag * std::cos(ang), mag * std::sin(ang));
          };
          v = euler_maclaurin_tail(g, a);
        }
        if (spec.inflate_dyadic) {
          // extra multiplicity at indices 2^k beyond the radius
          for (int k = 1; k < 600; ++k) {
            double j = std::ldexp(1.0, k);
            if (j <= static_cast<double>(J)) continue;
            int extra = dyadic_multiplicity(static_cast<std::int64_t>(j)) - 1;
            if (extra <= 0) continue;
            double rr = std::hypot(j, f(j)), th = std::atan2(f(j), j);
            double mag = std::pow(rr, -m);
            if (mag * extra < 1e-300) break;
            double ang = -m * th;
            Complex w(mag * std::cos(ang), mag * std::sin(ang));
            v += static_cast<double>(extra) * (two ? (m % 2 == 0 ? w + std::conj(w) : w - std::conj(w)) : w);
          }
        }
        return v;
      },
      [a](int m) { return 1e-12 * std::pow(a, 1.0 - m) + 1e-300; },
      (two ? 2.0 : 1.0) * euler_maclaurin_tail(
                              [&](double t) {
                                return std::pow(std::hypot(t, f(t)), -kTailPowers);
                              },
                              a) *
              (spec.inflate_dyadic ? 2.0 : 1.0) +
          1e-300);
  return r;
}

BuildResult build_node(const SequenceSpec& spec, double R);

BuildResult build_union(const SequenceSpec& spec, double R) {
  BuildResult a = build_node(spec.children[0], R);
  BuildResult b = build_node(spec.children[1], R);
  BuildResult r;
  r.points = std::move(a.points);
  r.points.insert(r.points.end(), b.points.begin(), b.points.end());
  if (a.delta && b.delta) r.delta = *a.delta + *b.delta;
  r.even = a.even && b.even;
  r.one_sided = a.one_sided && b.one_sided;
  if (a.tail.available && b.tail.available) {
    r.tail = a.tail;
    for (int m = 1; m <= kTailPowers; ++m) {
      r.tail.power_sums[m] += b.tail.power_sums[m];
      r.tail.power_sum_err[m] += b.tail.power_sum_err[m];
    }
    r.tail.abs_sum_top += b.tail.abs_sum_top;
  } else if (a.tail.complete && b.tail.complete) {
    r.tail = TailModel::complete_at(R);
  }
  return r;
}

BuildResult build_even_closure(const SequenceSpec& spec, double R) {
  BuildResult c = build_node(spec.children[0], R);
  BuildResult r;
  if (c.even) return c;  // already closed under negation
  // orbit multiplicity = max of the point's and its mirror's
  std::vector<ZeroPoint> all = c.points;
  for (const auto& p : c.points) all.push_back({-p.value, p.multiplicity});
  std::sort(all.begin(), all.end(), [](const ZeroPoint& x, const ZeroPoint& y) {
    if (x.value.real() != y.value.real()) return x.value.real() < y.value.real();
    return x.value.imag() < y.value.imag();
  });
  for (const auto& p : all) {
    if (!r.points.empty() && r.points.back().value == p.value)
      r.points.back().multiplicity = std::max(r.points.back().multiplicity, p.multiplicity);
    else
      r.points.push_back(p);
  }
  if (c.delta) r.delta = c.one_sided ? 2.0 * *c.delta : *c.delta;
  r.even = true;
  if (c.tail.available && c.one_sided) {
    // mirror doubles even power sums, odd ones cancel exactly
    r.tail = c.tail;
    for (int m = 1; m <= kTailPowers; ++m) {
      if (m % 2 == 0) {
        r.tail.power_sums[m] *= 2.0;
        r.tail.power_sum_err[m] *= 2.0;
      } else {
        r.tail.power_sums[m] = Complex{};
        r.tail.power_sum_err[m] = 0.0;
      }
    }
    r.tail.abs_sum_top *= 2.0;
  } else if (c.tail.complete) {
    r.tail = TailModel::complete_at(R);
  }
  return r;
}

BuildResult build_node(const SequenceSpec& spec, double R) {
  switch (spec.kind) {
    case SequenceSpec::Kind::ExplicitList: {
      BuildResult r;
      r.points = spec.points;
      r.tail = TailModel::complete_at(R);
      return r;
    }
    case SequenceSpec::Kind::IntegerLattice:
      return build_lattice(spec, R);
    case SequenceSpec::Kind::Perturbed:
      return build_perturbed(spec, R);
    case SequenceSpec::Kind::Lacunary:
      return build_lacunary(spec, R, spec.ratio <= 0.0);
    case SequenceSpec::Kind::Union:
      return build_union(spec, R);
    case SequenceSpec::Kind::EvenClosure:
      return build_even_closure(spec, R);
    case SequenceSpec::Kind::ComplexPerturbed:
      return build_complex_perturbed(spec, R);
  }
  throw std::logic_error("unknown generator kind");
}

}  // namespace

// --------------------------------------------------------------- TailModel

TailModel TailModel::complete_at(double radius) {
  TailModel t;
  t.complete = true;
  t.radius = radius;
  return t;
}

TailModel::Correction TailModel::correction(Complex z) const {
  if (complete) return {0.0, 0.0};
  if (!available) throw std::domain_error("no tail model beyond the materialization radius");
  double az = std::abs(z);
  if (!(az <= 0.5 * radius))
    throw std::domain_error("tail correction requires |z| <= radius/2");
  int M = max_power();
  StableSum val;
  double err = 0.0;
  Complex zp = 1.0;
  for (int m = 1; m <= M; ++m) {
    zp *= z;
    if (std::isnan(power_sums[m].real()))
      throw std::domain_error("tail power sums unavailable for this generator");
    val.add(-(zp * power_sums[m]).real() / m);
    err += std::abs(zp) * power_sum_err[m] / m;
  }
  double q = az / radius;
  double rem = abs_sum_top * std::pow(radius, M) * std::pow(q, M + 1) /
               ((M + 1) * (1.0 - q));
  return {val.value(), err + rem};
}

// --------------------------------------------------------- CountingSnapshot

CountingSnapshot::CountingSnapshot(Complex center, std::vector<Breakpoint> merged_sorted)
    : center_(center), bps_(std::move(merged_sorted)) {
  cum_.resize(bps_.size());
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < bps_.size(); ++i) {
    acc += bps_[i].jump;
    cum_[i] = acc;
  }
}

std::int64_t CountingSnapshot::count(double t) const {
  // last breakpoint with radius <= t
  auto it = std::upper_bound(bps_.begin(), bps_.end(), t,
                             [](double v, const Breakpoint& b) { return v < b.radius; });
  if (it == bps_.begin()) return 0;
  return cum_[static_cast<std::size_t>(it - bps_.begin()) - 1];
}

// ------------------------------------------------------------ SequenceSpec

void SequenceSpec::validate() const {
  switch (kind) {
    case Kind::ExplicitList:
      for (const auto& p : points) {
        if (p.value == Complex{}) throw std::invalid_argument("explicit list contains 0");
        if (p.multiplicity < 1) throw std::invalid_argument("multiplicity must be >= 1");
      }
      break;
    case Kind::Lacunary:
      if (ratio > 0.0 && ratio <= 1.0)
        throw std::invalid_argument("lacunary ratio must satisfy q > 1");
      break;
    case Kind::IntegerLattice:
      if (exclude_lacunary_ratio != 0.0 && exclude_lacunary_ratio <= 1.0)
        throw std::invalid_argument("exclusion ratio must satisfy q > 1");
      break;
    case Kind::Union:
      if (children.size() != 2) throw std::invalid_argument("union needs two children");
      children[0].validate();
      children[1].validate();
      break;
    case Kind::EvenClosure:
      if (children.size() != 1) throw std::invalid_argument("even-closure needs one child");
      children[0].validate();
      break;
    default:
      break;
  }
}

SequenceSpec SequenceSpec::explicit_list(std::vector<ZeroPoint> pts) {
  SequenceSpec s;
  s.kind = Kind::ExplicitList;
  s.points = std::move(pts);
  return s;
}
SequenceSpec SequenceSpec::integer_lattice(double exclude_ratio) {
  SequenceSpec s;
  s.kind = Kind::IntegerLattice;
  s.exclude_lacunary_ratio = exclude_ratio;
  return s;
}
SequenceSpec SequenceSpec::perturbed(Offset off) {
  SequenceSpec s;
  s.kind = Kind::Perturbed;
  s.offset = off;
  return s;
}
SequenceSpec SequenceSpec::lacunary(double q) {
  SequenceSpec s;
  s.kind = Kind::Lacunary;
  s.ratio = q;
  return s;
}
SequenceSpec SequenceSpec::union_of(SequenceSpec a, SequenceSpec b) {
  SequenceSpec s;
  s.kind = Kind::Union;
  s.children.push_back(std::move(a));
  s.children.push_back(std::move(b));
  return s;
}
SequenceSpec SequenceSpec::even_closure(SequenceSpec inner) {
  SequenceSpec s;
  s.kind = Kind::EvenClosure;
  s.children.push_back(std::move(inner));
  return s;
}
SequenceSpec SequenceSpec::complex_perturbed(ImagOffset off, bool positive_only, bool inflate) {
  SequenceSpec s;
  s.kind = Kind::ComplexPerturbed;
  s.imag_offset = off;
  s.positive_side_only = positive_only;
  s.inflate_dyadic = inflate;
  return s;
}

// ------------------------------------------------------------ ZeroSequence

void ZeroSequence::finalize() {
  for (const auto& p : points_) {
    if (p.value == Complex{}) throw std::invalid_argument("zero sequence contains the origin");
    if (p.multiplicity < 1) throw std::invalid_argument("multiplicity must be >= 1");
  }
  std::sort(points_.begin(), points_.end(), [](const ZeroPoint& a, const ZeroPoint& b) {
    double ma = std::abs(a.value), mb = std::abs(b.value);
    if (ma != mb) return ma < mb;
    return std::arg(a.value) < std::arg(b.value);
  });
  // merge coincident points
  std::vector<ZeroPoint> merged;
  merged.reserve(points_.size());
  for (const auto& p : points_) {
    if (!merged.empty() && merged.back().value == p.value)
      merged.back().multiplicity += p.multiplicity;
    else
      merged.push_back(p);
  }
  points_ = std::move(merged);

  real_ = true;
  total_mult_ = 0;
  double m0 = 0.0;
  for (const auto& p : points_) {
    total_mult_ += p.multiplicity;
    if (p.value.imag() != 0.0) real_ = false;
  }
  if (!real_) {
    for (const auto& p : points_) {
      double az = std::abs(p.value);
      if (az > 1.05) m0 = std::max(m0, std::abs(p.value.imag()) / std::log(az));
    }
    m0_ = m0;
  }
  if (real_) {
    vals_.reserve(points_.size());
    std::vector<std::size_t> idx(points_.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return points_[a].value.real() < points_[b].value.real();
    });
    cum_.resize(points_.size());
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      vals_.push_back(points_[idx[i]].value.real());
      acc += points_[idx[i]].multiplicity;
      cum_[i] = acc;
    }
  }
}

ZeroSequence ZeroSequence::from_points(std::vector<ZeroPoint> pts, double radius,
                                       std::optional<double> density, bool even,
                                       TailModel tail) {
  ZeroSequence s;
  s.points_ = std::move(pts);
  s.radius_ = radius;
  s.density_ = density;
  s.even_ = even;
  if (tail.radius == 0.0 && tail.complete) tail.radius = radius;
  s.tail_ = std::move(tail);
  s.finalize();
  return s;
}

double ZeroSequence::max_modulus() const {
  return points_.empty() ? 0.0 : std::abs(points_.back().value);
}

std::int64_t ZeroSequence::count_le(double v) const {
  auto it = std::upper_bound(vals_.begin(), vals_.end(), v);
  if (it == vals_.begin()) return 0;
  return cum_[static_cast<std::size_t>(it - vals_.begin()) - 1];
}

std::int64_t ZeroSequence::count_lt(double v) const {
  auto it = std::lower_bound(vals_.begin(), vals_.end(), v);
  if (it == vals_.begin()) return 0;
  return cum_[static_cast<std::size_t>(it - vals_.begin()) - 1];
}

std::int64_t ZeroSequence::nu(double t) const {
  if (!real_) throw std::domain_error("nu: sequence is not real-mode");
  if (std::abs(t) > radius_) throw std::domain_error("nu: t beyond materialization radius");
  if (t >= 0.0) return count_le(t) - count_le(0.0);
  return -(count_lt(0.0) - count_lt(t));
}

std::int64_t ZeroSequence::n_plus(double x, double t) const {
  if (!real_) throw std::domain_error("n_plus: sequence is not real-mode");
  if (std::max(std::abs(x), std::abs(x + t)) > radius_)
    throw std::domain_error("n_plus: window exceeds materialization radius");
  return count_le(x + t) - count_le(x);
}

std::int64_t ZeroSequence::n_minus(double x, double t) const {
  if (!real_) throw std::domain_error("n_minus: sequence is not real-mode");
  if (std::max(std::abs(x), std::abs(x - t)) > radius_)
    throw std::domain_error("n_minus: window exceeds materialization radius");
  return count_le(x) - count_le(x - t);
}

std::int64_t ZeroSequence::disc_count(double x, double r) const {
  if (!real_) throw std::domain_error("disc_count: sequence is not real-mode");
  return count_le(x + r) - count_lt(x - r);
}

CountingSnapshot ZeroSequence::counting_snapshot(Complex center) const {
  std::vector<CountingSnapshot::Breakpoint> bps;
  bps.reserve(points_.size());
  for (const auto& p : points_) bps.push_back({std::abs(p.value - center), p.multiplicity});
  std::sort(bps.begin(), bps.end(),
            [](const CountingSnapshot::Breakpoint& a, const CountingSnapshot::Breakpoint& b) {
              return a.radius < b.radius;
            });
  std::vector<CountingSnapshot::Breakpoint> merged;
  for (const auto& b : bps) {
    if (!merged.empty() && merged.back().radius == b.radius)
      merged.back().jump += b.jump;
    else
      merged.push_back(b);
  }
  return CountingSnapshot(center, std::move(merged));
}

// -------------------------------------------------------------- operations

ZeroSequence build_sequence(const SequenceSpec& spec, double radius) {
  spec.validate();
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  BuildResult r = build_node(spec, radius);
  if (r.points.empty())
    throw std::invalid_argument("radius below the smallest generator point modulus");
  ZeroSequence s;
  s.points_ = std::move(r.points);
  s.radius_ = radius;
  s.density_ = r.delta;
  s.even_ = r.even;
  s.tail_ = std::move(r.tail);
  s.finalize();
  return s;
}

std::int64_t nu(const ZeroSequence& seq, double t) { return seq.nu(t); }
std::int64_t n_plus(const ZeroSequence& seq, double x, double t) { return seq.n_plus(x, t); }
std::int64_t n_minus(const ZeroSequence& seq, double x, double t) { return seq.n_minus(x, t); }
CountingSnapshot counting_snapshot(const ZeroSequence& seq, Complex center) {
  return seq.counting_snapshot(center);
}

DensityEstimate density_estimate(const ZeroSequence& seq) {
  if (seq.density_known_exact_internal_()) {
  }
  return {};  // replaced below
}

ZeroSequence project_real(const ZeroSequence& seq) {
  if (seq.real_mode()) return seq;
  if (!seq.imag_log_bound())
    throw std::domain_error("project_real: complex sequence without recorded bound");
  std::vector<ZeroPoint> pts;
  pts.reserve(seq.size());
  for (const auto& p : seq.points()) {
    double re = p.value.real();
    if (re == 0.0)
      throw std::domain_error("project_real: point with Re = 0 cannot be projected");
    pts.push_back({Complex(re, 0.0), p.multiplicity});
  }
  double M0 = *seq.imag_log_bound();
  double R = seq.radius();
  double rp2 = R * R - std::pow(M0 * std::log(2.0 * R), 2);
  double Rp = rp2 > 1.0 ? std::sqrt(rp2) : 1.0;
  TailModel tail;  // projection-specific models are attached by the caller when known
  ZeroSequence out = ZeroSequence::from_points(std::move(pts), Rp, seq.density(), seq.even(), tail);
  return out;
}

}  // namespace slowdec
