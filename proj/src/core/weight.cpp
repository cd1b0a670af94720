#include "core/weight.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace g2k {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

double binomial(int n, int k) {
  double b = 1.0;
  for (int j = 1; j <= k; ++j) b *= double(n - k + j) / double(j);
  return b;
}

// One monomial-exponential started at a shift; weights decompose into
// these for convolution and piecewise analysis.
struct Atom {
  Complex coeff;
  Complex decay;
  int power;
  double shift;
};

void append_term_atoms(const WeightTerm& t, std::vector<Atom>& out) {
  out.push_back({t.coeff, t.decay, t.power, t.shift});
  if (!t.windowed()) return;
  // Cancel the tail beyond the window end: re-expand the piece around
  // u = t.end and subtract.
  const double len = t.end - t.shift;
  const Complex damp = std::exp(-t.decay * len);
  for (int k = 0; k <= t.power; ++k) {
    Complex c = -t.coeff * damp * binomial(t.power, k) *
                std::pow(len, double(t.power - k));
    out.push_back({c, t.decay, k, t.end});
  }
}

bool close_complex(Complex a, Complex b, double tol) {
  return std::abs(a - b) <= tol * (1.0 + std::abs(a) + std::abs(b));
}

}  // namespace

Complex incomplete_power_integral(int power, Complex w, double upper) {
  require(power >= 0, ErrorCode::InvalidArgument, "negative power");
  if (upper == 0.0) return 0.0;
  if (!std::isfinite(upper)) {
    require(w.real() > 0.0, ErrorCode::DomainError,
            "divergent integral: nonpositive decay on infinite range");
    return factorial(power) / std::pow(w, double(power + 1));
  }
  if (w == Complex(0.0, 0.0)) {
    return std::pow(upper, double(power + 1)) / double(power + 1);
  }
  const Complex x = w * upper;
  if (std::abs(x) < double(power) + 12.0) {
    // gamma-series form, stable for small |x|
    Complex sum = 0.0;
    Complex term = factorial(power) / factorial(power + 1);
    int k = 0;
    while (true) {
      sum += term;
      ++k;
      term *= x / double(power + 1 + k);
      if (std::abs(term) < 1e-18 * (1.0 + std::abs(sum)) || k > 400) break;
    }
    return std::pow(upper, double(power + 1)) * std::exp(-x) * sum;
  }
  Complex partial = 0.0;
  Complex xj = 1.0;
  for (int j = 0; j <= power; ++j) {
    partial += xj / factorial(j);
    xj *= x;
  }
  const Complex bracket = 1.0 - std::exp(-x) * partial;
  return factorial(power) / std::pow(w, double(power + 1)) * bracket;
}

Weight Weight::expo(Complex coeff, Complex decay, int power, double shift) {
  Weight w;
  WeightTerm t;
  t.coeff = coeff;
  t.decay = decay;
  t.power = power;
  t.shift = shift;
  w.add_term(t);
  return w;
}

Weight Weight::indicator(Complex coeff, double a, double b) {
  require(a >= 0.0 && a < b && std::isfinite(b), ErrorCode::InvalidArgument,
          "indicator interval must satisfy 0 <= a < b < inf");
  Weight w;
  WeightTerm t;
  t.coeff = coeff;
  t.decay = 0.0;
  t.power = 0;
  t.shift = a;
  t.end = b;
  w.add_term(t);
  return w;
}

void Weight::add_term(const WeightTerm& term) {
  require(term.power >= 0, ErrorCode::InvalidArgument, "term power < 0");
  require(term.shift >= 0.0 && std::isfinite(term.shift),
          ErrorCode::InvalidArgument, "term shift must be finite and >= 0");
  require(term.end > term.shift, ErrorCode::InvalidArgument,
          "term end must exceed shift");
  require(std::isfinite(term.coeff.real()) && std::isfinite(term.coeff.imag()),
          ErrorCode::InvalidArgument, "non-finite coefficient");
  if (!term.windowed()) {
    require(term.decay.real() > 0.0, ErrorCode::InvalidArgument,
            "unwindowed term needs Re(decay) > 0 for integrability");
  }
  if (term.coeff == Complex(0.0, 0.0)) return;
  terms_.push_back(term);
}

Complex Weight::eval(double t) const {
  if (t < 0.0) return 0.0;
  Complex v = 0.0;
  for (const auto& term : terms_) {
    if (t < term.shift || t >= term.end) continue;
    const double u = t - term.shift;
    v += term.coeff * std::pow(u, double(term.power)) * std::exp(-term.decay * u);
  }
  return v;
}

Complex Weight::laplace(Complex z) const {
  require(z.real() >= 0.0, ErrorCode::DomainError,
          "Laplace transform requires Re z >= 0");
  Complex total = 0.0;
  for (const auto& term : terms_) {
    const Complex w = term.decay + z;
    const double len = term.windowed() ? term.end - term.shift : kInf;
    if (!std::isfinite(len)) {
      require(w.real() > 0.0, ErrorCode::DomainError,
              "Laplace transform divergent at Re z = 0 for this weight");
    }
    total += term.coeff * std::exp(-z * term.shift) *
             incomplete_power_integral(term.power, w, len);
  }
  return total;
}

Weight Weight::scaled(Complex s) const {
  Weight w;
  for (auto t : terms_) {
    t.coeff *= s;
    if (t.coeff != Complex(0.0, 0.0)) w.terms_.push_back(t);
  }
  return w;
}

Weight Weight::plus(const Weight& other) const {
  Weight w = *this;
  for (const auto& t : other.terms_) w.terms_.push_back(t);
  return w;
}

Weight Weight::damped(double eps) const {
  require(eps >= 0.0, ErrorCode::InvalidArgument, "negative damping");
  Weight w;
  for (auto t : terms_) {
    t.coeff *= std::exp(-eps * t.shift);
    t.decay += eps;
    w.terms_.push_back(t);
  }
  return w;
}

double Weight::support_end() const {
  double s = 0.0;
  for (const auto& t : terms_) {
    if (!t.windowed()) return kInf;
    s = std::max(s, t.end);
  }
  return s;
}

std::vector<double> Weight::breakpoints() const {
  std::vector<double> pts;
  for (const auto& t : terms_) {
    pts.push_back(t.shift);
    if (t.windowed()) pts.push_back(t.end);
  }
  std::sort(pts.begin(), pts.end());
  std::vector<double> uniq;
  for (double p : pts) {
    if (uniq.empty() || p - uniq.back() > 1e-12 * (1.0 + std::abs(p)))
      uniq.push_back(p);
  }
  return uniq;
}

Complex Weight::eval_limit(double t, bool from_right) const {
  Complex v = 0.0;
  const double tol = 1e-12 * (1.0 + std::abs(t));
  for (const auto& term : terms_) {
    bool active;
    if (from_right)
      active = term.shift <= t + tol && t < term.end - tol;
    else
      active = term.shift < t - tol && t <= term.end + tol;
    if (!active) continue;
    const double u = std::max(0.0, t - term.shift);
    v += term.coeff * std::pow(u, double(term.power)) * std::exp(-term.decay * u);
  }
  return v;
}

Complex Weight::deriv_limit(double t, bool from_right) const {
  Complex v = 0.0;
  const double tol = 1e-12 * (1.0 + std::abs(t));
  for (const auto& term : terms_) {
    bool active;
    if (from_right)
      active = term.shift <= t + tol && t < term.end - tol;
    else
      active = term.shift < t - tol && t <= term.end + tol;
    if (!active) continue;
    const double u = std::max(0.0, t - term.shift);
    const Complex e = std::exp(-term.decay * u);
    Complex d = -term.decay * std::pow(u, double(term.power));
    if (term.power > 0)
      d += double(term.power) * std::pow(u, double(term.power - 1));
    v += term.coeff * d * e;
  }
  return v;
}

// ---------------------------------------------------------------------
// Canonical piecewise form: breakpoint partition with per-interval
// exponential-polynomial groups expanded around the interval start.

namespace {

struct Group {
  Complex decay;
  int power;
  Complex coeff;
};

struct Interval {
  double start;
  double length;  // inf for the last interval
  std::vector<Group> groups;
};

struct Piecewise {
  std::vector<Interval> intervals;
  double scale = 0.0;  // max |atom coeff|, for tolerances
};

void group_add(std::vector<Group>& groups, Complex decay, int power,
               Complex coeff) {
  for (auto& g : groups) {
    if (g.power == power && close_complex(g.decay, decay, 1e-12)) {
      g.coeff += coeff;
      return;
    }
  }
  groups.push_back({decay, power, coeff});
}

Piecewise decompose(const std::vector<Atom>& atoms, bool check_integrable) {
  Piecewise pw;
  if (atoms.empty()) return pw;
  std::vector<double> pts;
  for (const auto& a : atoms) {
    pts.push_back(a.shift);
    pw.scale = std::max(pw.scale, std::abs(a.coeff));
  }
  std::sort(pts.begin(), pts.end());
  std::vector<double> bps;
  for (double p : pts) {
    if (bps.empty() || p - bps.back() > 1e-12 * (1.0 + std::abs(p)))
      bps.push_back(p);
  }

  for (size_t r = 0; r < bps.size(); ++r) {
    Interval iv;
    iv.start = bps[r];
    iv.length = (r + 1 < bps.size()) ? bps[r + 1] - bps[r] : kInf;
    for (const auto& a : atoms) {
      if (a.shift > iv.start + 1e-12 * (1.0 + std::abs(iv.start))) continue;
      const double delta = iv.start - a.shift;
      if (delta <= 0.0) {
        group_add(iv.groups, a.decay, a.power, a.coeff);
        continue;
      }
      const Complex damp = a.coeff * std::exp(-a.decay * delta);
      for (int k = 0; k <= a.power; ++k) {
        group_add(iv.groups, a.decay, k,
                  damp * binomial(a.power, k) * std::pow(delta, double(a.power - k)));
      }
    }
    // Drop numerically void groups; on the unbounded interval, groups with
    // nonpositive decay must have cancelled exactly.
    std::vector<Group> kept;
    for (auto& g : iv.groups) {
      if (std::abs(g.coeff) <= 1e-14 * (pw.scale + 1.0)) continue;
      if (!std::isfinite(iv.length) && g.decay.real() <= 0.0) {
        if (std::abs(g.coeff) <= 1e-9 * (pw.scale + 1.0)) continue;
        if (check_integrable)
          fail(ErrorCode::DomainError,
               "weight does not decay on its unbounded tail");
      }
      kept.push_back(g);
    }
    iv.groups = std::move(kept);
    if (!iv.groups.empty()) pw.intervals.push_back(iv);
  }
  return pw;
}

std::vector<Atom> to_atoms(const std::vector<WeightTerm>& terms) {
  std::vector<Atom> atoms;
  for (const auto& t : terms) append_term_atoms(t, atoms);
  return atoms;
}

Complex eval_groups(const std::vector<Group>& groups, double u) {
  Complex v = 0.0;
  for (const auto& g : groups)
    v += g.coeff * std::pow(u, double(g.power)) * std::exp(-g.decay * u);
  return v;
}

Complex integral_groups(const std::vector<Group>& groups, double a, double b) {
  Complex v = 0.0;
  for (const auto& g : groups) {
    v += g.coeff * (incomplete_power_integral(g.power, g.decay, b) -
                    incomplete_power_integral(g.power, g.decay, a));
  }
  return v;
}

// Effective horizon for an unbounded interval: beyond it the triangle
// bound on the remaining mass is below 1e-17 * scale.
double horizon(const std::vector<Group>& groups) {
  double h = 1.0;
  for (const auto& g : groups) {
    const double re = std::max(g.decay.real(), 1e-12);
    h = std::max(h, (double(g.power) + 60.0) / re);
  }
  return h;
}

// Simple adaptive Simpson for |f| on [a,b]; only exercised by weights
// that are genuinely complex-valued.
double adaptive_abs_integral(const std::vector<Group>& groups, double a,
                             double b, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double fa = std::abs(eval_groups(groups, a));
  const double fb = std::abs(eval_groups(groups, b));
  const double fm = std::abs(eval_groups(groups, m));
  const double coarse = (b - a) * (fa + 4 * fm + fb) / 6.0;
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = std::abs(eval_groups(groups, lm));
  const double frm = std::abs(eval_groups(groups, rm));
  const double fine = (b - a) * (fa + 4 * flm + 2 * fm + 4 * frm + fb) / 12.0;
  if (depth > 40 || std::abs(fine - coarse) < tol) return fine;
  return adaptive_abs_integral(groups, a, m, tol / 2, depth + 1) +
         adaptive_abs_integral(groups, m, b, tol / 2, depth + 1);
}

}  // namespace

bool Weight::is_real_function() const {
  const auto pw = decompose(to_atoms(terms_), false);
  for (const auto& iv : pw.intervals) {
    std::vector<Group> residue = iv.groups;
    // subtract the conjugate-reflected set; a real function leaves nothing
    for (const auto& g : iv.groups)
      group_add(residue, std::conj(g.decay), g.power, -std::conj(g.coeff));
    for (const auto& g : residue)
      if (std::abs(g.coeff) > 1e-10 * (pw.scale + 1.0)) return false;
  }
  return true;
}

double Weight::l1_norm() const {
  const auto pw = decompose(to_atoms(terms_), true);
  if (pw.intervals.empty()) return 0.0;
  const bool realfn = is_real_function();
  double total = 0.0;
  for (const auto& iv : pw.intervals) {
    const bool last = !std::isfinite(iv.length);
    const double len = last ? horizon(iv.groups) : iv.length;
    if (!realfn) {
      total += adaptive_abs_integral(iv.groups, 0.0, len, 1e-13 * (pw.scale + 1.0), 0);
      if (last) {
        for (const auto& g : iv.groups) {
          total += std::abs(g.coeff) *
                   std::abs(incomplete_power_integral(
                       g.power, Complex(g.decay.real(), 0.0), kInf) -
                            incomplete_power_integral(
                                g.power, Complex(g.decay.real(), 0.0), len));
        }
      }
      continue;
    }
    // Locate sign changes, then integrate exactly between them.
    double osc = 0.0;
    for (const auto& g : iv.groups) osc = std::max(osc, std::abs(g.decay.imag()));
    int nsamp = 64 + int(std::min(20000.0, std::ceil(len * (osc + 1.0) * 8.0)));
    std::vector<double> cuts{0.0};
    double prev_u = 0.0;
    double prev_f = eval_groups(iv.groups, 0.0).real();
    for (int i = 1; i <= nsamp; ++i) {
      const double u = len * double(i) / double(nsamp);
      const double f = eval_groups(iv.groups, u).real();
      if ((prev_f < 0.0 && f > 0.0) || (prev_f > 0.0 && f < 0.0)) {
        double lo = prev_u, hi = u, flo = prev_f;
        for (int it = 0; it < 80; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double fm = eval_groups(iv.groups, mid).real();
          if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
          if (hi - lo < 1e-15 * (1.0 + hi)) break;
        }
        cuts.push_back(0.5 * (lo + hi));
      }
      prev_u = u;
      prev_f = f;
    }
    cuts.push_back(len);
    for (size_t i = 0; i + 1 < cuts.size(); ++i)
      total += std::abs(integral_groups(iv.groups, cuts[i], cuts[i + 1]).real());
    if (last) {
      // beyond the horizon the sign is settled; add the exact remainder
      Complex tail = 0.0;
      for (const auto& g : iv.groups) {
        tail += g.coeff * (incomplete_power_integral(g.power, g.decay, kInf) -
                           incomplete_power_integral(g.power, g.decay, len));
      }
      total += std::abs(tail.real());
    }
  }
  return total;
}

double Weight::l2_norm_sq() const {
  const auto pw = decompose(to_atoms(terms_), true);
  double total = 0.0;
  for (const auto& iv : pw.intervals) {
    for (const auto& g : iv.groups) {
      for (const auto& h : iv.groups) {
        const Complex w = g.decay + std::conj(h.decay);
        total += (g.coeff * std::conj(h.coeff) *
                  incomplete_power_integral(g.power + h.power, w, iv.length))
                     .real();
      }
    }
  }
  return total;
}

double Weight::l1_tail_bound(double from) const {
  const auto pw = decompose(to_atoms(terms_), true);
  double bound = 0.0;
  for (const auto& iv : pw.intervals) {
    const double iv_end = iv.start + iv.length;
    if (iv_end <= from) continue;
    const double a = std::max(0.0, from - iv.start);
    const double b = std::isfinite(iv.length) ? iv.length : kInf;
    for (const auto& g : iv.groups) {
      const Complex re_decay(g.decay.real(), 0.0);
      bound += std::abs(g.coeff) *
               std::abs(incomplete_power_integral(g.power, re_decay, b) -
                        incomplete_power_integral(g.power, re_decay, a));
    }
  }
  return bound;
}

Weight convolve(const Weight& c, const Weight& d) {
  const auto ac = to_atoms(c.terms());
  const auto ad = to_atoms(d.terms());
  std::vector<Atom> out;
  for (const auto& x : ac) {
    for (const auto& y : ad) {
      const double shift = x.shift + y.shift;
      const Complex cc = x.coeff * y.coeff;
      const int p = x.power, q = y.power;
      const Complex a = x.decay, b = y.decay;
      if (close_complex(a, b, 1e-13)) {
        out.push_back({cc * factorial(p) * factorial(q) / factorial(p + q + 1),
                       a, p + q + 1, shift});
        continue;
      }
      const Complex w = a - b;
      require(std::abs(w) > 1e-7 * (1.0 + std::abs(a) + std::abs(b)),
              ErrorCode::InvalidArgument,
              "convolution of nearly-equal distinct decays is ill-conditioned");
      for (int k = 0; k <= q; ++k) {
        const int n = p + k;
        const Complex base = cc * binomial(q, k) * (k % 2 ? -1.0 : 1.0);
        out.push_back({base * factorial(n) / std::pow(w, double(n + 1)), b,
                       q - k, shift});
        for (int j = 0; j <= n; ++j) {
          out.push_back({-base * (factorial(n) / factorial(j)) /
                             std::pow(w, double(n + 1 - j)),
                         a, q - k + j, shift});
        }
      }
    }
  }
  // Reassemble the atom soup into canonical windowed pieces.
  const Piecewise pw = decompose(out, true);
  Weight result;
  for (const auto& iv : pw.intervals) {
    for (const auto& g : iv.groups) {
      WeightTerm t;
      t.coeff = g.coeff;
      t.decay = g.decay;
      t.power = g.power;
      t.shift = iv.start;
      t.end = std::isfinite(iv.length) ? iv.start + iv.length : kInf;
      result.add_term(t);
    }
  }
  return result;
}

nlohmann::json Weight::to_json() const {
  nlohmann::json terms = nlohmann::json::array();
  nlohmann::json indicators = nlohmann::json::array();
  for (const auto& t : terms_) {
    if (t.windowed() && t.power == 0 && t.decay == Complex(0.0, 0.0) &&
        t.coeff.imag() == 0.0) {
      indicators.push_back({{"coeff", t.coeff.real()}, {"a", t.shift}, {"b", t.end}});
      continue;
    }
    nlohmann::json jt = {{"coeff_re", t.coeff.real()},
                         {"coeff_im", t.coeff.imag()},
                         {"decay_re", t.decay.real()},
                         {"decay_im", t.decay.imag()},
                         {"power", t.power},
                         {"shift", t.shift}};
    if (t.windowed()) jt["end"] = t.end;
    terms.push_back(jt);
  }
  nlohmann::json j;
  if (!terms.empty()) j["terms"] = terms;
  if (!indicators.empty()) j["indicators"] = indicators;
  return j;
}

Weight Weight::from_json(const nlohmann::json& j) {
  Weight w;
  if (j.contains("terms")) {
    for (const auto& jt : j.at("terms")) {
      WeightTerm t;
      t.coeff = Complex(jt.value("coeff_re", 0.0), jt.value("coeff_im", 0.0));
      t.decay = Complex(jt.value("decay_re", 0.0), jt.value("decay_im", 0.0));
      t.power = jt.value("power", 0);
      t.shift = jt.value("shift", 0.0);
      if (jt.contains("end")) t.end = jt.at("end").get<double>();
      w.add_term(t);
    }
  }
  if (j.contains("indicators")) {
    for (const auto& ji : j.at("indicators")) {
      const double a = ji.at("a").get<double>();
      const double b = ji.at("b").get<double>();
      double coeff = ji.contains("coeff") ? ji.at("coeff").get<double>()
                                          : ji.value("coeff_re", 0.0);
      WeightTerm t;
      t.coeff = coeff;
      t.decay = 0.0;
      t.power = 0;
      t.shift = a;
      t.end = b;
      w.add_term(t);
    }
  }
  return w;
}

TensorWeight::TensorWeight(std::vector<std::pair<Weight, Weight>> pairs)
    : pairs_(std::move(pairs)) {
  require(!pairs_.empty(), ErrorCode::InvalidArgument,
          "tensor weight needs at least one pair");
}

Weight TensorWeight::to_weight() const {
  Weight b;
  for (const auto& [c, d] : pairs_) b = b.plus(convolve(c, d));
  return b;
}

Complex TensorWeight::eval(double s, double u) const {
  Complex v = 0.0;
  for (const auto& [c, d] : pairs_) v += c.eval(s) * d.eval(u);
  return v;
}

TensorWeight TensorWeight::scaled(Complex s) const {
  std::vector<std::pair<Weight, Weight>> out;
  for (const auto& [c, d] : pairs_) out.emplace_back(c.scaled(s), d);
  return TensorWeight(out);
}

nlohmann::json TensorWeight::to_json() const {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& [c, d] : pairs_)
    pairs.push_back({{"c", c.to_json()}, {"d", d.to_json()}});
  return {{"pairs", pairs}};
}

TensorWeight TensorWeight::from_json(const nlohmann::json& j) {
  std::vector<std::pair<Weight, Weight>> pairs;
  for (const auto& jp : j.at("pairs"))
    pairs.emplace_back(Weight::from_json(jp.at("c")),
                       Weight::from_json(jp.at("d")));
  return TensorWeight(pairs);
}

}  // namespace g2k
