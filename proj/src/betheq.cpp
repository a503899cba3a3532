#include "bethe_vqe/betheq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <Eigen/Dense>

#include "bethe_vqe/bethe.hpp"

namespace bethe_vqe {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kEdgeTolerance = 1e-9;
// Open-chain roots this close to Re k = 0 or pi are treated as sitting on
// the edge, where the representative with Im k >= 0 is chosen.
constexpr double kEdgeBand = 1e-4;
constexpr cplx kI{0.0, 1.0};

/// The two cleared products for equation j.
struct ClearedTerms {
  cplx lhs;
  cplx rhs;
};

ClearedTerms closed_terms(const RootVector& roots, std::size_t j, int length, double delta) {
  cplx lhs = std::exp(kI * roots[j] * static_cast<double>(length));
  cplx rhs{1.0, 0.0};
  for (std::size_t l = 0; l < roots.size(); ++l) {
    if (l == j) continue;
    lhs *= kernel_s(roots[j], roots[l], delta);
    rhs *= -kernel_s(roots[l], roots[j], delta);
  }
  return {lhs, rhs};
}

ClearedTerms open_terms(const RootVector& roots, std::size_t j, const ChainModel& model) {
  const cplx k = roots[j];
  cplx lhs = boundary_alpha(k, model.delta, model.h) * boundary_beta(k, model.delta, model.h_prime, model.length);
  cplx rhs = boundary_alpha(-k, model.delta, model.h) * boundary_beta(-k, model.delta, model.h_prime, model.length);
  for (std::size_t l = 0; l < roots.size(); ++l) {
    if (l == j) continue;
    lhs *= kernel_B(k, roots[l], model.delta);
    rhs *= kernel_B(-k, roots[l], model.delta);
  }
  return {lhs, rhs};
}

ClearedTerms terms(const ChainModel& model, const RootVector& roots, std::size_t j) {
  return model.boundary == Boundary::Closed ? closed_terms(roots, j, model.length, model.delta)
                                            : open_terms(roots, j, model);
}

double reduce_to_strip(double re) {
  double r = std::remainder(re, kTwoPi);  // [-pi, pi]
  if (r <= -kPi + kEdgeTolerance) r += kTwoPi;
  return r;
}

bool has_repeated(const RootVector& roots) {
  for (std::size_t j = 0; j < roots.size(); ++j)
    for (std::size_t l = j + 1; l < roots.size(); ++l)
      if (std::abs(nearest_equivalent(roots[l], roots[j], roots.boundary) - roots[j]) < kRepeatedRootTolerance)
        return true;
  return false;
}

RootVector unpack_real(const Eigen::VectorXd& x, Boundary boundary) {
  RootVector roots{{}, boundary};
  for (Eigen::Index j = 0; j < x.size() / 2; ++j) roots.roots.emplace_back(x[2 * j], x[2 * j + 1]);
  return roots;
}

/// Cleared residuals divided by per-equation weights frozen at the start
/// point, so the map stays smooth while its magnitude is O(1).
Eigen::VectorXd newton_function(const ChainModel& model, const Eigen::VectorXd& x, const std::vector<double>& weights) {
  const auto r = residual(model, unpack_real(x, model.boundary));
  Eigen::VectorXd out(x.size());
  for (std::size_t j = 0; j < r.values.size(); ++j) {
    out[static_cast<Eigen::Index>(2 * j)] = r.values[j].real() / weights[j];
    out[static_cast<Eigen::Index>(2 * j + 1)] = r.values[j].imag() / weights[j];
  }
  return out;
}

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

}  // namespace

double ResidualVector::norm() const {
  double s = 0.0;
  for (const auto& v : values) s += std::norm(v);
  return std::sqrt(s);
}

double ResidualVector::max_abs() const {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(v));
  return m;
}

ResidualVector residual_closed(const RootVector& roots, int length, double delta) {
  ResidualVector out;
  for (std::size_t j = 0; j < roots.size(); ++j) {
    const auto t = closed_terms(roots, j, length, delta);
    out.values.push_back(t.lhs - t.rhs);
  }
  return out;
}

ResidualVector residual_open(const RootVector& roots, const ChainModel& model) {
  ResidualVector out;
  for (std::size_t j = 0; j < roots.size(); ++j) {
    const auto t = open_terms(roots, j, model);
    out.values.push_back(t.lhs - t.rhs);
  }
  return out;
}

ResidualVector residual(const ChainModel& model, const RootVector& roots) {
  return model.boundary == Boundary::Closed ? residual_closed(roots, model.length, model.delta)
                                            : residual_open(roots, model);
}

ResidualVector scaled_residual(const ChainModel& model, const RootVector& roots) {
  ResidualVector out;
  for (std::size_t j = 0; j < roots.size(); ++j) {
    const auto t = terms(model, roots, j);
    const double scale = std::abs(t.lhs) + std::abs(t.rhs);
    out.values.push_back(scale > 0.0 ? (t.lhs - t.rhs) / scale : cplx{0.0, 0.0});
  }
  return out;
}

RootVector newton_solve(const ChainModel& model, int down_spins, const RootVector& initial,
                        const NewtonOptions& options) {
  model.validate();
  if (down_spins < 1 || static_cast<int>(initial.size()) != down_spins)
    throw std::invalid_argument("initial guess must hold exactly M roots");
  for (const auto& k : initial.roots)
    if (!std::isfinite(k.real()) || !std::isfinite(k.imag())) throw std::invalid_argument("non-finite initial root");
  RootVector guess = initial;
  guess.boundary = model.boundary;
  if (has_repeated(guess)) throw RepeatedRoots("initial guess contains repeated roots");

  const Eigen::Index n = 2 * down_spins;
  Eigen::VectorXd x(n);
  for (int j = 0; j < down_spins; ++j) {
    x[2 * j] = guess[j].real();
    x[2 * j + 1] = guess[j].imag();
  }

  std::vector<double> weights;
  for (int j = 0; j < down_spins; ++j) {
    const auto t = terms(model, guess, static_cast<std::size_t>(j));
    const double w = std::abs(t.lhs) + std::abs(t.rhs);
    weights.push_back(w > 0.0 && std::isfinite(w) ? w : 1.0);
  }
  auto F = [&](const Eigen::VectorXd& v) { return newton_function(model, v, weights); };

  Eigen::VectorXd f = F(x);
  bool converged = false;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    if (!all_finite(f)) throw NoConvergence("Bethe residual became non-finite");
    if (f.lpNorm<Eigen::Infinity>() < options.tolerance) {
      converged = true;
      break;
    }

    Eigen::MatrixXd jac(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
      Eigen::VectorXd xp = x, xm = x;
      xp[c] += options.fd_step;
      xm[c] -= options.fd_step;
      jac.col(c) = (F(xp) - F(xm)) / (2.0 * options.fd_step);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (!jac.allFinite() || sv[0] == 0.0 || sv[n - 1] < 1e-14 * sv[0])
      throw SingularJacobian("Bethe-equation Jacobian is numerically singular");
    const Eigen::VectorXd step = svd.solve(-f);

    const double current = f.norm();
    double t = 1.0;
    bool accepted = false;
    for (int b = 0; b <= options.max_backtracks; ++b, t *= 0.5) {
      const Eigen::VectorXd trial = x + t * step;
      const Eigen::VectorXd ft = F(trial);
      if (all_finite(ft) && ft.norm() < current) {
        x = trial;
        f = ft;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (f.lpNorm<Eigen::Infinity>() < options.floor_tolerance) {
        converged = true;
        break;
      }
      throw NoConvergence("Newton step collapsed without reducing the residual");
    }
  }
  if (!converged) {
    if (f.lpNorm<Eigen::Infinity>() < options.tolerance) {
      converged = true;
    } else {
      throw NoConvergence("Newton iteration cap reached");
    }
  }

  RootVector result = canonicalize(unpack_real(x, model.boundary));
  if (classify(result, model).repeated_roots) throw RepeatedRoots("Newton converged to repeated roots");
  return result;
}

RootVector iterate_log_closed(int length, int down_spins, double delta, const std::vector<double>& quantum_numbers,
                              const LogIterationOptions& options) {
  if (length < 2) throw std::invalid_argument("chain length must be at least 2");
  if (!(delta > 1.0)) throw std::invalid_argument("log iteration requires Delta > 1");
  if (down_spins < 1 || static_cast<int>(quantum_numbers.size()) != down_spins)
    throw std::invalid_argument("need one quantum number per root");

  const auto m = static_cast<std::size_t>(down_spins);
  std::vector<double> k(m);
  for (std::size_t j = 0; j < m; ++j) k[j] = kTwoPi * quantum_numbers[j] / length;

  // Two-body phases, unwrapped against their previous sweep values.
  std::vector<double> theta(m * m, 0.0);
  auto phase_ratio = [delta](double kj, double kl) {
    return -kernel_s(kl, kj, delta) / kernel_s(kj, kl, delta);
  };
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t l = 0; l < m; ++l)
      if (l != j) theta[j * m + l] = std::arg(phase_ratio(k[j], k[l]));

  for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
    std::vector<double> next(m);
    double change = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      cplx total{kTwoPi * quantum_numbers[j], 0.0};
      for (std::size_t l = 0; l < m; ++l) {
        if (l == j) continue;
        const cplx ratio = phase_ratio(k[j], k[l]);
        const double principal = std::arg(ratio);
        const double prev = theta[j * m + l];
        const double unwrapped = principal + kTwoPi * std::round((prev - principal) / kTwoPi);
        theta[j * m + l] = unwrapped;
        total += cplx{unwrapped, -std::log(std::abs(ratio))};
      }
      const cplx kj = total / static_cast<double>(length);
      if (!std::isfinite(kj.real()) || std::abs(kj.imag()) > 1e-9)
        throw NonRealDrift("log iteration left the real axis");
      next[j] = kj.real();
      change = std::max(change, std::abs(next[j] - k[j]));
    }
    k = std::move(next);
    if (change < options.tolerance) {
      RootVector out{{}, Boundary::Closed};
      for (double v : k) out.roots.emplace_back(v, 0.0);
      return canonicalize(out);
    }
  }
  throw NoConvergence("log iteration did not converge");
}

cplx canonical_root(cplx k, Boundary boundary) {
  double re = reduce_to_strip(k.real());
  double im = k.imag();
  if (boundary == Boundary::Open) {
    if (re < 0.0) {
      re = -re;
      im = -im;
    }
    if (im < 0.0 && std::abs(re) < kEdgeBand) {
      re = -re;
      im = -im;
    } else if (im < 0.0 && std::abs(re - kPi) < kEdgeBand) {
      re = kTwoPi - re;
      im = -im;
    }
  }
  if (re == 0.0) re = 0.0;  // drop negative zero
  return {re, im};
}

RootVector canonicalize(const RootVector& roots) {
  RootVector out{{}, roots.boundary};
  for (const auto& k : roots.roots) out.roots.push_back(canonical_root(k, roots.boundary));
  auto& r = out.roots;
  std::sort(r.begin(), r.end(), [](const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  // real parts equal up to rounding order by imaginary part
  for (std::size_t i = 0; i < r.size();) {
    std::size_t j = i + 1;
    while (j < r.size() && r[j].real() - r[j - 1].real() < 1e-9) ++j;
    std::sort(r.begin() + i, r.begin() + j, [](const cplx& a, const cplx& b) { return a.imag() < b.imag(); });
    i = j;
  }
  return out;
}

RootClassification classify(const RootVector& roots, const ChainModel& model) {
  RootClassification c;
  RootVector tagged = roots;
  tagged.boundary = model.boundary;
  c.repeated_roots = has_repeated(tagged);
  c.max_residual = residual(model, tagged).max_abs();
  const auto canon = canonicalize(tagged);
  c.is_canonical = true;
  for (std::size_t j = 0; j < roots.size(); ++j)
    if (std::abs(canon[j] - tagged[j]) > 1e-12) c.is_canonical = false;
  return c;
}

cplx nearest_equivalent(cplx k, cplx target, Boundary boundary) {
  auto shifted = [&](cplx c) {
    const double n = std::round((target.real() - c.real()) / kTwoPi);
    return c + cplx{kTwoPi * n, 0.0};
  };
  const cplx a = shifted(k);
  if (boundary == Boundary::Closed) return a;
  const cplx b = shifted(-k);
  return std::abs(a - target) <= std::abs(b - target) ? a : b;
}

std::vector<cplx> align_roots(const RootVector& found, const std::vector<cplx>& reference) {
  if (found.size() != reference.size()) throw DimensionMismatch("root vectors differ in length");
  std::vector<std::size_t> perm(found.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<cplx> best;
  double best_err = std::numeric_limits<double>::infinity();
  double best_sum = std::numeric_limits<double>::infinity();
  do {
    std::vector<cplx> candidate;
    double err = 0.0, sum = 0.0;
    for (std::size_t j = 0; j < reference.size(); ++j) {
      const cplx k = nearest_equivalent(found[perm[j]], reference[j], found.boundary);
      const double e = std::max(std::abs(k.real() - reference[j].real()), std::abs(k.imag() - reference[j].imag()));
      err = std::max(err, e);
      sum += std::norm(k - reference[j]);
      candidate.push_back(k);
    }
    if (err < best_err || (err == best_err && sum < best_sum)) {
      best_err = err;
      best_sum = sum;
      best = std::move(candidate);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

double max_component_error(const RootVector& found, const std::vector<cplx>& reference) {
  const auto aligned = align_roots(found, reference);
  double err = 0.0;
  for (std::size_t j = 0; j < reference.size(); ++j)
    err = std::max({err, std::abs(aligned[j].real() - reference[j].real()),
                    std::abs(aligned[j].imag() - reference[j].imag())});
  return err;
}

double relative_root_error(const RootVector& found, const std::vector<cplx>& reference) {
  const auto aligned = align_roots(found, reference);
  double diff = 0.0, ref = 0.0;
  for (std::size_t j = 0; j < reference.size(); ++j) {
    diff += std::norm(aligned[j] - reference[j]);
    ref += std::norm(reference[j]);
  }
  return std::sqrt(diff) / std::sqrt(ref);
}

}  // namespace bethe_vqe
