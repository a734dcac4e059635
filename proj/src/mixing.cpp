#include "wobble/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wobble/errors.hpp"

namespace wobble {

namespace {

constexpr double kCompositionTol = 1e-9;
constexpr double kAdditivityTol = 1e-10;

SymMatrix inv_sqrt(const SymMatrix& a, const char* which) {
  try {
    return matrix_power(a, -0.5);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NotPositiveDefinite)
      fail(ErrorKind::DegenerateWindow, std::string(which) + " window covariance is singular: " + e.message());
    throw;
  }
}

Matrix mul(const SymMatrix& a, const Matrix& b) { return a.dense() * b; }
Matrix mul(const Matrix& a, const SymMatrix& b) { return a * b.dense(); }

}  // namespace

SymMatrix StationaryModel::lag_cov(long long h) const {
  const std::size_t k = static_cast<std::size_t>(h < 0 ? -h : h);
  SymMatrix out(m);
  for (const auto& c : components) {
    const double r = c.table.at(k);
    if (r != 0.0) out += r * c.loading;
  }
  return out;
}

long long StationaryModel::table_reach() const {
  long long reach = std::numeric_limits<long long>::max();
  for (const auto& c : components)
    if (!c.zero_tail) reach = std::min(reach, static_cast<long long>(c.table.r.size()) - 1);
  return reach;
}

StationaryModel scalar_model(const AutocovarianceTable& table, bool zero_tail) {
  StationaryModel s;
  s.m = 1;
  s.components.push_back({table, SymMatrix::identity(1), zero_tail});
  return s;
}

StationaryModel process_model(const ProcessSpec& spec) {
  StationaryModel s;
  s.m = spec.m;
  const int L = spec.basis.L();
  for (std::size_t j = 0; j < spec.autocov.size(); ++j) {
    const int i = static_cast<int>(j);
    const SymMatrix& q = i < L ? spec.basis.q1[i] : i < L + spec.m ? spec.basis.q2[i - L] : spec.basis.q3[i - L - spec.m];
    s.components.push_back({spec.autocov[j], q, true});
  }
  return s;
}

std::vector<StationaryModel> block_models(const ProcessSpec& spec) {
  std::vector<StationaryModel> out;
  for (const auto& t : spec.autocov) out.push_back(scalar_model(t, true));
  return out;
}

StationaryModel stack_models(const std::vector<StationaryModel>& parts) {
  StationaryModel s;
  s.m = 0;
  for (const auto& p : parts) s.m += p.m;
  int offset = 0;
  for (const auto& p : parts) {
    for (const auto& c : p.components) {
      SymMatrix load(s.m);
      for (int i = 0; i < p.m; ++i)
        for (int j = i; j < p.m; ++j) load.set(offset + i, offset + j, c.loading(i, j));
      s.components.push_back({c.table, load, c.zero_tail});
    }
    offset += p.m;
  }
  return s;
}

JointCov window_cov(const StationaryModel& model, const WindowSpec& w) {
  if (w.p < 1 || w.q < 1 || w.gap < 1) fail(ErrorKind::PreconditionViolation, "window needs p, q, gap >= 1");
  const long long max_lag = static_cast<long long>(w.p) + w.gap + w.q - 2;
  if (max_lag > model.table_reach())
    fail(ErrorKind::TableTooShort, "window needs lag " + std::to_string(max_lag) + ", table reaches " +
                                       std::to_string(model.table_reach()));
  const int m = model.m;
  std::vector<SymMatrix> lags(static_cast<std::size_t>(max_lag) + 1);
  for (long long h = 0; h <= max_lag; ++h) lags[h] = model.lag_cov(h);

  // Times: past t = -p+1..0 (index a), future t = gap..gap+q-1 (index b).
  JointCov j;
  j.past = SymMatrix(w.p * m);
  j.future = SymMatrix(w.q * m);
  j.cross = Matrix(w.p * m, w.q * m);
  for (int a = 0; a < w.p; ++a)
    for (int a2 = a; a2 < w.p; ++a2)
      for (int u = 0; u < m; ++u)
        for (int v = 0; v < m; ++v) {
          const int r = a * m + u, c = a2 * m + v;
          if (r <= c) j.past.set(r, c, lags[a2 - a](u, v));
        }
  for (int b = 0; b < w.q; ++b)
    for (int b2 = b; b2 < w.q; ++b2)
      for (int u = 0; u < m; ++u)
        for (int v = 0; v < m; ++v) {
          const int r = b * m + u, c = b2 * m + v;
          if (r <= c) j.future.set(r, c, lags[b2 - b](u, v));
        }
  for (int a = 0; a < w.p; ++a)
    for (int b = 0; b < w.q; ++b) {
      const long long lag = static_cast<long long>(w.gap + b) + (w.p - 1 - a);
      for (int u = 0; u < m; ++u)
        for (int v = 0; v < m; ++v) j.cross(a * m + u, b * m + v) = lags[lag](u, v);
    }
  return j;
}

CanonicalCorrelations canonical_corrs(const JointCov& joint) {
  const SymMatrix wa = inv_sqrt(joint.past, "past");
  const SymMatrix wb = inv_sqrt(joint.future, "future");
  const Matrix k = mul(mul(wa, joint.cross), wb);
  // Squared singular values from the smaller Gram matrix.
  const bool rows_small = k.rows() <= k.cols();
  const Matrix gram = rows_small ? k * k.transposed() : k.transposed() * k;
  SymMatrix g(gram.rows());
  for (int i = 0; i < gram.rows(); ++i)
    for (int j = i; j < gram.cols(); ++j) g.set(i, j, 0.5 * (gram(i, j) + gram(j, i)));
  const EigenDecomp ed = eigen_decompose(g);
  CanonicalCorrelations out;
  for (double s2 : ed.values) {
    double r = std::sqrt(std::max(s2, 0.0));
    if (r > 1.0 - kCorrClip) {
      r = 1.0 - kCorrClip;
      out.clipped = true;
    }
    out.r.push_back(r);
  }
  return out;
}

double mi_from_corrs(const CanonicalCorrelations& c) {
  double s = 0.0;
  for (double r : c.r) s += std::log1p(-r * r);
  return -0.5 * s;
}

MixingPoint mixing_point(const StationaryModel& model, const WindowSpec& w) {
  const CanonicalCorrelations c = canonical_corrs(window_cov(model, w));
  return {w, c.r.empty() ? 0.0 : c.r.front(), mi_from_corrs(c)};
}

double rho_hat(const StationaryModel& model, const WindowSpec& w) { return mixing_point(model, w).rho; }

double mi_hat(const StationaryModel& model, const WindowSpec& w) { return mixing_point(model, w).mi; }

CompositionReport composition_checks(const StationaryModel& process, const std::vector<StationaryModel>& blocks,
                                     const std::vector<int>& multiplicity, const WindowSpec& w) {
  if (blocks.size() != multiplicity.size()) fail(ErrorKind::DimensionMismatch, "one multiplicity per block");
  CompositionReport rep;
  rep.process = mixing_point(process, w);
  double rho_max = 0.0, mi_sum = 0.0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    rep.blocks.push_back(mixing_point(blocks[i], w));
    rho_max = std::max(rho_max, rep.blocks.back().rho);
    mi_sum += multiplicity[i] * rep.blocks.back().mi;
  }
  rep.checks.push_back(make_check("rho_composition", rep.process.rho, rho_max + kCompositionTol, 0.0));
  rep.checks.push_back(make_check("mi_composition", rep.process.mi, mi_sum + kCompositionTol, 0.0));
  if (blocks.size() >= 2) {
    rep.stacked_mi = mixing_point(stack_models({blocks[0], blocks[1]}), w).mi;
    rep.stacked_parts = rep.blocks[0].mi + rep.blocks[1].mi;
    rep.checks.push_back(make_check("mi_additivity", std::abs(rep.stacked_mi - rep.stacked_parts), kAdditivityTol, 0.0));
  }
  return rep;
}

double block_rho_bound(double upsilon1, double upsilon2) { return 1.0 - std::exp(upsilon1 - upsilon2); }

std::vector<int> default_decay_gaps() { return {1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1000}; }

}  // namespace wobble
