#include "qrobust/selfcheck.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "qrobust/experiment.hpp"
#include "qrobust/optimizers.hpp"
#include "qrobust/rng.hpp"

namespace qrobust::selfcheck {

namespace {

class Stopwatch {
public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

private:
  std::chrono::steady_clock::time_point start_;
};

struct TestSystem {
  QaoaInstance instance;
  Box delta_box;
};

std::vector<TestSystem> benchmark_systems() {
  std::vector<TestSystem> out;
  out.push_back({build_single_qubit(4.0, -4.0, 5),
                 Box({3.7, -4.3}, {4.3, -3.7})});
  out.push_back({build_chain_one(4), Box({-0.1, -0.1}, {0.1, 0.1})});
  out.push_back({build_chain_two(5), Box({-0.15}, {0.15})});
  out.push_back({build_chain_two_init_error(5), Box({0.0, 0.0}, {0.2, 0.2})});
  return out;
}

std::vector<double> random_point(Rng& rng, const Box& box) {
  return rng.uniform_in(box);
}

}  // namespace

CheckResult check_gradient_oracle() {
  Stopwatch watch;
  CheckResult result;
  result.name = "criterion-1 gradient-oracle";

  double worst_rel = 0.0;
  const double fd_step = 1e-5;
  Rng rng(20240001);
  for (const TestSystem& sys : benchmark_systems()) {
    FidelityEvaluator eval(sys.instance);
    const std::size_t m = 2 * static_cast<std::size_t>(sys.instance.depth);
    for (int trial = 0; trial < 20; ++trial) {
      const std::vector<double> theta =
          random_point(rng, sys.instance.theta_box);
      const std::vector<double> delta = random_point(rng, sys.delta_box);

      const FidelityEval analytic = eval.fidelity_gradient(theta, delta);
      std::vector<double> fd(m);
      std::vector<double> probe = theta;
      for (std::size_t j = 0; j < m; ++j) {
        probe[j] = theta[j] + fd_step;
        const double fp = eval.fidelity(probe, delta);
        probe[j] = theta[j] - fd_step;
        const double fm = eval.fidelity(probe, delta);
        probe[j] = theta[j];
        fd[j] = (fp - fm) / (2.0 * fd_step);
      }
      double diff2 = 0.0, norm2 = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        diff2 += (analytic.gradient[j] - fd[j]) * (analytic.gradient[j] - fd[j]);
        norm2 += fd[j] * fd[j];
      }
      const double rel = std::sqrt(diff2) / std::max(std::sqrt(norm2), 1e-12);
      worst_rel = std::max(worst_rel, rel);
    }
  }

  result.seconds = watch.seconds();
  result.passed = worst_rel < 1e-6 && result.seconds < 30.0;
  std::ostringstream ss;
  ss << "max relative l2 error " << worst_rel << " (tol 1e-6), "
     << result.seconds << " s (limit 30)";
  result.detail = ss.str();
  return result;
}

CheckResult check_unitarity_and_norm() {
  Stopwatch watch;
  CheckResult result;
  result.name = "criterion-2 unitarity-norm";

  double worst_norm_err = 0.0;
  Rng rng(20240002);
  for (const TestSystem& sys : benchmark_systems()) {
    FidelityEvaluator eval(sys.instance);
    for (int trial = 0; trial < 100; ++trial) {
      const std::vector<double> theta =
          random_point(rng, sys.instance.theta_box);
      const std::vector<double> delta = random_point(rng, sys.delta_box);
      const CVector psi = eval.propagate(theta, delta);
      worst_norm_err = std::max(worst_norm_err, std::abs(psi.norm() - 1.0));
    }
  }

  double worst_unitary_err = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t dim = 2 + static_cast<std::size_t>(rng.uniform() * 11);
    CMatrix h(dim);
    for (std::size_t r = 0; r < dim; ++r) {
      h(r, r) = rng.uniform(-2.0, 2.0);
      for (std::size_t c = r + 1; c < dim; ++c) {
        const cdouble v(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        h(r, c) = v;
        h(c, r) = std::conj(v);
      }
    }
    const double theta = rng.uniform(-3.0, 3.0);
    const CMatrix u = unitary_from_hamiltonian(h, theta);
    const CMatrix uu = product(u, u.adjoint());
    CMatrix residual = uu;
    residual.add_scaled(CMatrix::identity(dim), -1.0);
    worst_unitary_err = std::max(worst_unitary_err, residual.max_abs());
  }

  result.seconds = watch.seconds();
  result.passed = worst_norm_err <= 1e-10 && worst_unitary_err <= 1e-10;
  std::ostringstream ss;
  ss << "max |norm-1| " << worst_norm_err << ", max |UU†-I| "
     << worst_unitary_err << " (tol 1e-10)";
  result.detail = ss.str();
  return result;
}

namespace {

// Local Gaussian elimination, independent of the simplex internals.
bool solve_linear(std::vector<std::vector<double>> m, std::vector<double> rhs,
                  std::vector<double>* out) {
  const std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    }
    if (std::abs(m[piv][col]) < 1e-9) return false;
    std::swap(m[col], m[piv]);
    std::swap(rhs[col], rhs[piv]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = m[r][col] / m[col][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  out->assign(n, 0.0);
  for (std::size_t r = n; r-- > 0;) {
    double s = rhs[r];
    for (std::size_t c = r + 1; c < n; ++c) s -= m[r][c] * (*out)[c];
    (*out)[r] = s / m[r][r];
  }
  return true;
}

// Max f0 over the epigraph polytope by enumerating all basic points.
double enumerate_epigraph_optimum(const EpigraphLP& lp) {
  const std::size_t n = lp.lower.size();
  const std::size_t dim = n + 1;  // (step, f0)

  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  for (const LinearSurrogate& s : lp.rows) {
    std::vector<double> row(dim, 0.0);
    for (std::size_t j = 0; j < n; ++j) row[j] = -s.gradient[j];
    row[n] = 1.0;
    rows.push_back(std::move(row));
    rhs.push_back(s.base_value);
  }
  double floor = 0.0;
  for (const LinearSurrogate& s : lp.rows) {
    double reach = s.base_value;
    for (std::size_t j = 0; j < n; ++j) {
      reach -= std::abs(s.gradient[j]) *
               std::max(std::abs(lp.lower[j]), std::abs(lp.upper[j]));
    }
    floor = std::min(floor, reach);
  }
  floor -= 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> up(dim, 0.0), down(dim, 0.0);
    up[j] = 1.0;
    down[j] = -1.0;
    rows.push_back(up);
    rhs.push_back(lp.upper[j]);
    rows.push_back(down);
    rhs.push_back(-lp.lower[j]);
  }
  {
    std::vector<double> row(dim, 0.0);
    row[n] = -1.0;
    rows.push_back(row);
    rhs.push_back(-floor);
  }

  const std::size_t m = rows.size();
  double best = -std::numeric_limits<double>::infinity();

  // Enumerate all dim-subsets of the constraint rows.
  std::vector<std::size_t> idx(dim);
  for (std::size_t i = 0; i < dim; ++i) idx[i] = i;
  bool more = dim <= m;
  while (more) {
    std::vector<std::vector<double>> sub(dim);
    std::vector<double> sub_rhs(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      sub[i] = rows[idx[i]];
      sub_rhs[i] = rhs[idx[i]];
    }
    std::vector<double> z;
    if (solve_linear(std::move(sub), std::move(sub_rhs), &z)) {
      bool feasible = true;
      for (std::size_t r = 0; r < m && feasible; ++r) {
        double v = 0.0;
        for (std::size_t c = 0; c < dim; ++c) v += rows[r][c] * z[c];
        if (v > rhs[r] + 1e-9) feasible = false;
      }
      if (feasible) best = std::max(best, z[n]);
    }
    more = false;
    for (std::size_t i = dim; i-- > 0;) {
      if (idx[i] < m - (dim - i)) {
        ++idx[i];
        for (std::size_t k = i + 1; k < dim; ++k) idx[k] = idx[k - 1] + 1;
        more = true;
        break;
      }
    }
  }
  return best;
}

}  // namespace

CheckResult check_lp_against_enumeration() {
  Stopwatch watch;
  CheckResult result;
  result.name = "criterion-3 lp-vertex-oracle";

  Rng rng(20240003);
  double worst_gap = 0.0;
  int solved = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 4.0);
    const std::size_t rows = 1 + static_cast<std::size_t>(rng.uniform() * 6.0);

    Box theta_box = Box::uniform(n, 0.0, 2.0);
    std::vector<double> theta(n);
    for (std::size_t j = 0; j < n; ++j) theta[j] = rng.uniform(0.0, 2.0);

    std::vector<LinearSurrogate> surrogates(std::min<std::size_t>(rows, 6));
    for (LinearSurrogate& s : surrogates) {
      s.base_value = std::round(rng.uniform(0.0, 1.0) * 1e6) / 1e6;
      s.gradient.resize(n);
      for (double& g : s.gradient) {
        g = std::round(rng.uniform(-2.0, 2.0) * 1e6) / 1e6;
      }
    }
    const TrustRegion trust{rng.uniform(0.05, 1.0)};

    const EpigraphLP lp = build_epigraph(surrogates, theta, theta_box, trust);
    const SubproblemSolution sol = solve_lp(lp);
    const double oracle = enumerate_epigraph_optimum(lp);
    worst_gap = std::max(worst_gap, std::abs(sol.value - oracle));
    ++solved;
  }

  result.seconds = watch.seconds();
  result.passed = worst_gap <= 1e-9 && result.seconds < 10.0;
  std::ostringstream ss;
  ss << solved << " instances, max |simplex - enumeration| " << worst_gap
     << " (tol 1e-9), " << result.seconds << " s (limit 10)";
  result.detail = ss.str();
  return result;
}

namespace {

// Scenario functions that are exactly linear in the parameters, so the
// first-order surrogate is exact, the predicted and actual improvements
// agree, and the trust diameter doubles every iteration.
class LinearObjective : public qrobust::SampledObjective {
public:
  LinearObjective(std::vector<std::vector<double>> grads,
                  std::vector<double> offsets)
      : grads_(std::move(grads)), offsets_(std::move(offsets)) {}

  std::size_t parameter_count() const override { return grads_.front().size(); }
  std::size_t scenario_count() const override { return grads_.size(); }

  double value(const std::vector<double>& theta,
               std::size_t scenario) const override {
    double v = offsets_[scenario];
    for (std::size_t j = 0; j < theta.size(); ++j) {
      v += grads_[scenario][j] * theta[j];
    }
    return v;
  }

  FidelityEval eval(const std::vector<double>& theta, std::size_t scenario,
                    bool) const override {
    FidelityEval fe;
    fe.value = value(theta, scenario);
    fe.gradient = grads_[scenario];
    return fe;
  }

private:
  std::vector<std::vector<double>> grads_;
  std::vector<double> offsets_;
};

}  // namespace

CheckResult check_scp_mechanics() {
  Stopwatch watch;
  CheckResult result;
  result.name = "criterion-4 scp-mechanics";

  LinearObjective objective({{1.0, 0.3}, {0.9, -0.2}, {1.1, 0.05}},
                            {0.0, 0.05, 0.1});
  ScpConfig cfg;
  cfg.t_max = 8;
  cfg.initial_d = 0.1;
  cfg.tol_d = 1e-12;
  cfg.tol_sigma = 1e-15;
  const Box box = Box::uniform(2, -100.0, 100.0);
  const ScpResult res =
      scp_optimize(objective, box, std::vector<double>{0.0, 0.0}, cfg);

  bool ok = res.trace.iterations.size() == 8;
  double expect_d = cfg.initial_d;
  std::ostringstream ss;
  for (const ScpIterationRecord& it : res.trace.iterations) {
    expect_d *= cfg.gamma1;  // sigma = 1 > eta1 doubles the diameter
    if (!it.accepted || std::abs(it.sigma - 1.0) > 1e-9 ||
        it.diameter != expect_d) {
      ok = false;
      ss << "iteration broke the unit-ratio/doubling pattern; ";
      break;
    }
  }

  // Accepted worst-case values must be non-decreasing on a real run too.
  const QaoaInstance inst = build_single_qubit(4.0, -4.0, 5);
  FidelityEvaluator eval(inst);
  const SampleSet samples = sample_grid(Box({3.9, -4.1}, {4.1, -3.9}), 3);
  ScpConfig bench_cfg;
  bench_cfg.t_max = 40;
  std::vector<double> theta0(10, 0.3);
  const ScpResult bench = scp_optimize(
      eval, make_control_vector(theta0, inst.theta_box), samples, bench_cfg);
  double prev = -1.0;
  for (const ScpIterationRecord& it : bench.trace.iterations) {
    if (!it.accepted) continue;
    if (it.worst_fidelity < prev - 1e-12) {
      ok = false;
      ss << "accepted worst-case decreased; ";
      break;
    }
    prev = it.worst_fidelity;
  }

  result.seconds = watch.seconds();
  result.passed = ok;
  ss << res.trace.iterations.size() << " synthetic iterations, "
     << bench.trace.iterations.size() << " benchmark iterations";
  result.detail = ss.str();
  return result;
}

namespace {

CheckResult invariant_linalg() {
  Stopwatch watch;
  CheckResult r;
  r.name = "invariant densela-unitary-group";
  Rng rng(20240010);
  double worst = 0.0;
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t dim = 2 + static_cast<std::size_t>(rng.uniform() * 7);
    CMatrix h(dim);
    for (std::size_t a = 0; a < dim; ++a) {
      h(a, a) = rng.uniform(-2.0, 2.0);
      for (std::size_t b = a + 1; b < dim; ++b) {
        const cdouble v(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        h(a, b) = v;
        h(b, a) = std::conj(v);
      }
    }
    const double t1 = rng.uniform(-2.0, 2.0);
    const double t2 = rng.uniform(-2.0, 2.0);
    const EvolutionOperator op(h);

    CMatrix round_trip = product(op.matrix(t1), op.matrix(-t1));
    round_trip.add_scaled(CMatrix::identity(dim), -1.0);
    worst = std::max(worst, round_trip.max_abs());

    CMatrix composed = product(op.matrix(t1), op.matrix(t2));
    composed.add_scaled(op.matrix(t1 + t2), -1.0);
    worst = std::max(worst, composed.max_abs());

    const EigDecomposition eig = hermitian_eig(h);
    const double min_eig =
        *std::min_element(eig.eigenvalues.begin(), eig.eigenvalues.end());
    if (min_eig != eig.eigenvalues.front()) worst = 1.0;
  }
  r.seconds = watch.seconds();
  r.passed = worst <= 1e-10;
  r.detail = "max group-identity residual " + std::to_string(worst);
  return r;
}

CheckResult invariant_spinmodel() {
  Stopwatch watch;
  CheckResult r;
  r.name = "invariant spinmodel-hermitian";
  Rng rng(20240011);
  double worst = 0.0;
  for (const TestSystem& sys : benchmark_systems()) {
    for (int trial = 0; trial < 50; ++trial) {
      const std::vector<double> delta = rng.uniform_in(sys.delta_box);
      const CMatrix ha = sys.instance.h_a.build(delta);
      const CMatrix hb = sys.instance.h_b.build(delta);
      if (!ha.is_hermitian(1e-12) || !hb.is_hermitian(1e-12)) worst = 1.0;
      const CVector psi = sys.instance.psi_i(delta);
      worst = std::max(worst, std::abs(psi.norm() - 1.0));
    }
  }
  // Same-site anticommutation, distinct-site commutation.
  const CMatrix x2 = pauli_site_operator(PauliAxis::x, 2, 3);
  const CMatrix y2 = pauli_site_operator(PauliAxis::y, 2, 3);
  const CMatrix z1 = pauli_site_operator(PauliAxis::z, 1, 3);
  CMatrix anti = product(x2, y2);
  anti.add_scaled(product(y2, x2), 1.0);
  worst = std::max(worst, anti.max_abs());
  CMatrix comm = product(x2, z1);
  comm.add_scaled(product(z1, x2), -1.0);
  worst = std::max(worst, comm.max_abs());

  r.seconds = watch.seconds();
  r.passed = worst <= 1e-10;
  r.detail = "max violation " + std::to_string(worst);
  return r;
}

CheckResult invariant_qaoa() {
  Stopwatch watch;
  CheckResult r;
  r.name = "invariant qaoa-fidelity-bounds";
  Rng rng(20240012);
  double worst = 0.0;
  for (const TestSystem& sys : benchmark_systems()) {
    FidelityEvaluator eval(sys.instance);
    const std::size_t m = 2 * static_cast<std::size_t>(sys.instance.depth);
    for (int trial = 0; trial < 25; ++trial) {
      const std::vector<double> theta = rng.uniform_in(sys.instance.theta_box);
      const std::vector<double> delta = rng.uniform_in(sys.delta_box);
      const double f = eval.fidelity(theta, delta);
      if (f < -1e-12 || f > 1.0 + 1e-12) worst = 1.0;

      // Appending an all-zero layer must not change the fidelity.
      QaoaInstance deeper = sys.instance;
      deeper.depth += 1;
      deeper.theta_box = Box::uniform(m + 2, sys.instance.theta_box.lower[0],
                                      sys.instance.theta_box.upper[0]);
      FidelityEvaluator deeper_eval(deeper);
      std::vector<double> padded = theta;
      padded.push_back(0.0);
      padded.push_back(0.0);
      worst = std::max(worst,
                       std::abs(deeper_eval.fidelity(padded, delta) - f));
    }
  }
  r.seconds = watch.seconds();
  r.passed = worst <= 1e-10;
  r.detail = "max violation " + std::to_string(worst);
  return r;
}

CheckResult invariant_uncertainty() {
  Stopwatch watch;
  CheckResult r;
  r.name = "invariant uncertainty-worst-average";
  Rng rng(20240013);
  double worst = 0.0;

  const QaoaInstance inst = build_chain_two(4);
  FidelityEvaluator eval(inst);
  const Box box({-0.15}, {0.15});
  const SampleSet coarse = sample_grid(box, 5);
  const SampleSet fine = sample_grid(box, 9);
  const SampleSet again = sample_grid(box, 9);
  if (fine.samples != again.samples) worst = 1.0;  // determinism

  for (int trial = 0; trial < 10; ++trial) {
    const std::vector<double> theta = rng.uniform_in(inst.theta_box);
    const WorstAverage coarse_wa = worst_and_average(eval, theta, coarse);
    const WorstAverage fine_wa = worst_and_average(eval, theta, fine);
    if (coarse_wa.worst > coarse_wa.average + 1e-12) worst = 1.0;
    // 9-per-axis refines 5-per-axis; a superset can only lower the worst case.
    if (fine_wa.worst > coarse_wa.worst + 1e-12) worst = 1.0;
  }
  r.seconds = watch.seconds();
  r.passed = worst <= 1e-10;
  r.detail = "violations " + std::to_string(worst);
  return r;
}

CheckResult invariant_subproblem() {
  Stopwatch watch;
  CheckResult r;
  r.name = "invariant subproblem-feasible-steps";
  Rng rng(20240014);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 4.0);
    Box theta_box = Box::uniform(n, 0.0, 2.0);
    std::vector<double> theta(n);
    for (std::size_t j = 0; j < n; ++j) theta[j] = rng.uniform(0.0, 2.0);
    std::vector<LinearSurrogate> surrogates(1 + static_cast<std::size_t>(
                                                    rng.uniform() * 5.0));
    for (LinearSurrogate& s : surrogates) {
      s.base_value = rng.uniform(0.0, 1.0);
      s.gradient.resize(n);
      for (double& g : s.gradient) g = rng.uniform(-2.0, 2.0);
    }
    const double d_small = rng.uniform(0.05, 0.5);
    const EpigraphLP small =
        build_epigraph(surrogates, theta, theta_box, TrustRegion{d_small});
    const EpigraphLP large =
        build_epigraph(surrogates, theta, theta_box, TrustRegion{2 * d_small});
    const SubproblemSolution sol_small = solve_lp(small);
    const SubproblemSolution sol_large = solve_lp(large);

    double base = surrogates[0].base_value;
    for (const LinearSurrogate& s : surrogates) {
      base = std::min(base, s.base_value);
    }
    // Predicted improvement is nonnegative and monotone in the diameter.
    if (sol_small.value < base - 1e-9) worst = 1.0;
    if (sol_small.value > sol_large.value + 1e-9) worst = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (sol_small.step[j] < small.lower[j] - 1e-9 ||
          sol_small.step[j] > small.upper[j] + 1e-9) {
        worst = 1.0;
      }
    }
  }
  r.seconds = watch.seconds();
  r.passed = worst <= 1e-10;
  r.detail = "violations " + std::to_string(worst);
  return r;
}

CheckResult invariant_optimizers() {
  Stopwatch watch;
  CheckResult r;
  r.name = "invariant optimizers-rules";
  double worst = 0.0;
  const ScpConfig cfg;
  if (trust_region_update(0.1, 0.7, cfg) != 0.2) worst = 1.0;
  if (trust_region_update(0.1, 0.3, cfg) != 0.1) worst = 1.0;
  if (std::abs(trust_region_update(0.1, 0.05, cfg) - 0.02) > 1e-15) worst = 1.0;

  const AcceptanceRatio perfect = acceptance_ratio(0.5, 0.6, 0.6);
  if (perfect.degenerate || std::abs(perfect.sigma - 1.0) > 1e-12) worst = 1.0;
  const AcceptanceRatio reject = acceptance_ratio(0.5, 0.45, 0.6);
  if (reject.degenerate || std::abs(reject.sigma + 0.5) > 1e-12) worst = 1.0;
  const AcceptanceRatio degen = acceptance_ratio(0.5, 0.55, 0.5 + 1e-16);
  if (!degen.degenerate || degen.sigma != 0.0) worst = 1.0;

  r.seconds = watch.seconds();
  r.passed = worst == 0.0;
  r.detail = "violations " + std::to_string(worst);
  return r;
}

}  // namespace

std::vector<CheckResult> check_module_invariants() {
  return {invariant_linalg(),     invariant_spinmodel(),
          invariant_qaoa(),       invariant_uncertainty(),
          invariant_subproblem(), invariant_optimizers()};
}

bool run_all(std::ostream& log) {
  Stopwatch watch;
  std::vector<CheckResult> results;
  results.push_back(check_gradient_oracle());
  results.push_back(check_unitarity_and_norm());
  results.push_back(check_lp_against_enumeration());
  results.push_back(check_scp_mechanics());
  const std::vector<CheckResult> invariants = check_module_invariants();
  results.insert(results.end(), invariants.begin(), invariants.end());

  bool all = true;
  for (const CheckResult& r : results) {
    log << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail
        << "\n";
    all = all && r.passed;
  }
  log << (all ? "selftest passed" : "selftest FAILED") << " in "
      << watch.seconds() << " s\n";
  return all;
}

}  // namespace qrobust::selfcheck
