#include "ofbm/simulate.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cstdlib>
#include <thread>

#include "ofbm/rng.hpp"

namespace ofbm {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

std::vector<double> normalize_times(std::vector<double> times) {
  times.push_back(0.0);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end(),
                          [](double a, double b) { return std::abs(a - b) <= 1e-14; }),
              times.end());
  return times;
}

int thread_count() {
  if (const char* env = std::getenv("OFBM_THREADS")) {
    const int k = std::atoi(env);
    if (k > 0) return k;
  }
  return 1;
}

void parallel_over_paths(int n_paths, const std::function<void(int)>& body) {
  const int workers = std::min(thread_count(), std::max(n_paths, 1));
  if (workers <= 1) {
    for (int p = 0; p < n_paths; ++p) body(p);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (int p = w; p < n_paths; p += workers) body(p);
    });
  }
  for (auto& th : pool) th.join();
}

struct FreqCell {
  double node;
  double width;
};

std::vector<FreqCell> build_cells(const FrequencyGridSpec& f) {
  std::vector<FreqCell> cells;
  const double split = std::min(1.0, f.x_max);
  if (split > f.x_min) {
    const double u0 = std::log(f.x_min), u1 = std::log(split);
    const int k = std::max(f.log_nodes, 2);
    for (int i = 0; i < k; ++i) {
      const double a = std::exp(u0 + (u1 - u0) * i / k);
      const double b = std::exp(u0 + (u1 - u0) * (i + 1) / k);
      cells.push_back({std::sqrt(a * b), b - a});
    }
  }
  if (f.x_max > split) {
    const int k = std::max(f.lin_nodes, 2);
    const double h = (f.x_max - split) / k;
    for (int i = 0; i < k; ++i) cells.push_back({split + (i + 0.5) * h, h});
  }
  return cells;
}

}  // namespace

void FrequencyGridSpec::validate() const {
  if (!(x_min > 0.0) || !(x_max > x_min)) throw ValidationError("frequency grid needs 0 < x_min < x_max");
  if (log_nodes + lin_nodes < 2) throw ValidationError("frequency grid needs at least 2 nodes");
}

FrequencyGridSpec FrequencyGridSpec::auto_for(const std::vector<double>& times) {
  double t_max = 0.0;
  for (double t : times) t_max = std::max(t_max, std::abs(t));
  if (t_max == 0.0) t_max = 1.0;
  std::vector<double> sorted = normalize_times(times);
  double dt = t_max;
  for (size_t i = 1; i < sorted.size(); ++i) dt = std::min(dt, sorted[i] - sorted[i - 1]);
  if (!(dt > 0.0)) dt = t_max;

  FrequencyGridSpec f;
  f.x_min = 1e-6 / t_max;
  f.x_max = 200.0 / dt;
  f.log_nodes = 768;
  const double dx = kPi / (4.0 * t_max);
  f.lin_nodes = std::clamp(static_cast<int>(std::ceil((f.x_max - 1.0) / dx)), 64, 16384);
  return f;
}

PathEnsemble simulate_spectral(const OfbmModel& model, std::vector<double> times, int n_paths,
                               std::uint64_t seed, FrequencyGridSpec freq) {
  const int n = model.dim();
  PathEnsemble out;
  out.times = normalize_times(std::move(times));
  out.n_paths = n_paths;
  out.seed = seed;
  out.method = "spectral";
  if (freq.x_min == 0.0 && freq.x_max == 0.0 && freq.log_nodes == 0 && freq.lin_nodes == 0)
    freq = FrequencyGridSpec::auto_for(out.times);
  freq.validate();
  out.freq = freq;

  const auto cells = build_cells(freq);
  const int m = static_cast<int>(out.times.size());
  const int J = static_cast<int>(cells.size());

  // kernel matrices at nodes: W_j = x_j^{-D} (A1 + i A2)
  MatrixPowerEvaluator power(model.exponent().SD);
  const CMat A = model.spectral().A1.cast<cplx>() + cplx(0, 1) * model.spectral().A2.cast<cplx>();
  std::vector<CMat> W(J);
  std::vector<double> half_width(J);
  for (int j = 0; j < J; ++j) {
    W[j] = power.eval(cells[j].node, -1).cast<cplx>() * A;
    half_width[j] = std::sqrt(cells[j].width / 2.0);
  }
  // time factors phi(t, x) = (e^{i t x} - 1) / (i x)
  Eigen::MatrixXcd phi(m, J);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < J; ++j) {
      const double x = cells[j].node;
      phi(i, j) = (std::polar(1.0, out.times[i] * x) - 1.0) / cplx(0.0, x);
    }

  out.paths.assign(n_paths, Mat::Zero(m, n));
  parallel_over_paths(n_paths, [&](int p) {
    Mat& path = out.paths[p];
    Eigen::VectorXcd noise(n), y(n);
    for (int j = 0; j < J; ++j) {
      rng::CounterStream stream(seed, static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(j));
      for (int k = 0; k < n; ++k)
        noise(k) = half_width[j] * cplx(stream.normal(k), stream.normal(n + k));
      y = W[j] * noise;
      // the Hermitian mirror cell at -x_j contributes the conjugate, so the
      // pair sums to twice the real part
      for (int i = 0; i < m; ++i)
        for (int k = 0; k < n; ++k) path(i, k) += 2.0 * (phi(i, j) * y(k)).real();
    }
    path.row(0).setZero();  // t = 0 exactly
  });
  return out;
}

PathEnsemble simulate_cholesky(const OfbmModel& model, std::vector<double> times, int n_paths,
                               std::uint64_t seed, const QuadratureConfig& quad_cfg) {
  const int n = model.dim();
  PathEnsemble out;
  out.times = normalize_times(std::move(times));
  out.n_paths = n_paths;
  out.seed = seed;
  out.method = "cholesky";

  std::vector<double> live;  // nonzero grid points carry randomness
  std::vector<int> live_idx;
  for (size_t i = 0; i < out.times.size(); ++i)
    if (out.times[i] != 0.0) {
      live.push_back(out.times[i]);
      live_idx.push_back(static_cast<int>(i));
    }
  const int m = static_cast<int>(live.size());
  out.paths.assign(n_paths, Mat::Zero(out.times.size(), n));
  if (m == 0 || n_paths == 0) return out;

  Covariance engine(model, quad_cfg);
  Mat gram(m * n, m * n);
  for (int k = 0; k < m; ++k)
    for (int l = k; l < m; ++l) {
      const Mat c = engine.cov(live[k], live[l]);
      gram.block(k * n, l * n, n, n) = c;
      if (l != k) gram.block(l * n, k * n, n, n) = c.transpose();
    }
  gram = 0.5 * (gram + gram.transpose()).eval();

  const double trace = gram.trace();
  const double jitter_cap = 1e-10 * std::max(trace, 1.0);
  double jitter = 0.0;
  Eigen::LLT<Mat> llt(gram);
  while (llt.info() != Eigen::Success) {
    jitter = jitter == 0.0 ? 1e-14 * std::max(trace, 1.0) : jitter * 10.0;
    if (jitter > jitter_cap)
      throw CovarianceNotPsdError("covariance Gram matrix is not positive semidefinite within the jitter cap");
    llt.compute(gram + jitter * Mat::Identity(m * n, m * n));
  }
  out.jitter_used = jitter;
  const Mat L = llt.matrixL();

  parallel_over_paths(n_paths, [&](int p) {
    rng::CounterStream stream(seed, static_cast<std::uint64_t>(p));
    Eigen::VectorXd z(m * n);
    for (int k = 0; k < m * n; ++k) z(k) = stream.normal(k);
    const Eigen::VectorXd x = L * z;
    Mat& path = out.paths[p];
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < n; ++i) path(live_idx[k], i) = x(k * n + i);
  });
  return out;
}

EmpiricalCov empirical_cov(const PathEnsemble& ensemble, double s, double t) {
  auto find = [&](double v) -> int {
    for (size_t i = 0; i < ensemble.times.size(); ++i)
      if (std::abs(ensemble.times[i] - v) <= 1e-12) return static_cast<int>(i);
    throw GridMissError("time " + std::to_string(v) + " is not on the ensemble grid");
  };
  const int is = find(s), it = find(t);
  const int n = ensemble.dim();
  const int N = ensemble.n_paths;
  EmpiricalCov out;
  out.value = Mat::Zero(n, n);
  out.std_error = Mat::Zero(n, n);
  if (N == 0) return out;
  Mat m2 = Mat::Zero(n, n);
  for (const auto& path : ensemble.paths) {
    const Mat prod = path.row(is).transpose() * path.row(it);
    out.value += prod;
    m2 += prod.cwiseProduct(prod);
  }
  out.value /= N;
  if (N > 1) {
    const Mat var = (m2 - double(N) * out.value.cwiseProduct(out.value)) / double(N - 1);
    out.std_error = (var / double(N)).cwiseMax(0.0).cwiseSqrt();
  }
  return out;
}

std::vector<SelfSimilarityRow> self_similarity_report(const OfbmModel& model, double s, double t,
                                                      const std::vector<double>& scales,
                                                      const QuadratureConfig& quad_cfg) {
  Covariance engine(model, quad_cfg);
  auto fresh_cov = [&](double a, double b, Mat* err) {
    Mat e1, e2, e3, e4;
    const Mat sym = 0.5 * (engine.variance(a, &e1) + engine.variance(b, &e2) -
                           engine.variance(b - a, &e3));
    const Mat u = engine.antisym(a, b, &e4);
    if (err) *err = 0.5 * (e1 + e2 + e3) + e4;
    return Mat(sym + u);
  };

  Mat base_err;
  const Mat base = fresh_cov(s, t, &base_err);
  std::vector<SelfSimilarityRow> rows;
  for (double c : scales) {
    SelfSimilarityRow row;
    row.c = c;
    Mat lhs_err;
    const Mat lhs = fresh_cov(c * s, c * t, &lhs_err);
    const Mat cH = matrix_power(model.exponent().SH, c, +1);
    const Mat rhs = cH * base * cH.transpose();
    const Mat rhs_err = cH.cwiseAbs() * base_err * cH.cwiseAbs().transpose();
    row.residual = (lhs - rhs).cwiseAbs().maxCoeff();
    row.err_bound = lhs_err.maxCoeff() + rhs_err.maxCoeff();
    rows.push_back(row);
  }
  return rows;
}

}  // namespace ofbm
