#pragma once

#include <Eigen/Dense>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace qlxxz {

/// Worker count taken from QLXXZ_THREADS, defaulting to 1.
inline int env_thread_count() {
  const char* env = std::getenv("QLXXZ_THREADS");
  if (!env) return 1;
  const int v = std::atoi(env);
  return v > 0 ? v : 1;
}

/// Runs fn(i) for i in [0, n) across env_thread_count() threads.  Safe only
/// for independent iterations.
inline void parallel_for(long n, const std::function<void(long)>& fn) {
  const int workers = std::min<long>(env_thread_count(), n);
  if (workers <= 1) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([=, &fn] {
      for (long i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [a, b] via the Golub-Welsch eigenproblem.
inline Quadrature gauss_legendre(int n, double a, double b) {
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int j = 1; j < n; ++j) {
    const double v = j / std::sqrt(4.0 * j * j - 1.0);
    jac(j, j - 1) = v;
    jac(j - 1, j) = v;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  Quadrature q;
  q.nodes.resize(n);
  q.weights.resize(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    q.nodes[i] = mid + half * es.eigenvalues()(i);
    const double w0 = es.eigenvectors()(0, i);
    q.weights[i] = 2.0 * w0 * w0 * half;
  }
  return q;
}

}  // namespace qlxxz
