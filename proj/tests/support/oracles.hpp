#pragma once

// Independent reference implementations used by the unit and acceptance tests.

#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include "mirkit/matrix.hpp"
#include "mirkit/ml/hmm.hpp"
#include "mirkit/ml/layers.hpp"
#include "test_support.hpp"

namespace mirkit::testing {

using namespace mirkit::ml;



inline MatrixD random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, double scale = 1.0) {
  MatrixD m(r, c);
  for (auto& v : m.data()) v = uniform(rng, -scale, scale);
  return m;
}

// --- scalar oracles, written straight from the equations ---

inline double scalar_act(ActivationKind k, double x) {
  switch (k) {
    case ActivationKind::linear:
      return x;
    case ActivationKind::sigmoid:
      return 1.0 / (1.0 + std::exp(-x));
    case ActivationKind::tanh:
      return std::tanh(x);
    case ActivationKind::relu:
      return x > 0.0 ? x : 0.0;
    default:
      return x;
  }
}

inline std::vector<double> oracle_dense(const DenseLayer& l, const std::vector<double>& x) {
  std::vector<double> y(l.weights.cols());
  for (std::size_t j = 0; j < y.size(); ++j) {
    double s = l.bias[j];
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * l.weights(i, j);
    y[j] = scalar_act(l.activation, s);
  }
  return y;
}

inline MatrixD oracle_recurrent(const RecurrentLayer& l, const MatrixD& seq) {
  const std::size_t n = l.weights.cols();
  MatrixD out(seq.rows(), n);
  std::vector<double> h(n, 0.0);
  for (std::size_t t = 0; t < seq.rows(); ++t) {
    std::vector<double> next(n);
    for (std::size_t j = 0; j < n; ++j) {
      double s = l.bias[j];
      for (std::size_t i = 0; i < seq.cols(); ++i) s += seq(t, i) * l.weights(i, j);
      for (std::size_t k = 0; k < n; ++k) s += h[k] * l.recurrent_weights(k, j);
      next[j] = scalar_act(l.activation, s);
    }
    h = next;
    for (std::size_t j = 0; j < n; ++j) out(t, j) = h[j];
  }
  return out;
}

inline MatrixD oracle_lstm(const LstmLayer& l, const MatrixD& seq) {
  const std::size_t n = l.input_gate.weights.cols();
  auto pre = [&](const LstmGate& g, std::size_t t, const std::vector<double>& h, std::size_t j) {
    double s = g.bias[j];
    for (std::size_t i = 0; i < seq.cols(); ++i) s += seq(t, i) * g.weights(i, j);
    for (std::size_t k = 0; k < n; ++k) s += h[k] * g.recurrent_weights(k, j);
    return s;
  };
  auto peep = [](const LstmGate& g, std::size_t j, double c) { return g.peephole.empty() ? 0.0 : g.peephole[j] * c; };
  auto sig = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };
  MatrixD out(seq.rows(), n);
  std::vector<double> h(n, 0.0), c(n, 0.0);
  for (std::size_t t = 0; t < seq.rows(); ++t) {
    std::vector<double> hn(n), cn(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double i = sig(pre(l.input_gate, t, h, j) + peep(l.input_gate, j, c[j]));
      const double f = sig(pre(l.forget_gate, t, h, j) + peep(l.forget_gate, j, c[j]));
      const double cand = std::tanh(pre(l.cell, t, h, j));
      cn[j] = f * c[j] + i * cand;
      const double o = sig(pre(l.output_gate, t, h, j) + peep(l.output_gate, j, cn[j]));
      hn[j] = o * std::tanh(cn[j]);
    }
    h = hn;
    c = cn;
    for (std::size_t j = 0; j < n; ++j) out(t, j) = h[j];
  }
  return out;
}

inline DenseLayer random_dense(std::mt19937_64& rng, std::size_t in, std::size_t out, ActivationKind act) {
  return {random_matrix(rng, in, out), random_vector(rng, out), act};
}

inline RecurrentLayer random_recurrent(std::mt19937_64& rng, std::size_t in, std::size_t out) {
  return {random_matrix(rng, in, out), random_matrix(rng, out, out), random_vector(rng, out),
          ActivationKind::tanh};
}

inline LstmGate random_gate(std::mt19937_64& rng, std::size_t in, std::size_t out, bool peephole) {
  return {random_matrix(rng, in, out), random_matrix(rng, out, out), random_vector(rng, out),
          peephole ? random_vector(rng, out) : std::vector<double>{}};
}

inline LstmLayer random_lstm(std::mt19937_64& rng, std::size_t in, std::size_t out, bool peephole) {
  return {random_gate(rng, in, out, peephole), random_gate(rng, in, out, peephole), random_gate(rng, in, out, false),
          random_gate(rng, in, out, peephole)};
}

inline LstmGate zero_gate(std::size_t in, std::size_t out) {
  return {MatrixD(in, out), MatrixD(out, out), std::vector<double>(out, 0.0), {}};
}

inline std::vector<double> row_of(const MatrixD& m, std::size_t r) { return {m.row(r).begin(), m.row(r).end()}; }



struct DenseHmm {
  std::size_t n;
  MatrixD a;  // n x n
  std::vector<double> pi;
  MatrixD emit;  // n x symbols
};

inline DenseHmm random_hmm(std::mt19937_64& rng, std::size_t n, std::size_t symbols) {
  DenseHmm h{n, MatrixD(n, n), std::vector<double>(n), MatrixD(n, symbols)};
  auto normalize = [](std::span<double> row) {
    double s = 0.0;
    for (double v : row) s += v;
    for (double& v : row) v /= s;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) h.a(i, j) = (rng() % 4 == 0 && j != i) ? 0.0 : uniform(rng, 0.05, 1.0);
    normalize(h.a.row(i));
    for (std::size_t k = 0; k < symbols; ++k) h.emit(i, k) = uniform(rng, 0.05, 1.0);
    normalize(h.emit.row(i));
    h.pi[i] = uniform(rng, 0.05, 1.0);
  }
  normalize(h.pi);
  return h;
}

inline HmmModel to_model(const DenseHmm& h) {
  std::vector<Transition> ts;
  for (std::size_t i = 0; i < h.n; ++i)
    for (std::size_t j = 0; j < h.n; ++j)
      if (h.a(i, j) > 0.0) ts.push_back({std::uint32_t(i), std::uint32_t(j), h.a(i, j)});
  return HmmModel(h.n, ts, h.pi, std::make_shared<DiscreteObservations>(h.emit));
}

inline double path_log_prob(const DenseHmm& h, const std::vector<std::size_t>& path, const MatrixD& obs) {
  double lp = std::log(h.pi[path[0]]) + std::log(h.emit(path[0], std::size_t(obs(0, 0))));
  for (std::size_t t = 1; t < path.size(); ++t)
    lp += std::log(h.a(path[t - 1], path[t])) + std::log(h.emit(path[t], std::size_t(obs(t, 0))));
  return lp;
}

template <class F>
inline void for_each_path(std::size_t n, std::size_t len, F f) {
  std::vector<std::size_t> path(len, 0);
  while (true) {
    f(path);
    std::size_t i = 0;
    while (i < len && ++path[i] == n) path[i++] = 0;
    if (i == len) break;
  }
}


struct BruteForce {
  double best_log_probability = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_path;
  std::vector<std::vector<double>> marginals;  // frames x states, filtered
};

/// Enumerates every path: the best one, and the filtered state marginals.
inline BruteForce brute_force(const DenseHmm& h, const MatrixD& obs) {
  const std::size_t len = obs.rows();
  BruteForce r;
  r.marginals.assign(len, std::vector<double>(h.n, 0.0));
  for_each_path(h.n, len, [&](const std::vector<std::size_t>& path) {
    const double lp = path_log_prob(h, path, obs);
    if (lp > r.best_log_probability) {
      r.best_log_probability = lp;
      r.best_path = path;
    }
  });
  for (std::size_t t = 0; t < len; ++t) {
    for_each_path(h.n, t + 1, [&](const std::vector<std::size_t>& prefix) {
      r.marginals[t][prefix[t]] += std::exp(path_log_prob(h, prefix, obs));
    });
    double z = 0.0;
    for (double v : r.marginals[t]) z += v;
    for (double& v : r.marginals[t]) v /= z;
  }
  return r;
}

}  // namespace mirkit::testing
