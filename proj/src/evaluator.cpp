#include "optswitch/evaluator.hpp"

#include <cmath>

#include "optswitch/csv.hpp"

namespace optswitch {

namespace {

// psi, xi and costs evaluated once per node; path sampling then only indexes
struct EvalCache {
  int modes = 0;
  int steps = 0;
  std::vector<TriGrid<double>> psi;
  std::vector<TriGrid<double>> cost;       // (j*m + i) where defined
  std::vector<double> xi_terminal;         // per terminal node * mode

  double xi(int j, int k) const { return xi_terminal[static_cast<std::size_t>(k) * modes + j]; }
  double cost_at(int j, int i, int n, int k) const {
    return cost[static_cast<std::size_t>(j) * modes + i](n, k);
  }
};

EvalCache build_cache(const ProblemSpec& spec, const Lattice& lat) {
  EvalCache c;
  c.modes = spec.modes;
  c.steps = lat.steps();
  int m = spec.modes;
  int N = lat.steps();
  c.psi.assign(m, TriGrid<double>(N + 1));
  c.cost.assign(static_cast<std::size_t>(m) * m, TriGrid<double>());
  for (int j = 0; j < m; ++j)
    for (int i : spec.switch_sets[j])
      c.cost[static_cast<std::size_t>(j) * m + i] = TriGrid<double>(N + 1);
  for (int n = 0; n <= N; ++n) {
    double t = lat.time(n);
    for (int k = 0; k <= n; ++k) {
      double x = lat.state(n, k);
      for (int j = 0; j < m; ++j) {
        c.psi[j](n, k) = spec.psi[j].eval(t, x);
        for (int i : spec.switch_sets[j])
          c.cost[static_cast<std::size_t>(j) * m + i](n, k) = spec.cost[j][i]->eval(t, x);
      }
    }
  }
  c.xi_terminal.resize(static_cast<std::size_t>(N + 1) * m);
  double T = lat.time(N);
  for (int k = 0; k <= N; ++k)
    for (int j = 0; j < m; ++j)
      c.xi_terminal[static_cast<std::size_t>(k) * m + j] = spec.xi[j].eval(T, lat.state(N, k));
  return c;
}

// chain following against the cache (keeps floats identical to evaluate_exact)
struct CachedChain {
  int mode;
  double cost;
};

CachedChain follow_chain(const EvalCache& c, const Policy& pol, int n, int k, int start) {
  CachedChain r{start, 0.0};
  std::uint32_t visited = 1u << start;
  while (!pol.stays(n, k, r.mode)) {
    int next = pol.target(n, k, r.mode);
    if (visited & (1u << next))
      throw Error(ErrorCode::InstantaneousCycle,
                  "policy revisits mode " + std::to_string(next + 1) + " within step " +
                      std::to_string(n));
    r.cost += c.cost_at(r.mode, next, n, k);
    visited |= 1u << next;
    r.mode = next;
  }
  return r;
}

void walk_path(const ProblemSpec& spec, const Lattice& lat, const Policy& pol,
               const ControlTable& ctl, const EvalCache& cache, RandomStream& stream,
               PathSample& out) {
  int N = lat.steps();
  out.moves.assign(N, 0);
  out.states.assign(N + 1, 0.0);
  out.strategy.events.clear();
  out.strategy.events.push_back({0, spec.start_mode});
  out.running_payoff = 0.0;
  out.switch_cost = 0.0;
  out.girsanov_weight = 1.0;

  int k = 0;
  int mode = spec.start_mode;
  for (int n = 0; n < N; ++n) {
    out.states[n] = lat.state(n, k);
    std::uint32_t visited = 1u << mode;
    while (!pol.stays(n, k, mode)) {
      int next = pol.target(n, k, mode);
      if (visited & (1u << next))
        throw Error(ErrorCode::InstantaneousCycle,
                    "policy revisits mode " + std::to_string(next + 1) + " within step " +
                        std::to_string(n));
      out.switch_cost += cache.cost_at(mode, next, n, k);
      visited |= 1u << next;
      mode = next;
      out.strategy.events.push_back({n, mode});
    }
    out.running_payoff += cache.psi[mode](n, k) * lat.dt();
    double p = controlled_up_probability(lat, spec.ambiguity, ctl.at(n, k, mode), lat.time(n),
                                         lat.state(n, k));
    bool up = stream.uniform01() < p;
    out.moves[n] = up ? 1 : 0;
    out.girsanov_weight *= 2.0 * (up ? p : 1.0 - p);
    k += up ? 1 : 0;
  }
  out.states[N] = lat.state(N, k);
  out.terminal_value = cache.xi(mode, k);
}

double pairwise_sum_range(const double* data, std::size_t count) {
  if (count <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) s += data[i];
    return s;
  }
  std::size_t half = count / 2;
  return pairwise_sum_range(data, half) + pairwise_sum_range(data + half, count - half);
}

}  // namespace

double pairwise_sum(const std::vector<double>& values) {
  return pairwise_sum_range(values.data(), values.size());
}

EvalReport evaluate_exact(const ProblemSpec& spec, const Lattice& lat, const Policy& pol,
                          const ControlTable& ctl) {
  EvalCache cache = build_cache(spec, lat);
  int m = spec.modes;
  int N = lat.steps();
  double dt = lat.dt();

  std::vector<TriGrid<double>> V(m, TriGrid<double>(N + 1));
  for (int k = 0; k <= N; ++k)
    for (int j = 0; j < m; ++j) V[j](N, k) = cache.xi(j, k);

  for (int n = N - 1; n >= 0; --n) {
    double t = lat.time(n);
    for (int k = 0; k <= n; ++k) {
      double x = lat.state(n, k);
      for (int j = 0; j < m; ++j) {
        CachedChain chain = follow_chain(cache, pol, n, k, j);
        double p = controlled_up_probability(lat, spec.ambiguity, ctl.at(n, k, chain.mode), t, x);
        V[j](n, k) = -chain.cost + cache.psi[chain.mode](n, k) * dt +
                     p * V[chain.mode](n + 1, k + 1) + (1.0 - p) * V[chain.mode](n + 1, k);
      }
    }
  }

  EvalReport rep;
  rep.method = "exact";
  rep.estimate = V[spec.start_mode](0, 0);
  return rep;
}

EvalReport evaluate_mc(const ProblemSpec& spec, const Lattice& lat, const Policy& pol,
                       const ControlTable& ctl, long paths, std::uint64_t seed) {
  if (paths < 1) throw Error(ErrorCode::RangeError, "paths must be >= 1");
  EvalCache cache = build_cache(spec, lat);

  std::vector<double> payoffs(static_cast<std::size_t>(paths));
  PathSample sample;
  for (long p = 0; p < paths; ++p) {
    RandomStream stream(seed, static_cast<std::uint64_t>(p));
    walk_path(spec, lat, pol, ctl, cache, stream, sample);
    payoffs[static_cast<std::size_t>(p)] = sample.payoff();
  }

  EvalReport rep;
  rep.method = "monte_carlo";
  rep.paths = paths;
  rep.seed = seed;
  rep.estimate = pairwise_sum(payoffs) / static_cast<double>(paths);
  if (paths > 1) {
    std::vector<double> sq(payoffs.size());
    for (std::size_t i = 0; i < payoffs.size(); ++i) {
      double d = payoffs[i] - rep.estimate;
      sq[i] = d * d;
    }
    rep.std_error =
        std::sqrt(pairwise_sum(sq) / (static_cast<double>(paths) * (static_cast<double>(paths) - 1.0)));
  }
  return rep;
}

PathSample simulate_path(const ProblemSpec& spec, const Lattice& lat, const Policy& pol,
                         const ControlTable& ctl, RandomStream& stream) {
  EvalCache cache = build_cache(spec, lat);
  PathSample sample;
  walk_path(spec, lat, pol, ctl, cache, stream, sample);
  return sample;
}

std::string EvalReport::csv_row() const {
  return method + "," + g17(estimate) + "," + g17(std_error) + "," + std::to_string(paths) + "," +
         std::to_string(seed);
}

}  // namespace optswitch
