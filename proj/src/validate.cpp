#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "optswitch/problem.hpp"

namespace optswitch {

namespace {

std::string node_location(int n, int k) {
  return "node(n=" + std::to_string(n) + ",k=" + std::to_string(k) + ")";
}

std::string mode_name(int j) { return std::to_string(j + 1); }  // 1-based for messages

// All simple directed cycles of the switch graph, each reported once with its
// smallest vertex first. Vertex count is small (switch graphs have one vertex
// per mode), so a plain path DFS is enough.
std::vector<std::vector<int>> simple_cycles(const std::vector<std::vector<int>>& adjacency) {
  std::vector<std::vector<int>> cycles;
  int m = static_cast<int>(adjacency.size());
  std::vector<int> path;
  std::vector<bool> on_path(m, false);

  auto dfs = [&](auto&& self, int root, int v) -> void {
    path.push_back(v);
    on_path[v] = true;
    for (int w : adjacency[v]) {
      if (w < root) continue;
      if (w == root) cycles.push_back(path);
      else if (!on_path[w]) self(self, root, w);
    }
    on_path[v] = false;
    path.pop_back();
  };

  for (int root = 0; root < m; ++root) dfs(dfs, root, root);
  return cycles;
}

std::string cycle_text(const std::vector<int>& cycle) {
  std::string s;
  for (int v : cycle) s += mode_name(v) + "->";
  s += mode_name(cycle.front());
  return s;
}

class Validator {
 public:
  Validator(const ProblemSpec& spec, const Lattice& lat) : spec_(spec), lat_(lat) {}

  ValidationReport run() {
    scan_costs();
    check_cycles();
    check_closure();
    check_terminals();
    check_step_size();
    return std::move(report_);
  }

 private:
  void add(Severity sev, FindingCode code, std::string location, std::string message) {
    report_.findings.push_back({sev, code, std::move(location), std::move(message)});
  }

  // (a) cost non-negativity and (d) strict triangle at every node; also
  // record per-edge minima for the cycle pre-check
  void scan_costs() {
    int m = spec_.modes;
    edge_min_.assign(m, std::vector<double>(m, std::numeric_limits<double>::infinity()));
    std::vector<std::vector<bool>> reported_neg(m, std::vector<bool>(m, false));
    std::vector<bool> reported_tri(static_cast<std::size_t>(m) * m * m, false);
    std::vector<std::vector<double>> c(m, std::vector<double>(m, 0.0));

    for (int n = 0; n <= lat_.steps(); ++n) {
      double t = lat_.time(n);
      for (int k = 0; k <= n; ++k) {
        double x = lat_.state(n, k);
        for (int j = 0; j < m; ++j) {
          for (int i : spec_.switch_sets[j]) {
            double v;
            try {
              v = spec_.switch_cost(j, i, t, x);
            } catch (const Error& e) {
              if (!reported_neg[j][i]) {
                reported_neg[j][i] = true;
                add(Severity::Error, FindingCode::NegativeCost, node_location(n, k),
                    "cost c(" + mode_name(j) + "," + mode_name(i) +
                        ") cannot be evaluated: " + e.what());
              }
              v = 0.0;
            }
            c[j][i] = v;
            edge_min_[j][i] = std::min(edge_min_[j][i], v);
            if (v < 0.0 && !reported_neg[j][i]) {
              reported_neg[j][i] = true;
              add(Severity::Error, FindingCode::NegativeCost, node_location(n, k),
                  "cost c(" + mode_name(j) + "," + mode_name(i) + ") = " + std::to_string(v) +
                      " is negative");
            }
          }
        }
        for (int j = 0; j < m; ++j) {
          for (int i : spec_.switch_sets[j]) {
            for (int kk : spec_.switch_sets[i]) {
              if (kk == j || !spec_.can_switch(j, kk)) continue;
              std::size_t id = (static_cast<std::size_t>(j) * m + i) * m + kk;
              if (reported_tri[id]) continue;
              if (!(c[j][kk] < c[j][i] + c[i][kk])) {
                reported_tri[id] = true;
                add(Severity::Error, FindingCode::TriangleViolated, node_location(n, k),
                    "c(" + mode_name(j) + "," + mode_name(kk) + ") = " + std::to_string(c[j][kk]) +
                        " is not below c(" + mode_name(j) + "," + mode_name(i) + ") + c(" +
                        mode_name(i) + "," + mode_name(kk) +
                        ") = " + std::to_string(c[j][i] + c[i][kk]));
              }
            }
          }
        }
      }
    }
  }

  // (b) every directed cycle must carry strictly positive total cost at
  // every node; a cycle whose edge-minima already sum to a positive value
  // cannot fail and is skipped
  void check_cycles() {
    auto cycles = simple_cycles(spec_.switch_sets);
    for (const auto& cycle : cycles) {
      double lower = 0.0;
      for (std::size_t l = 0; l < cycle.size(); ++l)
        lower += edge_min_[cycle[l]][cycle[(l + 1) % cycle.size()]];
      if (lower > 0.0) continue;

      bool reported = false;
      for (int n = 0; n <= lat_.steps() && !reported; ++n) {
        double t = lat_.time(n);
        for (int k = 0; k <= n && !reported; ++k) {
          double x = lat_.state(n, k);
          double total = 0.0;
          for (std::size_t l = 0; l < cycle.size(); ++l)
            total += spec_.switch_cost(cycle[l], cycle[(l + 1) % cycle.size()], t, x);
          if (!(total > 0.0)) {
            reported = true;
            add(Severity::Error, FindingCode::FreeLoop, node_location(n, k),
                "cycle " + cycle_text(cycle) + " has total cost " + std::to_string(total));
          }
        }
      }
    }
  }

  // (c) reachability closure of the switch structure
  void check_closure() {
    for (int j = 0; j < spec_.modes; ++j) {
      for (int i : spec_.switch_sets[j]) {
        for (int k : spec_.switch_sets[i]) {
          if (k == j || spec_.can_switch(j, k)) continue;
          add(Severity::Error, FindingCode::NotClosed, "structure",
              "switching " + mode_name(j) + "->" + mode_name(i) + "->" + mode_name(k) +
                  " is possible but " + mode_name(j) + "->" + mode_name(k) + " is not allowed");
        }
      }
    }
  }

  // (e) terminal payoffs must dominate switch-and-terminate at T
  void check_terminals() {
    int m = spec_.modes;
    int N = lat_.steps();
    double T = lat_.time(N);
    std::vector<std::vector<bool>> reported(m, std::vector<bool>(m, false));
    std::vector<double> xi(m);
    for (int k = 0; k <= N; ++k) {
      double x = lat_.state(N, k);
      bool ok = true;
      for (int j = 0; j < m; ++j) {
        try {
          xi[j] = spec_.xi[j].eval(T, x);
        } catch (const Error& e) {
          if (!reported[j][j]) {
            reported[j][j] = true;
            add(Severity::Error, FindingCode::TerminalInconsistent, node_location(N, k),
                "terminal payoff of mode " + mode_name(j) + " cannot be evaluated: " + e.what());
          }
          ok = false;
        }
      }
      if (!ok) continue;
      for (int j = 0; j < m; ++j) {
        for (int i : spec_.switch_sets[j]) {
          if (reported[j][i]) continue;
          double c = spec_.switch_cost(j, i, T, x);
          if (xi[j] < xi[i] - c) {
            reported[j][i] = true;
            add(Severity::Error, FindingCode::TerminalInconsistent, node_location(N, k),
                "xi(" + mode_name(j) + ") = " + std::to_string(xi[j]) + " is below xi(" +
                    mode_name(i) + ") - c(" + mode_name(j) + "," + mode_name(i) +
                    ") = " + std::to_string(xi[i] - c));
          }
        }
      }
    }
  }

  void check_step_size() {
    double b = spec_.ambiguity.max_drift();
    if (b * lat_.sqrt_dt() >= 1.0) {
      add(Severity::Warning, FindingCode::StepTooCoarse, "lattice",
          "max |drift| * sqrt(dt) = " + std::to_string(b * lat_.sqrt_dt()) +
              " >= 1; controlled step probabilities will fail until the step count is raised");
    }
  }

  const ProblemSpec& spec_;
  const Lattice& lat_;
  std::vector<std::vector<double>> edge_min_;
  ValidationReport report_;
};

}  // namespace

ValidationReport validate(const ProblemSpec& spec, const Lattice& lat) {
  return Validator(spec, lat).run();
}

}  // namespace optswitch
