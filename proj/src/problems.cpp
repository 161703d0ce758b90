#include "glmgee/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "glmgee/catalog.hpp"
#include "glmgee/integrator.hpp"

namespace glmgee::problems {
namespace {

double param(const std::map<std::string, double>& params, const std::string& key, double dflt) {
  auto it = params.find(key);
  return it == params.end() ? dflt : it->second;
}

// real fifth root, defined for negative arguments as well
double root5(double x) { return std::copysign(std::pow(std::abs(x), 0.2), x); }

}  // namespace

OdeProblem prince42(double kappa) {
  OdeProblem p;
  p.name = "prince42";
  p.dim = 1;
  p.params["kappa"] = kappa;
  p.f = [](double t, const VecD& y) {
    VecD dy(1);
    dy(0) = y(0) - std::sin(t) + std::cos(t);
    return dy;
  };
  p.exact = [kappa](double t) {
    VecD y(1);
    y(0) = kappa * std::exp(t) + std::sin(t);
    return y;
  };
  p.jacobian = [](double, const VecD&) {
    MatD j(1, 1);
    j(0, 0) = 1.0;
    return j;
  };
  p.y0 = p.exact(0.0);
  p.t0 = 0.0;
  p.tend = 2.0;
  return p;
}

OdeProblem kulikov2013i() {
  OdeProblem p;
  p.name = "kulikov2013i";
  p.dim = 4;
  p.f = [](double t, const VecD& y) {
    VecD dy(4);
    dy(0) = 2.0 * t * root5(y(1)) * y(3);
    dy(1) = 10.0 * t * std::exp(5.0 * (y(2) - 1.0)) * y(3);
    dy(2) = 2.0 * t * y(3);
    dy(3) = -2.0 * t * std::log(y(0));
    return dy;
  };
  p.exact = [](double t) {
    double s = std::sin(t * t);
    VecD y(4);
    y << std::exp(s), std::exp(5.0 * s), s + 1.0, std::cos(t * t);
    return y;
  };
  p.jacobian = [](double t, const VecD& y) {
    MatD j = MatD::Zero(4, 4);
    double r = root5(y(1));
    j(0, 1) = 2.0 * t * y(3) * 0.2 * std::pow(std::abs(y(1)), -0.8);
    j(0, 3) = 2.0 * t * r;
    j(1, 2) = 50.0 * t * std::exp(5.0 * (y(2) - 1.0)) * y(3);
    j(1, 3) = 10.0 * t * std::exp(5.0 * (y(2) - 1.0));
    j(2, 3) = 2.0 * t;
    j(3, 0) = -2.0 * t / y(0);
    return j;
  };
  p.y0 = VecD::Ones(4);
  p.t0 = 0.0;
  // The window reaches past the late unstable stretch near t ~ 4.5 where the
  // global error peaks; shorter windows make the problem look benign.
  p.tend = 4.6;
  return p;
}

OdeProblem hull1972b4() {
  OdeProblem p;
  p.name = "hull1972b4";
  p.dim = 3;
  p.f = [](double, const VecD& y) {
    double r = std::hypot(y(0), y(1));
    if (r == 0.0)
      throw std::domain_error("hull1972b4: f singular at y1 = y2 = 0");
    VecD dy(3);
    dy(0) = -y(1) - y(0) * y(2) / r;
    dy(1) = y(0) - y(1) * y(2) / r;
    dy(2) = y(0) / r;
    return dy;
  };
  p.y0 = VecD(3);
  p.y0 << 3.0, 0.0, 0.0;
  p.t0 = 0.0;
  p.tend = 20.0;
  return p;
}

OdeProblem lstab2(double a, double b, const VecD& y0) {
  if (y0.size() != 2) throw std::invalid_argument("lstab2: y0 must have two components");
  OdeProblem p;
  p.name = "lstab2";
  p.dim = 2;
  p.params["a"] = a;
  p.params["b"] = b;
  p.f = [a, b](double, const VecD& y) {
    VecD dy(2);
    dy(0) = a * y(0) - b * y(1);
    dy(1) = b * y(0) + a * y(1);
    return dy;
  };
  double y10 = y0(0), y20 = y0(1);
  p.exact = [a, b, y10, y20](double t) {
    double e = std::exp(a * t), c = std::cos(b * t), s = std::sin(b * t);
    VecD y(2);
    y(0) = e * (y10 * c - y20 * s);
    y(1) = e * (y10 * s + y20 * c);
    return y;
  };
  p.jacobian = [a, b](double, const VecD&) {
    MatD j(2, 2);
    j << a, -b, b, a;
    return j;
  };
  p.y0 = y0;
  p.t0 = 0.0;
  p.tend = 10.0;
  return p;
}

OdeProblem tree_test(double kappa2, double kappa3) {
  OdeProblem p;
  p.name = "tree_test";
  p.dim = 3;
  p.params["kappa2"] = kappa2;
  p.params["kappa3"] = kappa3;
  p.f = [kappa2, kappa3](double, const VecD& y) {
    VecD dy(3);
    dy(0) = 1.0;
    dy(1) = kappa2 * y(0) * y(0) * y(0);
    dy(2) = kappa3 * y(0) * y(0) * y(0) * y(0);
    return dy;
  };
  p.exact = [kappa2, kappa3](double t) {
    VecD y(3);
    y << t, kappa2 * std::pow(t, 4) / 4.0, kappa3 * std::pow(t, 5) / 5.0;
    return y;
  };
  p.jacobian = [kappa2, kappa3](double, const VecD& y) {
    MatD j = MatD::Zero(3, 3);
    j(1, 0) = 3.0 * kappa2 * y(0) * y(0);
    j(2, 0) = 4.0 * kappa3 * y(0) * y(0) * y(0);
    return j;
  };
  p.y0 = VecD::Zero(3);
  p.t0 = 0.0;
  p.tend = 5.0;
  return p;
}

std::vector<std::string> names() {
  return {"prince42", "kulikov2013i", "hull1972b4", "lstab2", "tree_test"};
}

OdeProblem get(const std::string& name, const std::map<std::string, double>& params) {
  if (name == "prince42") return prince42(param(params, "kappa", 0.0));
  if (name == "kulikov2013i") return kulikov2013i();
  if (name == "hull1972b4") return hull1972b4();
  if (name == "lstab2") {
    VecD y0(2);
    y0 << param(params, "y1", 0.0), param(params, "y2", 1.0);
    return lstab2(param(params, "a", -1.0), param(params, "b", 1.0), y0);
  }
  if (name == "tree_test")
    return tree_test(param(params, "kappa2", 1.0 / 6.0), param(params, "kappa3", 4.0));
  std::ostringstream os;
  os << "unknown problem '" << name << "'; available:";
  for (const auto& n : names()) os << " " << n;
  throw std::out_of_range(os.str());
}

ReferenceOracle::ReferenceOracle(const OdeProblem& problem, double t_end, double grid_dt,
                                 double agree_tol) {
  const TableauD method = to_double(catalog::get("GLM-s5-p3-g0").tableau);
  const double t0 = problem.t0;
  const long n_grid = std::lround((t_end - t0) / grid_dt);
  if (n_grid < 1 || std::abs(t0 + n_grid * grid_dt - t_end) > 1e-9 * std::max(1.0, t_end))
    throw std::invalid_argument("reference oracle: window is not a multiple of grid_dt");

  // Power-of-two subdivision keeps the fine grid bit-aligned with grid_dt
  // multiples. Snapshots are taken on the coarse grid only; the companion
  // output runs one order above the base method.
  auto run = [&](long split, std::vector<VecD>* snapshots) {
    const double dt = grid_dt / static_cast<double>(split);
    GeeState state = initial_state(method, problem, t0, problem.y0);
    const long total = n_grid * split;
    if (snapshots) snapshots->push_back(problem.y0);
    double one_minus_gamma = 1.0 - method.gamma;
    for (long n = 1; n <= total; ++n) {
      state = step(method, problem, state, dt);
      state.t = t0 + static_cast<double>(n) * dt;
      if (snapshots && n % split == 0) {
        VecD eps = (state.slots[1] - state.slots[0]) / one_minus_gamma;
        snapshots->push_back(state.slots[0] + eps);
      }
    }
    VecD eps = (state.slots[1] - state.slots[0]) / one_minus_gamma;
    return VecD(state.slots[0] + eps);
  };

  long split = 1;
  double prev_norm = std::numeric_limits<double>::infinity();
  bool floor_reached = false;
  VecD prev = run(split, nullptr);
  for (int round = 0; round < 14; ++round) {
    split *= 2;
    VecD cur = run(split, nullptr);
    achieved_ = max_norm(VecD(cur - prev));
    double scale = std::max(1.0, max_norm(cur));
    if (achieved_ <= agree_tol * scale) break;
    // stagnation near the accumulated round-off floor: halving stops helping
    if (achieved_ > 0.25 * prev_norm && achieved_ < 1e-8 * scale) {
      floor_reached = true;
      break;
    }
    prev_norm = achieved_;
    prev = cur;
  }
  dt_ = grid_dt / static_cast<double>(split);

  std::vector<VecD> snaps;
  snaps.reserve(static_cast<std::size_t>(n_grid) + 1);
  run(split, &snaps);
  times_.resize(snaps.size());
  for (long k = 0; k <= n_grid; ++k) times_[static_cast<std::size_t>(k)] = t0 + k * grid_dt;
  values_ = std::move(snaps);
  if (!floor_reached &&
      achieved_ > agree_tol * std::max(1.0, max_norm(values_.back())) * 4.0)
    throw std::runtime_error("reference oracle did not converge to the requested agreement");
}

VecD ReferenceOracle::at(double t) const {
  auto it = std::lower_bound(times_.begin(), times_.end(), t - 1e-9 * std::max(1.0, std::abs(t)));
  if (it == times_.end() || std::abs(*it - t) > 1e-9 * std::max(1.0, std::abs(t)))
    throw std::invalid_argument("reference oracle queried off the precomputed grid");
  return values_[static_cast<std::size_t>(it - times_.begin())];
}

VecD reference_solution(const OdeProblem& problem, double t) {
  if (problem.has_exact()) return problem.exact(t);
  static std::mutex mu;
  static std::map<std::string, ReferenceOracle> cache;
  std::scoped_lock lock(mu);
  std::ostringstream key;
  key << problem.name << ":" << problem.t0 << ":" << problem.tend;
  auto it = cache.find(key.str());
  if (it == cache.end()) {
    double grid = (problem.tend - problem.t0) / 1024.0;
    it = cache.emplace(key.str(), ReferenceOracle(problem, problem.tend, grid)).first;
  }
  return it->second.at(t);
}

}  // namespace glmgee::problems
