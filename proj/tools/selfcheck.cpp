#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "fracbd/linear.hpp"
#include "fracbd/mlf.hpp"
#include "fracbd/model.hpp"
#include "fracbd/paths.hpp"
#include "fracbd/quasi.hpp"
#include "fracbd/spectral.hpp"

namespace fracbd::cli {

namespace {

struct Check {
  std::string name;
  std::function<bool(std::string&)> run;  // fills a short detail string
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

int selfcheck(std::ostream& out) {
  const RateSchedule sub = RateSchedule::linear(0.5, 1.0);
  const LinearParams lp(0.5, 1.0);

  std::vector<Check> checks{
      {"mlf: E_1(-1) = 1/e",
       [](std::string& d) {
         const double err = std::fabs(ml_eval(FracOrder(1.0), -1.0) - std::exp(-1.0));
         d = num(err);
         return err == 0.0;
       }},
      {"mlf: E_1/2(-x) = exp(x^2) erfc(x), x in {0.5, 3}",
       [](std::string& d) {
         double worst = 0.0;
         for (double x : {0.5, 3.0}) {
           const double ref = std::exp(x * x) * std::erfc(x);
           worst = std::max(worst, std::fabs(ml_eval(FracOrder(0.5), -x) / ref - 1.0));
         }
         d = num(worst);
         return worst < 1e-12;
       }},
      {"mlf: positive and nonincreasing on [-1e6, 0]",
       [](std::string& d) {
         for (double a : {0.3, 0.5, 0.7, 0.9, 1.0}) {
           double prev = 1.0;
           for (double x = 0.0; x >= -1e6; x = (x == 0.0 ? -1e-3 : x * 1.7)) {
             const double v = ml_eval(FracOrder(a), x);
             if (!(v > 0.0 || (a == 1.0 && v == 0.0)) || v > prev) {
               d = "alpha=" + num(a) + " x=" + num(x);
               return false;
             }
             prev = v;
           }
         }
         return true;
       }},
      {"mlf: Laplace transform identity",
       [](std::string& d) {
         const auto r = ml_laplace_residual(FracOrder(0.7), 1.0, 1.0);
         d = num(r.residual);
         return r.converged && r.residual < 1e-6;
       }},
      {"model: reversibility pi_i q_ij = pi_j q_ji",
       [&](std::string& d) {
         const auto g = build_generator(sub, 50);
         const auto pi = pi_weights(sub, 50);
         double worst = 0.0;
         for (std::size_t i = 1; i < 50; ++i) {
           worst = std::max(worst, std::fabs(pi(i) * g.at(i, i + 1) - pi(i + 1) * g.at(i + 1, i)) / pi(i));
         }
         d = num(worst);
         return worst < 1e-14;
       }},
      {"model: generator row sums",
       [&](std::string& d) {
         const auto g = build_generator(sub, 20);
         double worst = std::fabs(g.row_sum(1) + 1.0);
         for (std::size_t i = 2; i <= 20; ++i) worst = std::max(worst, std::fabs(g.row_sum(i)));
         d = num(worst);
         return worst < 1e-14;
       }},
      {"model: classify linear regimes",
       [](std::string& d) {
         const auto lo = classify(RateSchedule::linear(0.5, 1.0));
         const auto crit = classify(RateSchedule::linear(1.0, 1.0));
         const auto hi = classify(RateSchedule::linear(2.0, 1.0));
         const bool ok = lo.a.status == SeriesStatus::diverged &&
                         lo.b.status == SeriesStatus::convergent &&
                         crit.a.status == SeriesStatus::diverged &&
                         crit.b.status == SeriesStatus::diverged &&
                         hi.a.status == SeriesStatus::convergent;
         d = std::string("B=") + num(lo.b.partial_sum);
         return ok;
       }},
      {"spectral: orthonormality and conservation (M=60)",
       [&](std::string& d) {
         const auto dec = decompose(sub, 60);
         const double orth = dec.orthonormality_residual();
         const auto row = transition_row(dec, FracOrder(0.7), 1, 2.0);
         double mass = 0.0;
         for (double p : row) mass += p;
         const double cons = std::fabs(mass - survival_prob(dec, FracOrder(0.7), 1, 2.0));
         d = num(orth) + " / " + num(cons);
         return orth < 1e-8 && cons < 1e-9;
       }},
      {"spectral: alpha=1 survival vs closed form",
       [&](std::string& d) {
         const auto dec = decompose(sub, 200);
         const double err = std::fabs(survival_prob(dec, FracOrder(1.0), 1, 1.0) -
                                      survival_classical(lp, 1.0));
         d = num(err);
         return err < 1e-6;
       }},
      {"quasi: indicator-form QLD vs Green function",
       [&](std::string& d) {
         const auto g = green_function(build_generator(sub, 200));
         double worst = 0.0;
         for (std::size_t i0 : {1, 2, 5}) {
           const auto q = qld_coefficients(sub, i0, 30);
           for (std::size_t n = 1; n <= 30; ++n) {
             worst = std::max(worst, std::fabs(q.coefficients[n - 1] - g(i0, n)));
           }
         }
         d = num(worst);
         return worst < 1e-6;
       }},
      {"quasi: principal qsd is stationary for alpha in {0.5, 1}",
       [&](std::string& d) {
         const auto dec = decompose(sub, 60);
         const auto q = qsd_principal(dec);
         double worst = 0.0;
         for (double a : {0.5, 1.0}) {
           worst = std::max(worst, qsd_stationarity_check(dec, FracOrder(a), q.nu, q.theta,
                                                          {0.5, 2.0, 10.0}));
         }
         d = num(worst);
         return worst < 1e-8;
       }},
      {"linear: fractional survival at alpha=1 equals classical",
       [&](std::string& d) {
         const double err = std::fabs(survival_fractional(lp, FracOrder(1.0), 1.0).value -
                                      survival_classical(lp, 1.0));
         d = num(err);
         return err < 1e-10;
       }},
      {"paths: parallel and serial estimators agree bit for bit",
       [&](std::string& d) {
         const auto par = estimate_pmf(SimMethod::renewal, sub, FracOrder(0.7), 1, 1.0, 2000, 11);
         const auto ser = estimate_pmf_serial(SimMethod::renewal, sub, FracOrder(0.7), 1, 1.0, 2000, 11);
         d = "n=2000";
         return par.mass == ser.mass && par.std_err == ser.std_err;
       }},
  };

  int failed = 0;
  for (auto& c : checks) {
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("threw: ") + e.what();
    }
    out << (ok ? "ok   " : "FAIL ") << c.name;
    if (!detail.empty()) out << "  [" << detail << "]";
    out << "\n";
    if (!ok) ++failed;
  }
  out << (failed == 0 ? "selfcheck passed" : "selfcheck FAILED") << " (" << checks.size() - failed
      << "/" << checks.size() << ")\n";
  return failed;
}

}  // namespace fracbd::cli
