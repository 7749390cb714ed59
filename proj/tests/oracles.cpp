#include "oracles.hpp"

#include <cmath>
#include <numbers>

namespace oracle {

std::vector<cplx> naive_dft(const std::vector<cplx>& samples, int d, int n) {
  std::size_t N = 1;
  for (int a = 0; a < d; ++a) N *= n;
  std::vector<cplx> out(N);
  std::vector<int> k(d), x(d);
  for (std::size_t fk = 0; fk < N; ++fk) {
    std::size_t t = fk;
    for (int a = d - 1; a >= 0; --a) { k[a] = t % n; t /= n; }
    cplx acc(0.0);
    for (std::size_t fx = 0; fx < N; ++fx) {
      std::size_t u = fx;
      double ph = 0.0;
      for (int a = d - 1; a >= 0; --a) {
        x[a] = u % n;
        u /= n;
        ph += double(k[a]) * x[a];
      }
      acc += samples[fx] * std::polar(1.0, -2.0 * std::numbers::pi * ph / n);
    }
    out[fk] = acc / double(N);
  }
  return out;
}

std::vector<double> centered_difference(const std::vector<double>& s, int d, int n, double dx, int axis) {
  std::size_t stride = 1;
  for (int a = d - 1; a > axis; --a) stride *= n;
  std::vector<double> out(s.size());
  for (std::size_t m = 0; m < s.size(); ++m) {
    int i = (m / stride) % n;
    std::size_t base = m - i * stride;
    std::size_t p = base + ((i + 1) % n) * stride;
    std::size_t q = base + ((i + n - 1) % n) * stride;
    out[m] = (s[p] - s[q]) / (2.0 * dx);
  }
  return out;
}

double dense_holder_1d(const std::vector<double>& s, double L, double gamma) {
  const int n = static_cast<int>(s.size());
  const double dx = L / n;
  double sup = 0.0, semi = 0.0;
  for (int i = 0; i < n; ++i) sup = std::max(sup, std::abs(s[i]));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      int o = std::abs(i - j);
      double dist = std::min(o, n - o) * dx;
      if (dist >= 1.0) continue;
      semi = std::max(semi, std::abs(s[i] - s[j]) / std::pow(dist, gamma));
    }
  return sup + semi;
}

double bisection(const std::function<double(double)>& f, double a, double b, double tol) {
  double fa = f(a);
  for (int it = 0; it < 400 && b - a > tol; ++it) {
    double c = 0.5 * (a + b);
    double fc = f(c);
    if ((fc < 0) == (fa < 0)) { a = c; fa = fc; } else { b = c; }
  }
  return 0.5 * (a + b);
}

namespace {
double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2) ++n;
  double h = (b - a) / n, acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}
}  // namespace

double gamma_quadrature(double eta) {
  // int_0^1 e^{-x} x^{eta-1} dx = (1/eta) int_0^1 exp(-u^{1/eta}) du.
  double head = simpson([eta](double u) { return std::exp(-std::pow(u, 1.0 / eta)); }, 0.0, 1.0, 200000) / eta;
  double tail = simpson([eta](double x) { return std::exp(-x) * std::pow(x, eta - 1.0); }, 1.0, 80.0, 400000);
  return head + tail;
}

namespace {
std::vector<double> d1(const std::vector<double>& v, double h) {
  const int n = v.size();
  std::vector<double> o(n);
  for (int i = 0; i < n; ++i) {
    auto at = [&](int k) { return v[((i + k) % n + n) % n]; };
    o[i] = (45.0 * (at(1) - at(-1)) - 9.0 * (at(2) - at(-2)) + (at(3) - at(-3))) / (60.0 * h);
  }
  return o;
}
std::vector<double> d2(const std::vector<double>& v, double h) {
  const int n = v.size();
  std::vector<double> o(n);
  for (int i = 0; i < n; ++i) {
    auto at = [&](int k) { return v[((i + k) % n + n) % n]; };
    o[i] = (2.0 * (at(3) + at(-3)) - 27.0 * (at(2) + at(-2)) + 270.0 * (at(1) + at(-1)) - 490.0 * at(0)) /
           (180.0 * h * h);
  }
  return o;
}
}  // namespace

std::vector<std::vector<double>> method_of_lines_1d(const std::vector<double>& vT,
                                                    const std::function<double(double, double)>& b,
                                                    const std::function<double(double, double)>& g, double lam,
                                                    double L, double T, int M, int substeps) {
  const int n = vT.size();
  const double h = L / n;
  // Backward time tau = T - t: dv/dtau = (1/2) v_xx + b v_x - lam v - g.
  auto rhs = [&](double t, const std::vector<double>& v) {
    auto vx = d1(v, h);
    auto vxx = d2(v, h);
    std::vector<double> r(n);
    for (int i = 0; i < n; ++i) {
      double x = i * h;
      r[i] = 0.5 * vxx[i] + b(t, x) * vx[i] - lam * v[i] - g(t, x);
    }
    return r;
  };
  std::vector<std::vector<double>> out(M + 1);
  std::vector<double> v = vT;
  out[M] = v;
  const double dt = T / M / substeps;
  double t = T;
  for (int m = M - 1; m >= 0; --m) {
    for (int s = 0; s < substeps; ++s) {
      auto axpy = [&](const std::vector<double>& a, const std::vector<double>& k, double c) {
        std::vector<double> r(n);
        for (int i = 0; i < n; ++i) r[i] = a[i] + c * k[i];
        return r;
      };
      auto k1 = rhs(t, v);
      auto k2 = rhs(t - 0.5 * dt, axpy(v, k1, 0.5 * dt));
      auto k3 = rhs(t - 0.5 * dt, axpy(v, k2, 0.5 * dt));
      auto k4 = rhs(t - dt, axpy(v, k3, dt));
      for (int i = 0; i < n; ++i) v[i] += dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
      t -= dt;
    }
    out[m] = v;
  }
  return out;
}

double bernstein_direct(const std::function<double(double)>& f, int n, double s) {
  long double acc = 0.0L, c = 1.0L;
  for (int j = 0; j <= n; ++j) {
    if (j > 0) c = c * (n - j + 1) / j;
    long double w = c * std::pow(static_cast<long double>(s), j) * std::pow(1.0L - s, n - j);
    acc += w * f(static_cast<double>(j) / n);
  }
  return static_cast<double>(acc);
}

}  // namespace oracle
