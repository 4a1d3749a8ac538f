#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace formsim {

// One classical RK4 step for a fixed-size state. `rates(s)` returns ds/dt.
template <std::size_t N, typename F>
std::array<double, N> rk4_step(const std::array<double, N>& s, double dt, F&& rates) {
  const std::array<double, N> k1 = rates(s);
  std::array<double, N> tmp;
  for (std::size_t i = 0; i < N; ++i) tmp[i] = s[i] + 0.5 * dt * k1[i];
  const std::array<double, N> k2 = rates(tmp);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = s[i] + 0.5 * dt * k2[i];
  const std::array<double, N> k3 = rates(tmp);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = s[i] + dt * k3[i];
  const std::array<double, N> k4 = rates(tmp);
  std::array<double, N> out;
  for (std::size_t i = 0; i < N; ++i)
    out[i] = s[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

// RK4 step for a dynamically-sized coupled state. `rates(s, ds)` fills ds.
template <typename F>
void rk4_step_inplace(std::vector<double>& s, double dt, F&& rates) {
  const std::size_t n = s.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  rates(s, k1);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = s[i] + 0.5 * dt * k1[i];
  rates(tmp, k2);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = s[i] + 0.5 * dt * k2[i];
  rates(tmp, k3);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = s[i] + dt * k3[i];
  rates(tmp, k4);
  for (std::size_t i = 0; i < n; ++i)
    s[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

}  // namespace formsim
