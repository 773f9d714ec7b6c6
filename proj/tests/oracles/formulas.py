# Copyright 2026 The Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Independent high-precision evaluation of the closed-form quantities.

Prints every value frozen into the C++ tests, computed with mpmath at 50
significant digits. Run: python3 tests/oracles/formulas.py
"""

import mpmath as mp

mp.mp.dps = 50


def radius(delta, n):
  return mp.sqrt(mp.log(2 / mp.mpf(delta)) / (2 * mp.mpf(n)))


def audit_threshold(n, n_sub, delta, alpha):
  denom = mp.mpf(n_sub) / n - radius(delta, n)
  return alpha / denom + 2 * radius(delta, n_sub)


def alpha_prime(alpha, delta, n):
  r = radius(delta, n)
  return alpha + 4 * r + 2 * r / (alpha - 2 * r) ** 2


def width(alpha, beta, eps, m, gamma, delta, k, moment):
  return (alpha / gamma + eps + mp.mpf(1) / m +
          ((moment + eps + mp.mpf(1) / m + beta / gamma) / delta) ** (mp.mpf(1) / k))


def plan(alpha_t, beta_t, delta_t, eps, groups, k, m):
  scale = 6 + 2 / eps**2
  ca = (alpha_t - eps) / scale
  cb = (beta_t - eps) / scale
  q_bar = 6 * groups * k * m**2 / (ca**2 * cb**2)
  delta = delta_t / max(3 * groups * (k * m**2 + m), q_bar)
  log_q = mp.log(2 * q_bar / delta)
  log_1 = mp.log(2 / delta)
  n_alpha = log_q / (2 * ca**2)
  n_beta = log_q / (2 * cb**2)
  alpha = 2 * mp.sqrt(log_q / (2 * n_alpha)) + eps
  beta = 2 * mp.sqrt(log_q / (2 * n_beta)) + eps
  n = max(log_q / log_1 * n_alpha, log_q / log_1 * n_beta, 2 * log_1 / alpha**2,
          2 * log_1 / beta**2)
  return dict(alpha=alpha, beta=beta, delta=delta, n=n, q_bar=q_bar, n_alpha=n_alpha,
              n_beta=n_beta, c=ca)


def show(name, value):
  print(f"{name} = {mp.nstr(value, 17)}")


def main():
  show("threshold(800, 200, 0.05, 0.05)", audit_threshold(800, 200, mp.mpf("0.05"), mp.mpf("0.05")))
  show("alpha_prime(0.1, 0.05, 1e7)", alpha_prime(mp.mpf("0.1"), mp.mpf("0.05"), mp.mpf(10)**7))
  show("alpha_prime(0.05, 0.01, 1e6)", alpha_prime(mp.mpf("0.05"), mp.mpf("0.01"), mp.mpf(10)**6))
  show("width(0.005,0.005,0.001,1000,0.25,0.1,2,0.01)",
       width(mp.mpf("0.005"), mp.mpf("0.005"), mp.mpf("0.001"), 1000, mp.mpf("0.25"),
             mp.mpf("0.1"), 2, mp.mpf("0.01")))
  for groups, k in ((8, 2), (16, 2), (8, 4)):
    p = plan(mp.mpf("0.2"), mp.mpf("0.2"), mp.mpf("0.05"), mp.mpf("0.05"), groups, k, 10)
    for key in ("c", "q_bar", "delta", "n_alpha", "alpha", "n"):
      show(f"plan(|G|={groups}, k={k}, m=10).{key}", p[key])


if __name__ == "__main__":
  main()
