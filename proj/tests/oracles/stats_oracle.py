# Copyright 2026 The qcvv Authors
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

"""Independent scipy oracle for the statistics tests.

    python3 tests/oracles/stats_oracle.py
"""
import numpy as np
from scipy import stats
from scipy.fft import dct


def g_test(a, b):
    table = np.array([a, b], dtype=float)
    g, p, dof, _ = stats.chi2_contingency(table, correction=False, lambda_="log-likelihood")
    return g, p, dof


def main():
    pairs = [([30, 70], [45, 55]), ([10, 90], [12, 88]), ([50, 50], [50, 50]), ([0, 100], [3, 97])]
    ps = []
    for a, b in pairs:
        g, p, dof = g_test(a, b)
        ps.append(p)
        print("G %r %r -> G=%r dof=%d p=%r nsigma=%r" % (a, b, g, dof, p, (g - dof) / np.sqrt(2 * dof)))
    print("BH 0.05 reject:", stats.false_discovery_control(ps) <= 0.05)
    np.set_printoptions(precision=17)
    x = np.array([1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0])
    print("dct2 ortho:", repr(dct(x, type=2, norm="ortho")))
    print("chi2 q95 dof1=%r dof3=%r" % (stats.chi2.ppf(0.95, 1), stats.chi2.ppf(0.95, 3)))
    print("chi2 sf(10, 4)=%r" % stats.chi2.sf(10.0, 4))

    # Jamiolkowski trace distance of a 7% depolarized identity from the identity.
    d = 2
    lam = 0.93
    # Choi (normalized) of lam*id + (1-lam)*depolarizing
    phi = np.zeros((4, 1))
    phi[0] = phi[3] = 1 / np.sqrt(2)
    ideal = phi @ phi.T
    noisy = lam * ideal + (1 - lam) * np.eye(4) / 4
    ev = np.linalg.eigvalsh(noisy - ideal)
    print("jtd depol .07 identity: %r" % (0.5 * np.abs(ev).sum()))

    # Bounded decay fit on noiseless synthetic data.
    m = np.array([0, 1, 2, 4, 8, 16, 32, 64], dtype=float)
    y = 0.5 + 0.45 * 0.97 ** m
    fit = stats.linregress(0.97 ** m, y)
    print("decay linear part at p=0.97: A=%r B=%r" % (fit.intercept, fit.slope))
    print("rb r(p=0.98, n=1)=%r r(p=0.98, n=2)=%r" % ((1 - 0.98) / 2, (1 - 0.98) * 3 / 4))


if __name__ == "__main__":
    main()
