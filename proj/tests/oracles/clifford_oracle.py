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

"""Independent BFS over native gates for Clifford group sizes and mean
shortest-word lengths (one gate per step). Run:

    python3 tests/oracles/clifford_oracle.py
"""
import itertools
from collections import deque

import numpy as np

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
P = [I2, X, Y, Z]


def rot(a, t):
    return np.cos(t / 2) * I2 - 1j * np.sin(t / 2) * a


def ptm(u, n):
    b = []
    for idx in itertools.product(range(4), repeat=n):
        m = np.array([[1]], dtype=complex)
        for k in idx:
            m = np.kron(m, P[k] / np.sqrt(2))
        b.append(m)
    return np.array([[np.trace(bj @ u @ bk @ u.conj().T).real for bk in b] for bj in b])


def bfs(layers, n):
    start = np.eye(4 ** n)
    key = lambda m: tuple(np.rint(m).astype(int).ravel())
    seen = {key(start): 0}
    q = deque([start])
    while q:
        g = q.popleft()
        d = seen[key(g)]
        for L in layers:
            h = L @ g
            k = key(h)
            if k not in seen:
                seen[k] = d + 1
                q.append(h)
    return len(seen), np.mean(list(seen.values()))


def main():
    one = [rot(X, np.pi / 2), rot(X, -np.pi / 2), rot(Y, np.pi / 2), rot(Y, -np.pi / 2)]
    print("1Q:", bfs([ptm(u, 1) for u in one], 1))
    cnot = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
    layers = [ptm(cnot, 2)]
    for u in one:
        layers.append(ptm(np.kron(u, I2), 2))
        layers.append(ptm(np.kron(I2, u), 2))
    print("2Q:", bfs(layers, 2))


if __name__ == "__main__":
    main()
