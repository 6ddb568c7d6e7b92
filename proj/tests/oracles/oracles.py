"""Independent oracles for frozen test values.

Everything here uses closed forms, secular equations or brute-force
enumeration; nothing calls into the C++ library.  Run with
    python3 tests/oracles/oracles.py
and compare against the constants pinned in the C++ tests.
"""
import itertools
import math

import numpy as np
from scipy.optimize import brentq


def periodic_morse(v, theta, kmax=50):
    # eigenvalues (theta + 2 pi k)^2 + v of the theta-periodic operator
    vals = [(theta + 2 * math.pi * k) ** 2 + v for k in range(-kmax, kmax + 1)]
    return sum(1 for x in vals if x < 0), sorted(vals)[:6]


def periodic_crossings(v, th1, th2, kmax=10):
    out = []
    for k in range(-kmax, kmax + 1):
        f = lambda th: (th + 2 * math.pi * k) ** 2 + v
        grid = np.linspace(th1, th2, 20001)
        vals = [f(x) for x in grid]
        for a, b, fa, fb in zip(grid, grid[1:], vals, vals[1:]):
            if fa * fb < 0:
                out.append((k, brentq(f, a, b), "up" if fb > fa else "down"))
    return out


def robin_negative_count(theta):
    # V = 0 on [0,1], u'(1) = -theta u(1), -u'(0) = -theta u(0).
    # Negative eigenvalue -kappa^2: even branch kappa tanh(kappa/2) = -theta,
    # odd branch kappa coth(kappa/2) = -theta (needs -theta > 2).
    n = 0
    if -theta > 0:
        n += 1
    if -theta > 2:
        n += 1
    return n


def robin_eigs(theta, count=4):
    # positive eigenvalues k^2: even cos k(x-1/2): -k sin(k/2) = -theta cos(k/2)
    # -> k tan(k/2) = theta ; odd sin k(x-1/2): k cos(k/2) = -theta sin(k/2)
    # -> -k cot(k/2) = theta.  Negative ones from robin_negative_count.
    vals = []
    if -theta > 0:
        vals.append(-brentq(lambda k: k * math.tanh(k / 2) + theta, 1e-12, 200) ** 2)
    if -theta > 2:
        vals.append(-brentq(lambda k: k / math.tanh(k / 2) + theta, 1e-12, 200) ** 2)
    ks = np.linspace(1e-9, 40, 400001)
    for g in (lambda k: k * math.sin(k / 2) - theta * math.cos(k / 2),
              lambda k: k * math.cos(k / 2) + theta * math.sin(k / 2)):
        gv = [g(k) for k in ks]
        for a, b, fa, fb in zip(ks, ks[1:], gv, gv[1:]):
            if fa * fb < 0:
                vals.append(brentq(g, a, b) ** 2)
    if abs(theta) < 1e-15:
        vals.append(0.0)
    return sorted(vals)[:count]


def exact_lattice(amat_cols, theta, count, kmax=6):
    a = np.array(amat_cols, dtype=float).T  # columns are a_j
    A = 2 * math.pi * np.linalg.inv(a)
    n = a.shape[0]
    vals = []
    for k in itertools.product(range(-kmax, kmax + 1), repeat=n):
        w = A.T @ (np.array(theta) - np.array(k))
        vals.append(float(w @ w))
    return sorted(vals)[:count]


def unitary_track_example():
    # F_s = span{(cos s, sin s)}, Z = span{(0,1)} in C^1 x C^1.
    # Brute force: canonical bases e+ = (1,i)/sqrt2, e- = (1,-i)/sqrt2,
    # U = (e-^* b)/(e+^* b); follow arg(U V^-1) on a fine grid.
    ep = np.array([1, 1j]) / math.sqrt(2)
    em = np.array([1, -1j]) / math.sqrt(2)

    def u_of(b):
        return (em.conj() @ b) / (ep.conj() @ b)

    v = u_of(np.array([0.0, 1.0]))
    s = np.linspace(0, math.pi, 100001)
    ang = np.array([np.angle(u_of(np.array([math.cos(x), math.sin(x)])) / v) for x in s])
    # count arc-entries through 1 (closed arc [0, eps]) with eps = 0.5
    def k(a):
        return 1 if -1e-12 <= a <= 0.5 else 0
    mas = k(ang[-1]) - k(ang[0])
    # the grid is fine enough that a single window suffices only if no
    # eigenvalue crosses +-eps; do it windowed instead
    total = 0
    step = 1000
    for i in range(0, len(s) - 1, step):
        j = min(i + step, len(s) - 1)
        seg = ang[i:j + 1]
        # pick eps away from the segment's angles
        eps_candidates = np.linspace(0.05, 3.0, 60)
        eps = next(e for e in eps_candidates if np.all(np.abs(np.abs(seg) - e) > 1e-3))
        kk = lambda a: 1 if -1e-12 <= a <= eps else 0
        total += kk(seg[-1]) - kk(seg[0])
    return u_of(np.array([1.0, 0.0])), total


def neumann_plane_unitary():
    ep = np.array([1, 1j]) / math.sqrt(2)
    em = np.array([1, -1j]) / math.sqrt(2)
    b = np.array([1.0, 0.0])
    return (em.conj() @ b) / (ep.conj() @ b)


def scaled_band_tracks(theta, v, ts, kmax=40):
    out = []
    for t in ts:
        vals = sorted(t ** -2 * (2 * math.pi * (theta - k)) ** 2 + v for k in range(-kmax, kmax + 1))
        out.append(sum(1 for x in vals if x < 0))
    return out


if __name__ == "__main__":
    print("periodic Morse (V, theta) -> count, lowest")
    for v in (-5.0, -2 * math.pi ** 2, -40.0, 0.0):
        for th in (0.0, math.pi, 0.1):
            print(f"  V={v:.6f} th={th:.6f}", periodic_morse(v, th))
    for v in (-5.0, -2 * math.pi ** 2, -40.0):
        print("  crossings on [0,pi] V=", v, periodic_crossings(v, 0.0, math.pi))
    print("Robin V=0 negative counts:", {th: robin_negative_count(th) for th in (-3, -2.5, -1, 1, 2, -20, -5)})
    print("Robin V=0 eigenvalues theta=-3:", robin_eigs(-3.0))
    print("Robin V=0 eigenvalues theta=1:", robin_eigs(1.0))
    print("Robin V=0 eigenvalues theta=1 (Theta=I):", robin_eigs(1.0, 6))
    print("Robin kernel points: roots of theta(2+theta)=0 -> 0, -2")
    print("exact 1D theta=0:", exact_lattice([[1.0]], [0.0], 5))
    print("exact 1D theta=0.25:", exact_lattice([[1.0]], [0.25], 3), [(math.pi / 2) ** 2, (3 * math.pi / 2) ** 2, (5 * math.pi / 2) ** 2])
    sq = exact_lattice([[1.0, 0.0], [0.0, 1.0]], [0.0, 0.0], 21)
    print("exact 2D square theta=0 (/pi^2):", [round(x / math.pi ** 2, 9) for x in sq])
    print("Neumann-plane unitary in canonical basis:", neumann_plane_unitary())
    print("cos/sin path: (U for (1,0), Maslov by brute force):", unitary_track_example())
    print("scaled band theta=1/2 V=-2pi^2 Morse at t=1,0.5,0.25,0.125,0.05:",
          scaled_band_tracks(0.5, -2 * math.pi ** 2, [1, 0.5, 0.25, 0.125, 0.05]))
    print("crossing t for scaled band: sqrt(1/2) =", math.sqrt(0.5))
    print("Dirichlet V=-2pi^2 lowest:", math.pi ** 2 - 2 * math.pi ** 2)
