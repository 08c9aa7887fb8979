"""Compute independent high-precision reference values and freeze them to JSON.

Nothing here calls into nestquad's numerics: moments come from adaptive
mpmath quadrature of the densities, Gauss rules from polynomial roots, and
Clenshaw-Curtis weights from 40-digit Vandermonde solves.

    python scripts/freeze_oracles.py  # rewrites tests/data/oracles.json
"""

import itertools
import json
import math
from pathlib import Path

import mpmath as mp

mp.mp.dps = 40
OUT = Path(__file__).resolve().parents[1] / "tests" / "data" / "oracles.json"


def beta_pdf(a, b, lo, hi):
    norm = mp.gamma(a + b) / (mp.gamma(a) * mp.gamma(b)) / (hi - lo)
    return lambda x: norm * ((x - lo) / (hi - lo)) ** (a - 1) * ((hi - x) / (hi - lo)) ** (b - 1)


DISTS = {
    "uniform:-1,1": (beta_pdf(1, 1, -1, 1), (-1, 1)),
    "uniform:0,1": (beta_pdf(1, 1, 0, 1), (0, 1)),
    "beta:4,4": (beta_pdf(4, 4, 0, 1), (0, 1)),
    "beta:2,5": (beta_pdf(2, 5, 0, 1), (0, 1)),
    "beta:3,3,0.5,1.5": (beta_pdf(3, 3, mp.mpf("0.5"), mp.mpf("1.5")), (mp.mpf("0.5"), mp.mpf("1.5"))),
    "beta:10,10": (beta_pdf(10, 10, 0, 1), (0, 1)),
    "normal:0,1": (lambda x: mp.npdf(x, 0, 1), (-mp.inf, mp.inf)),
    "normal:1,0.5": (lambda x: mp.npdf(x, 1, mp.mpf("0.5")), (-mp.inf, mp.inf)),
}


def moments(jmax=20):
    out = {}
    for name, (f, (lo, hi)) in DISTS.items():
        pts = [lo, (lo + hi) / 2, hi] if lo != -mp.inf else [-mp.inf, 0, 1, mp.inf]
        out[name] = [float(mp.quad(lambda x: x**j * f(x), pts)) for j in range(jmax + 1)]
    return out


def legendre_gauss(n):
    # nodes: roots of P_n; weights 2 / ((1 - x^2) P_n'(x)^2), halved for the probability measure
    xs = sorted(mp.polyroots(mp.taylor(lambda t: mp.legendre(n, t), 0, n)[::-1], maxsteps=200, extraprec=200))
    ws = [1 / ((1 - x**2) * mp.diff(lambda t: mp.legendre(n, t), x) ** 2) for x in xs]
    return [float(mp.re(x)) for x in xs], [float(mp.re(w)) for w in ws]


def hermite_gauss(n):
    # probabilists' Hermite: weights n! / (n He_{n-1}(x))^2
    he = lambda k, t: mp.hermite(k, t / mp.sqrt(2)) * mp.mpf(2) ** (-mp.mpf(k) / 2)
    xs = sorted(mp.polyroots(mp.taylor(lambda t: he(n, t), 0, n)[::-1], maxsteps=200, extraprec=200))
    ws = [mp.factorial(n) / (n * he(n - 1, x)) ** 2 for x in xs]
    return [float(mp.re(x)) for x in xs], [float(mp.re(w)) for w in ws]


def cc_uniform(n):
    # extended-precision solve of sum w_k x_k^j = E[x^j] on the Chebyshev extrema
    xs = [-mp.cos(mp.pi * k / (n - 1)) for k in range(n)]
    A = mp.matrix([[x**j for x in xs] for j in range(n)])
    b = mp.matrix([mp.mpf(1) / (j + 1) if j % 2 == 0 else 0 for j in range(n)])
    w = mp.lu_solve(A, b)
    return [float(x) for x in xs], [float(v) for v in w]


def genz_quad():
    """Low-dimensional Genz integrals by adaptive mpmath quadrature."""
    cases = []
    specs = [
        (1, [mp.pi], [0]), (1, [1.3, 0.7], [0.2, 0.6]),
        (2, [2.0], [0.3]), (2, [1.5, 2.0], [0.4, 0.9]),
        (3, [1.2], [0.5]), (3, [0.8, 2.3], [0.5, 0.5]),
        (4, [1.0], [0.0]), (4, [1.7, 1.8], [0.6, 0.8]),
        (5, [2.0], [0.3]), (5, [1.1, 2.2], [0.7, 0.7]),
        (6, [1.0], [0.5]), (6, [0.9, 2.3], [0.4, 0.9]),
    ]
    for fam, a, u in specs:
        a = [mp.mpf(v) for v in a]
        u = [mp.mpf(v) for v in u]
        n = len(a)

        def f(*x):
            s = sum(ai * xi for ai, xi in zip(a, x))
            if fam == 1:
                return mp.cos(2 * mp.pi * u[0] + s)
            if fam == 2:
                return mp.fprod(1 / (ai**-2 + (xi - ui) ** 2) for ai, xi, ui in zip(a, x, u))
            if fam == 3:
                return (1 + s) ** (-(n + 1))
            if fam == 4:
                return mp.exp(-sum(ai**2 * (xi - ui) ** 2 for ai, xi, ui in zip(a, x, u)))
            if fam == 5:
                return mp.exp(-sum(ai * abs(xi - ui) for ai, xi, ui in zip(a, x, u)))
            return mp.exp(s)

        # split at kinks and cut the discontinuous family's support
        if fam == 6:
            ranges = [[0, u[0]]] + ([[0, u[1]]] if n > 1 else [])
        elif fam == 5:
            ranges = [[0, ui, 1] for ui in u]
        else:
            ranges = [[0, 1]] * n
        val = mp.quad(f, *ranges)
        cases.append({"family": fam, "a": [float(v) for v in a], "u": [float(v) for v in u],
                      "integral": float(val)})
    return cases


def _cc_closed_form(N):
    # classical cosine-series weights on [-1, 1], halved for the uniform density
    if N == 1:
        return [mp.mpf(0)], [mp.mpf(1)]
    n = N - 1
    x, w = [], []
    for j in range(N):
        th = mp.pi * j / n
        s = mp.fsum((1 if 2 * k == n else 2) / mp.mpf(4 * k * k - 1) * mp.cos(2 * k * th)
                    for k in range(1, n // 2 + 1))
        x.append(mp.cos(th))
        w.append((1 if j in (0, n) else 2) / mp.mpf(n) * (1 - s) / 2)
    return x, w


def smolyak_cc(d, K):
    """Node count and sum |w| of the CC sparse grid via hierarchical differences."""
    top = K - d + 1
    size = lambda k: 1 if k == 1 else 2 ** (k - 1) + 1
    deltas = []
    prev = {}
    for k in range(1, top + 1):
        x, w = _cc_closed_form(size(k))
        # cos(pi/2) is not exactly 0 in floating point; snap before keying
        cur = {mp.nstr(xi if abs(xi) > 1e-30 else mp.mpf(0), 25): wi for xi, wi in zip(x, w)}
        diff = dict(cur)
        for key, wi in prev.items():
            diff[key] = diff.get(key, 0) - wi
        deltas.append([(key, float(v)) for key, v in diff.items()])
        prev = cur
    total = {}
    for a in itertools.product(range(top), repeat=d):
        if sum(a) + d > K:
            continue
        for combo in itertools.product(*[deltas[i] for i in a]):
            key = tuple(c[0] for c in combo)
            total[key] = total.get(key, 0.0) + math.prod(c[1] for c in combo)
    kept = [v for v in total.values() if abs(v) > 1e-14]
    return {"d": d, "K": K, "nodes": len(kept), "abs_sum": math.fsum(abs(v) for v in kept),
            "sum": math.fsum(kept)}


def main():
    data = {
        "moments": moments(),
        "beta44_pdf_half": float(beta_pdf(4, 4, 0, 1)(mp.mpf("0.5"))),
        "gauss_legendre": {str(n): legendre_gauss(n) for n in (1, 2, 3, 5, 8)},
        "gauss_hermite": {str(n): hermite_gauss(n) for n in (2, 3, 6)},
        "cc_uniform": {str(n): cc_uniform(n) for n in (3, 5, 9)},
        "genz": genz_quad(),
        "smolyak_cc": [smolyak_cc(2, K) for K in range(2, 8)] + [smolyak_cc(5, K) for K in range(5, 13)],
    }
    OUT.write_text(json.dumps(data, indent=1) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
