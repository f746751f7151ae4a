"""Raw integer Laurent-polynomial kernels.

A polynomial here is a plain dict {exponent: int} with no zero values.
These helpers back the hot paths (twist application, the algebra-to-torus
homomorphism on large inputs, span elimination) where wrapping every
coefficient in a class would dominate the runtime.  The public exact layer
lives in coeff.py.
"""

from __future__ import annotations

from math import gcd


def padd(a: dict, b: dict) -> dict:
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def paccum(acc: dict, b: dict, scale: int = 1) -> None:
    """In place: acc += scale * b."""
    for e, c in b.items():
        s = acc.get(e, 0) + scale * c
        if s:
            acc[e] = s
        else:
            acc.pop(e, None)


def paccum_mul(acc: dict, b: dict, m: dict) -> None:
    """In place: acc += b * m (m a polynomial)."""
    for e1, c1 in b.items():
        for e2, c2 in m.items():
            e = e1 + e2
            s = acc.get(e, 0) + c1 * c2
            if s:
                acc[e] = s
            else:
                acc.pop(e, None)


def pmul(a: dict, b: dict) -> dict:
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    out: dict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = e1 + e2
            s = out.get(e, 0) + c1 * c2
            if s:
                out[e] = s
            else:
                out.pop(e, None)
    return out


def pneg(a: dict) -> dict:
    return {e: -c for e, c in a.items()}

def pscale(a: dict, k: int) -> dict:
    if k == 0:
        return {}
    return {e: c * k for e, c in a.items()}


def pshift(a: dict, k: int) -> dict:
    if k == 0:
        return dict(a)
    return {e + k: c for e, c in a.items()}


def ppow(a: dict, n: int) -> dict:
    out = {0: 1}
    for _ in range(n):
        out = pmul(out, a)
    return out


def pcontent(a: dict) -> int:
    g = 0
    for c in a.values():
        g = gcd(g, c)
        if g == 1:
            return 1
    return g


def pvaluation(a: dict) -> int:
    return min(a) if a else 0


# Dense helpers for gcd / exact division.  A dense poly is a list of int
# coefficients, index = exponent, trailing zeros stripped, val 0 assumed.

def to_dense(a: dict) -> tuple[int, list[int]]:
    """Return (valuation, dense coefficient list)."""
    if not a:
        return 0, []
    v = min(a)
    d = max(a)
    out = [0] * (d - v + 1)
    for e, c in a.items():
        out[e - v] = c
    return v, out


def from_dense(val: int, coeffs: list[int]) -> dict:
    return {val + i: c for i, c in enumerate(coeffs) if c}


def _strip(u: list[int]) -> list[int]:
    while u and u[-1] == 0:
        u.pop()
    return u


def _primitive(u: list[int]) -> list[int]:
    g = 0
    for c in u:
        g = gcd(g, c)
        if g == 1:
            break
    if g > 1:
        u = [c // g for c in u]
    if u and u[-1] < 0:
        u = [-c for c in u]
    return u


def _pseudo_rem(u: list[int], v: list[int]) -> list[int]:
    """Pseudo-remainder of u by v (int coefficients, deg u >= deg v)."""
    u = list(u)
    dv = len(v) - 1
    lv = v[-1]
    while len(u) - 1 >= dv and u:
        du = len(u) - 1
        lu = u[-1]
        u = [c * lv for c in u]
        for i in range(dv + 1):
            u[du - dv + i] -= lu * v[i]
        _strip(u)
    return u


def gcd_dense(u: list[int], v: list[int]) -> list[int]:
    """Primitive gcd of two integer polynomials (primitive PRS)."""
    u = _primitive(_strip(list(u)))
    v = _primitive(_strip(list(v)))
    if len(u) < len(v):
        u, v = v, u
    while v:
        r = _primitive(_pseudo_rem(u, v))
        u, v = v, r
    return u


def div_exact(a: dict, b: dict) -> dict | None:
    """Return a // b if b divides a exactly over the integers, else None."""
    if not a:
        return {}
    if not b:
        return None
    va, da = to_dense(a)
    vb, db = to_dense(b)
    if len(da) < len(db):
        return None
    lb = db[-1]
    q = [0] * (len(da) - len(db) + 1)
    r = list(da)
    for i in range(len(q) - 1, -1, -1):
        c = r[i + len(db) - 1]
        if c % lb:
            return None
        qc = c // lb
        q[i] = qc
        if qc:
            for j, bc in enumerate(db):
                r[i + j] -= qc * bc
    if any(r):
        return None
    return from_dense(va - vb, q)
