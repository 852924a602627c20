"""Dense univariate polynomial helpers over an exact field.

Polynomials are lists of coefficients, lowest degree first.  The helpers are
generic: coefficients only need ``+ - * /`` and comparison with ``0``, so the
same code serves ``Fraction`` and tower elements.
"""

from __future__ import annotations

from typing import Any, Callable, Sequence

Poly = list


def trim(p: Sequence[Any]) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p: Sequence[Any]) -> int:
    return len(trim(p)) - 1


def add(p: Sequence[Any], q: Sequence[Any]) -> Poly:
    n = max(len(p), len(q))
    out = []
    for i in range(n):
        a = p[i] if i < len(p) else 0
        b = q[i] if i < len(q) else 0
        out.append(a + b)
    return trim(out)


def sub(p: Sequence[Any], q: Sequence[Any]) -> Poly:
    n = max(len(p), len(q))
    out = []
    for i in range(n):
        a = p[i] if i < len(p) else 0
        b = q[i] if i < len(q) else 0
        out.append(a - b)
    return trim(out)


def scale(p: Sequence[Any], c: Any) -> Poly:
    return trim([a * c for a in p])


def mul(p: Sequence[Any], q: Sequence[Any]) -> Poly:
    p, q = trim(p), trim(q)
    if not p or not q:
        return []
    out: list[Any] = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return trim(out)


def divmod_(p: Sequence[Any], q: Sequence[Any]) -> tuple[Poly, Poly]:
    q = trim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = trim(p)
    dq = len(q) - 1
    lc = q[-1]
    if len(r) - 1 < dq:
        return [], r
    quo: list[Any] = [0] * (len(r) - dq)
    while r and len(r) - 1 >= dq:
        k = len(r) - 1 - dq
        c = r[-1] / lc
        quo[k] = c
        for i, b in enumerate(q):
            r[i + k] = r[i + k] - c * b
        r = trim(r[:-1]) if r[-1] == 0 else trim(r)
    return trim(quo), r


def rem(p: Sequence[Any], q: Sequence[Any]) -> Poly:
    return divmod_(p, q)[1]


def monic(p: Sequence[Any]) -> Poly:
    p = trim(p)
    if not p:
        return p
    lc = p[-1]
    return [a / lc for a in p]


def gcd(p: Sequence[Any], q: Sequence[Any]) -> Poly:
    a, b = trim(p), trim(q)
    while b:
        a, b = b, rem(a, b)
    return monic(a)


def xgcd(p: Sequence[Any], q: Sequence[Any], one: Any = 1) -> tuple[Poly, Poly, Poly]:
    """Return ``(g, s, t)`` with ``s*p + t*q = g`` and ``g`` monic."""
    r0, r1 = trim(p), trim(q)
    s0, s1 = [one], []
    t0, t1 = [], [one]
    while r1:
        quo, r2 = divmod_(r0, r1)
        r0, r1 = r1, r2
        s0, s1 = s1, sub(s0, mul(quo, s1))
        t0, t1 = t1, sub(t0, mul(quo, t1))
    if not r0:
        return [], s0, t0
    lc = r0[-1]
    inv = one / lc
    return scale(r0, inv), scale(s0, inv), scale(t0, inv)


def deriv(p: Sequence[Any]) -> Poly:
    return trim([p[i] * i for i in range(1, len(p))])


def evaluate(p: Sequence[Any], x: Any) -> Any:
    acc: Any = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def compose(p: Sequence[Any], q: Sequence[Any]) -> Poly:
    """Return ``p(q(v))``."""
    out: Poly = []
    for c in reversed(trim(p)):
        out = add(mul(out, q), [c])
    return out


def squarefree_decomposition(p: Sequence[Any]) -> list[tuple[Poly, int]]:
    """Yun's algorithm in characteristic zero; factors are monic."""
    p = monic(p)
    if len(p) <= 1:
        return []
    out = []
    dp = deriv(p)
    a = gcd(p, dp)
    b = divmod_(p, a)[0]
    c = divmod_(dp, a)[0]
    d = sub(c, deriv(b))
    i = 1
    while len(b) > 1:
        a = gcd(b, d)
        if len(a) > 1:
            out.append((monic(a), i))
        b = divmod_(b, a)[0]
        c = divmod_(d, a)[0]
        d = sub(c, deriv(b))
        i += 1
    return out


def map_coeffs(p: Sequence[Any], fn: Callable[[Any], Any]) -> Poly:
    return trim([fn(c) for c in p])
