"""Dense univariate polynomial arithmetic over Z/p^N.

Coefficient lists are little-endian (index = degree) with entries reduced
into ``[0, M)`` where ``M = p**N``.  The zero polynomial is ``[]``.

Three routines carry essentially all of the heavy arithmetic in the package:

* ``pmul`` packs both operands into single big integers (one slot per
  coefficient, sized so that convolution sums cannot overflow a slot) and
  lets CPython's subquadratic integer multiplication do the work.
* ``pshift_unit`` computes a(x + 1) or a(x - 1), splitting the polynomial in
  half and recombining with one packed multiply per level.
* ``pdivmod_monic`` divides by a monic polynomial, switching to Newton
  inversion of the reversed divisor once the schoolbook loop would be slow.
"""

from __future__ import annotations

_KRON_CUTOFF = 2048  # len(a)*len(b) above which packed multiplication wins
_NEWTON_CUTOFF = 1 << 15  # quotient_len*divisor_len above which Newton wins


def ptrim(a: list) -> list:
    n = len(a)
    while n and a[n - 1] == 0:
        n -= 1
    return a[:n]


def padd(a: list, b: list, m: int) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % m
    return ptrim(out)


def psub(a: list, b: list, m: int) -> list:
    out = list(a) + [0] * (len(b) - len(a))
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % m
    return ptrim(out)


def pscale(a: list, c: int, m: int) -> list:
    c %= m
    if c == 0:
        return []
    return ptrim([(x * c) % m for x in a])


def pmul(a: list, b: list, m: int) -> list:
    if not a or not b:
        return []
    if len(a) * len(b) <= _KRON_CUTOFF:
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] += x * y
        return ptrim([c % m for c in out])
    return _pmul_packed(a, b, m)


def _pmul_packed(a: list, b: list, m: int) -> list:
    slot_bits = 2 * (m - 1).bit_length() + min(len(a), len(b)).bit_length() + 1
    width = (slot_bits + 7) // 8
    pa = bytearray(width * len(a))
    for i, c in enumerate(a):
        pa[i * width : i * width + width] = c.to_bytes(width, "little")
    pb = bytearray(width * len(b))
    for i, c in enumerate(b):
        pb[i * width : i * width + width] = c.to_bytes(width, "little")
    prod = int.from_bytes(bytes(pa), "little") * int.from_bytes(bytes(pb), "little")
    n_out = len(a) + len(b) - 1
    buf = prod.to_bytes(width * n_out + width, "little")
    out = [
        int.from_bytes(buf[i * width : i * width + width], "little") % m
        for i in range(n_out)
    ]
    return ptrim(out)


def pmul_trunc(a: list, b: list, k: int, m: int) -> list:
    out = pmul(a[:k], b[:k], m)
    return ptrim(out[:k])


def binom_row(n: int, c: int, m: int) -> list:
    """Coefficients of (x + c)^n mod m for c in {1, -1}; little-endian."""
    row = [0] * (n + 1)
    comb = 1
    for i in range(n + 1):
        v = comb % m
        if c == -1 and ((n - i) & 1):
            v = (m - v) % m
        row[i] = v
        if i < n:
            comb = comb * (n - i) // (i + 1)
    return row


def pshift_unit(a: list, c: int, m: int) -> list:
    """Compose: coefficients of a(x + c), c in {1, -1}."""
    if c not in (1, -1):
        raise ValueError("shift step must be +1 or -1")
    n = len(a)
    if n <= 64:
        res: list = []
        for coeff in reversed(a):
            nxt = [0] + res
            for i, r in enumerate(res):
                nxt[i] = (nxt[i] + c * r) % m
            if not nxt:
                nxt = [0]
            nxt[0] = (nxt[0] + coeff) % m
            res = nxt
        return ptrim(res)
    h = n // 2
    lo = pshift_unit(a[:h], c, m)
    hi = pshift_unit(a[h:], c, m)
    return padd(lo, pmul(binom_row(h, c, m), hi, m), m)


def _pinv_series(f: list, k: int, m: int) -> list:
    """Inverse of f modulo x^k; requires f[0] == 1."""
    if not f or f[0] != 1:
        raise ValueError("series inversion requires constant term 1")
    x = [1]
    t = 1
    while t < k:
        t = min(2 * t, k)
        fx = pmul_trunc(f[:t], x, t, m)
        corr = [(-c) % m for c in fx] + [0] * (t - len(fx))
        corr[0] = (corr[0] + 2) % m
        x = pmul_trunc(x, corr, t, m)
    return ptrim(x[:k])


def pdivmod_monic(a: list, g: list, m: int) -> tuple:
    """Quotient and remainder of a by monic g (g[-1] == 1)."""
    g = ptrim(list(g))
    if not g or g[-1] != 1:
        raise ValueError("divisor must be monic")
    a = ptrim(list(a))
    dg = len(g) - 1
    if len(a) < len(g):
        return [], a
    k = len(a) - dg  # quotient length
    if dg == 0:
        return a, []
    if k * dg <= _NEWTON_CUTOFF:
        r = list(a)
        q = [0] * k
        for d in range(len(a) - 1, dg - 1, -1):
            c = r[d]
            if c:
                q[d - dg] = c
                base = d - dg
                for j in range(dg):
                    if g[j]:
                        r[base + j] = (r[base + j] - c * g[j]) % m
                r[d] = 0
        return ptrim(q), ptrim(r[:dg])
    ra = a[::-1]
    rg = g[::-1]
    inv = _pinv_series(rg, k, m)
    q_rev = pmul_trunc(ra, inv, k, m)
    q_rev = list(q_rev) + [0] * (k - len(q_rev))
    q = q_rev[::-1]
    head = pmul(q, g, m)[:dg]
    r = psub(a[:dg], head, m)
    return ptrim(q), r


def prem_cyclo(a: list, p: int, q: int, m: int) -> list:
    """Remainder of a modulo sum(x^(i*q) for i in range(p)); q a power of p.

    The modulus is the level-(log_p q + 1) cyclotomic polynomial in the root
    variable; it is p-sparse so reduction is a short subtraction cascade.
    """
    deg_mod = (p - 1) * q
    if len(a) <= deg_mod:
        return ptrim(list(a))
    a = list(a)
    for d in range(len(a) - 1, deg_mod - 1, -1):
        c = a[d]
        if c:
            a[d] = 0
            base = d - deg_mod
            for i in range(p - 1):
                pos = base + i * q
                a[pos] = (a[pos] - c) % m
    return ptrim(a[:deg_mod])


def peval_int(a: list, x: int, m: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % m
    return acc
