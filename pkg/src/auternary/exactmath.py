"""Exact integer arithmetic helpers: valuations, factoring, symbols.

Everything here works with plain Python integers so that no verdict ever
depends on floating point.  The only sentinel is INFINITY, used for the
valuation of zero; it is compared against ints but never mixed into
arithmetic.
"""

from __future__ import annotations

import math
import random

from .errors import FactorizationLimit

INFINITY = float("inf")

_TRIAL_BOUND = 10**6

# Deterministic Miller-Rabin witnesses, valid for n < 3.3 * 10**24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def ordp(n: int, p: int) -> int | float:
    """p-adic valuation of n; INFINITY for n = 0."""
    if n == 0:
        return INFINITY
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def ord2(n: int) -> int | float:
    if n == 0:
        return INFINITY
    return ((n & -n).bit_length() - 1)


def odd_part(n: int) -> int:
    """n with all factors of 2 removed (sign preserved). n must be nonzero."""
    if n == 0:
        raise ValueError("odd_part(0) is undefined")
    return n >> ord2(n)


def is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int, rng: random.Random, max_iterations: int) -> int:
    """One Brent-cycle attempt; returns a nontrivial factor of composite n."""
    if n % 2 == 0:
        return 2
    iterations = 0
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                iterations += min(m, r - k)
                if iterations > max_iterations:
                    raise FactorizationLimit(
                        f"Pollard rho exceeded {max_iterations} iterations on {n}"
                    )
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
                iterations += 1
                if iterations > max_iterations:
                    raise FactorizationLimit(
                        f"Pollard rho exceeded {max_iterations} iterations on {n}"
                    )
        if g != n:
            return g


def factorize(n: int, rho_iterations: int = 500_000) -> dict[int, int]:
    """Prime factorization of |n| as {prime: exponent}.

    Trial division up to 10**6, then Pollard rho (Brent variant) with an
    iteration cap; raises FactorizationLimit when the cap is hit.
    """
    n = abs(n)
    if n <= 1:
        return {}
    out: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    d = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)
    w = 0
    while d * d <= n and d <= _TRIAL_BOUND:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += wheel[w]
        w = (w + 1) % 8
    if n == 1:
        return out
    if d * d > n:
        out[n] = out.get(n, 0) + 1
        return out
    rng = random.Random(0xA001 ^ n)
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_probable_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        f = _pollard_brent(m, rng, rho_iterations)
        stack.append(f)
        stack.append(m // f)
    return out


def odd_squarefree_part(n: int, rho_iterations: int = 500_000) -> int:
    """Squarefree kernel of the odd part of |n|.

    odd_squarefree_part(72) == 1, odd_squarefree_part(60) == 15.
    """
    if n == 0:
        raise ValueError("odd_squarefree_part(0) is undefined")
    m = abs(odd_part(n))
    out = 1
    for p, e in factorize(m, rho_iterations).items():
        if e % 2 == 1:
            out *= p
    return out


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p; 0 when p divides a."""
    if p == 2 or not is_probable_prime(p):
        raise ValueError(f"legendre needs an odd prime, got {p}")
    a %= p
    if a == 0:
        return 0
    s = pow(a, (p - 1) // 2, p)
    return -1 if s == p - 1 else 1


def least_nonresidue(p: int) -> int:
    """Smallest positive quadratic nonresidue mod an odd prime p."""
    for r in range(2, p):
        if legendre(r, p) == -1:
            return r
    raise ValueError(f"no nonresidue below {p}; p prime?")


def hilbert2(a: int, b: int) -> int:
    """Hilbert symbol (a, b) over the 2-adic numbers, for nonzero integers."""
    if a == 0 or b == 0:
        raise ValueError("hilbert2 needs nonzero arguments")
    alpha = ord2(a)
    beta = ord2(b)
    u = a >> alpha
    v = b >> beta
    # eps(u) = (u-1)/2 mod 2 and omega(u) = (u^2-1)/8 mod 2, read off mod 8.
    eps_u = 1 if u % 4 == 3 else 0
    eps_v = 1 if v % 4 == 3 else 0
    om_u = 1 if u % 8 in (3, 5) else 0
    om_v = 1 if v % 8 in (3, 5) else 0
    e = eps_u * eps_v + alpha * om_v + beta * om_u
    return -1 if e % 2 == 1 else 1


def primes_up_to(n: int) -> list[int]:
    """All primes <= n by sieve."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i, flag in enumerate(sieve) if flag]
