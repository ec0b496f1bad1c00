"""Integer factoring and the modular square roots of -2 that select admissible q."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod

FACTOR_LIMIT = 10**9


class NoRoot(ValueError):
    """Raised when the argument is a quadratic non-residue."""


class InvalidQ(ValueError):
    """q fails one of the admissibility conditions.

    ``reason`` is one of ``"residue-class"``, ``"squarefree"`` or
    ``"factor-residue"`` and names the first condition violated.
    """

    def __init__(self, q: int, reason: str, detail: str = ""):
        self.q = q
        self.reason = reason
        self.detail = detail
        msg = f"q={q} is not admissible ({reason})"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class NotSquarefree(InvalidQ):
    def __init__(self, q: int, detail: str = ""):
        super().__init__(q, "squarefree", detail)


@dataclass(frozen=True)
class Factorization:
    n: int
    factors: tuple[tuple[int, int], ...]
    squarefree: bool

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def value(self) -> int:
        return prod(p**e for p, e in self.factors)

    def __str__(self):
        if not self.factors:
            return "1"
        return " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)


@dataclass(frozen=True)
class AdmissibleQ:
    q: int
    j: int
    factorization: Factorization = field(compare=False)


def factor(n: int) -> Factorization:
    """Factor ``n`` by trial division (inputs up to 10**9)."""
    if n < 1:
        raise ValueError(f"factor() needs n >= 1, got {n}")
    if n > FACTOR_LIMIT:
        raise ValueError(f"factor() is limited to n <= {FACTOR_LIMIT}")
    factors = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
        p += 1 if p == 2 else 2
    if m > 1:
        factors.append((m, 1))
    return Factorization(n, tuple(factors), all(e == 1 for _, e in factors))


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def sqrt_mod_prime(a: int, p: int) -> int:
    """Return the smaller square root of ``a`` modulo the odd prime ``p``.

    Tonelli-Shanks. The result ``r`` satisfies ``r*r % p == a % p`` and
    ``0 <= r <= (p - 1) // 2``. Raises :class:`NoRoot` for non-residues.
    """
    a %= p
    if a == 0:
        raise ValueError(f"{a} is divisible by {p}")
    if legendre(a, p) != 1:
        raise NoRoot(f"{a} is not a square modulo {p}")

    s, t = 0, p - 1
    while t % 2 == 0:
        s += 1
        t //= 2
    z = 2
    while legendre(z, p) != -1:
        z += 1

    m, c, x, b = s, pow(z, t, p), pow(a, (t + 1) // 2, p), pow(a, t, p)
    while b != 1:
        i, b2 = 0, b
        while b2 != 1:
            b2 = b2 * b2 % p
            i += 1
        f = pow(c, 1 << (m - i - 1), p)
        m, c = i, f * f % p
        x, b = x * f % p, b * c % p
    return min(x, p - x)


def crt(residues: list[int], moduli: list[int]) -> int:
    """Combine pairwise coprime congruences into one residue mod the product."""
    x, m = 0, 1
    for r, n in zip(residues, moduli):
        # x + m*t = r (mod n)
        t = (r - x) * pow(m, -1, n) % n
        x, m = x + m * t, m * n
    return x % m


def find_j(q: int) -> AdmissibleQ:
    """Validate ``q`` and return it with the smallest ``j >= 0`` where j^2 = -2 mod q."""
    if q < 3:
        raise InvalidQ(q, "residue-class", "q must be at least 3")
    if q % 8 != 3:
        raise InvalidQ(q, "residue-class", f"q mod 8 = {q % 8}, need 3")
    fac = factor(q)
    if not fac.squarefree:
        raise NotSquarefree(q, f"q = {fac}")
    for p in fac.primes:
        if p % 8 not in (1, 3):
            raise InvalidQ(q, "factor-residue", f"prime {p} = {p % 8} mod 8")

    primes = fac.primes
    roots = [sqrt_mod_prime(-2, p) for p in primes]
    # each prime contributes +-r; the smallest j over all sign choices is canonical
    best = None
    for mask in range(1 << max(len(primes) - 1, 0)):
        # fixing the sign of the last prime only flips j -> q - j, so half the masks suffice
        signed = [r if not (mask >> i) & 1 else p - r
                  for i, (r, p) in enumerate(zip(roots, primes))]
        j = crt(signed, primes)
        j = min(j, q - j)
        if best is None or j < best:
            best = j
    return AdmissibleQ(q, best, fac)


def is_admissible(q: int) -> bool:
    try:
        find_j(q)
    except InvalidQ:
        return False
    return True
