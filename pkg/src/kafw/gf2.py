"""GF(2^n) field arithmetic and F2 matrix/vector linear algebra.

Words, field elements, and matrix rows are plain Python ints (no wrapper
objects).  Conventions, normative for the whole package:

- bit 0 is the least significant bit and the coefficient of x^0;
- concatenation L||R places L in the high n bits of a 2n-bit word;
- the high half of a key is kL, the low half kR;
- a matrix is stored row-major as n ints; entry (i, j) is bit j of row i,
  and matrix.vector products are defined so that a permutation matrix with
  row i equal to 1 << s(i) sends input bit s(i) to output bit i.

Field multiplication reduces modulo a fixed irreducible polynomial per
width (lowest-lexicographic choice, see REDUCTION_POLYNOMIALS); the
polynomial mask holds the low n coefficients, the x^n term is implicit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .errors import BadMatrix, DomainTooLarge

# Lowest-lexicographic irreducible polynomial of each degree, as the mask of
# the coefficients below x^n.  Verified irreducible by the gcd-based test
# below; the test suite re-derives the table by exhaustive factor search.
REDUCTION_POLYNOMIALS = {
    2: 0x3, 3: 0x3, 4: 0x3, 5: 0x5, 6: 0x3, 7: 0x3, 8: 0x1B,
    9: 0x3, 10: 0x9, 11: 0x5, 12: 0x9, 13: 0x1B, 14: 0x21, 15: 0x3,
    16: 0x2B, 17: 0x9, 18: 0x9, 19: 0x27, 20: 0x9, 21: 0x5, 22: 0x3,
    23: 0x21, 24: 0x1B, 25: 0x9, 26: 0x1B, 27: 0x27, 28: 0x3, 29: 0x5,
    30: 0x3, 31: 0x9, 32: 0x8D,
}

MAX_N = 32
MAX_EXHAUSTIVE_N = 16


def _poly_mulmod(a: int, b: int, full: int) -> int:
    """Multiply two GF(2)[x] polynomials modulo `full` (leading bit explicit)."""
    top = full.bit_length()
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a.bit_length() == top:
            a ^= full
    return r


def _poly_gcd(a: int, b: int) -> int:
    while b:
        if a.bit_length() < b.bit_length():
            a, b = b, a
        else:
            a ^= b << (a.bit_length() - b.bit_length())
    return a


def _prime_divisors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(poly_mask: int, n: int) -> bool:
    """Whether x^n + (poly_mask) is irreducible over GF(2).

    Uses the standard criterion: x^(2^n) = x mod f, and for every prime p
    dividing n, gcd(x^(2^(n/p)) - x, f) = 1.
    """
    if n < 1 or not poly_mask & 1:
        return False
    full = (1 << n) | poly_mask

    def x_pow_2k(k: int) -> int:
        r = 2  # the polynomial x
        for _ in range(k):
            r = _poly_mulmod(r, r, full)
        return r

    if x_pow_2k(n) != 2:
        return False
    for p in _prime_divisors(n):
        if _poly_gcd(x_pow_2k(n // p) ^ 2, full) != 1:
            return False
    return True


@dataclass(frozen=True)
class DomainParams:
    """Half-block width n, derived domain size N = 2^n, and reduction polynomial."""

    n: int
    reduction_polynomial: int

    def __post_init__(self):
        if not 2 <= self.n <= MAX_N:
            raise ValueError(f"n must be in [2, {MAX_N}], got {self.n}")
        if not 0 < self.reduction_polynomial < (1 << self.n):
            raise ValueError("reduction polynomial mask out of range")
        if not is_irreducible(self.reduction_polynomial, self.n):
            raise ValueError(
                f"x^{self.n} + {self.reduction_polynomial:#x} is not irreducible"
            )

    @classmethod
    def for_width(cls, n: int) -> "DomainParams":
        if n not in REDUCTION_POLYNOMIALS:
            raise ValueError(f"no reduction polynomial shipped for n={n}")
        return cls(n, REDUCTION_POLYNOMIALS[n])

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def mask(self) -> int:
        return (1 << self.n) - 1


def gf_mul(a: int, b: int, p: DomainParams) -> int:
    """Product of a and b in GF(2^n) under p's reduction polynomial."""
    full = (1 << p.n) | p.reduction_polynomial
    return _poly_mulmod(a, b, full)


def gf_cube(a: int, p: DomainParams) -> int:
    """a*a*a in GF(2^n)."""
    return gf_mul(gf_mul(a, a, p), a, p)


@dataclass(frozen=True)
class BinMatrix:
    """n x n matrix over F2, stored as n row words."""

    rows: tuple[int, ...]

    def __post_init__(self):
        n = len(self.rows)
        if n == 0:
            raise ValueError("empty matrix")
        for r in self.rows:
            if not 0 <= r < (1 << n):
                raise ValueError(f"row {r:#x} out of range for n={n}")

    @property
    def n(self) -> int:
        return len(self.rows)

    def __xor__(self, other: "BinMatrix") -> "BinMatrix":
        if self.n != other.n:
            raise ValueError("matrix size mismatch")
        return BinMatrix(tuple(a ^ b for a, b in zip(self.rows, other.rows)))

    @classmethod
    def identity(cls, n: int) -> "BinMatrix":
        return cls(tuple(1 << i for i in range(n)))

    @classmethod
    def zero(cls, n: int) -> "BinMatrix":
        return cls((0,) * n)

    @classmethod
    def from_bit_permutation(cls, source_bits: Sequence[int]) -> "BinMatrix":
        """Matrix sending input bit source_bits[i] to output bit i."""
        n = len(source_bits)
        if sorted(source_bits) != list(range(n)):
            raise ValueError("not a permutation of bit positions")
        return cls(tuple(1 << s for s in source_bits))

    @classmethod
    def rotation(cls, n: int, r: int) -> "BinMatrix":
        """Left bit-rotation by r: output bit i = input bit (i - r) mod n."""
        return cls.from_bit_permutation([(i - r) % n for i in range(n)])


def mat_vec(m: BinMatrix, v: int) -> int:
    """F2 matrix-vector product; linear in v."""
    out = 0
    for i, row in enumerate(m.rows):
        out |= ((row & v).bit_count() & 1) << i
    return out


def mat_xor(a: BinMatrix, b: BinMatrix) -> BinMatrix:
    return a ^ b


def _kernel_basis_of_rows(rows: Iterable[int], ncols: int) -> tuple[int, ...]:
    """Basis of {v : every row r has parity(r & v) = 0}, rows of any count."""
    # Incremental elimination: keep one reduced row per pivot (highest set bit).
    pivot_rows: dict[int, int] = {}
    for row in rows:
        cur = row
        while cur:
            p = cur.bit_length() - 1
            if p in pivot_rows:
                cur ^= pivot_rows[p]
            else:
                pivot_rows[p] = cur
                break
    # Back-substitute so each pivot column appears only in its own row.
    for p in sorted(pivot_rows):
        r = pivot_rows[p]
        for q in pivot_rows:
            if q > p and (pivot_rows[q] >> p) & 1:
                pivot_rows[q] ^= r
    free_cols = [c for c in range(ncols) if c not in pivot_rows]
    basis = []
    for f in free_cols:
        v = 1 << f
        for p, r in pivot_rows.items():
            v |= ((r >> f) & 1) << p
        basis.append(v)
    return tuple(sorted(basis))


def mat_kernel_basis(m: BinMatrix) -> tuple[int, ...]:
    """Basis of {v : mat_vec(m, v) = 0}; empty exactly when m is invertible."""
    return _kernel_basis_of_rows(m.rows, m.n)


def mat_rank(m: BinMatrix) -> int:
    return m.n - len(mat_kernel_basis(m))


def mat_is_invertible(m: BinMatrix) -> bool:
    return not mat_kernel_basis(m)


def joint_kernel_basis(ms: Sequence[BinMatrix]) -> tuple[int, ...]:
    """Basis of the intersection of the kernels of all given matrices."""
    if not ms:
        raise ValueError("need at least one matrix")
    n = ms[0].n
    rows: list[int] = []
    for m in ms:
        if m.n != n:
            raise ValueError("matrix size mismatch")
        rows.extend(m.rows)
    return _kernel_basis_of_rows(rows, n)


def is_orthomorphism(perm: Callable[[int], int] | Sequence[int], n: int) -> bool:
    """Whether perm and x -> x ^ perm(x) are both bijections of {0,1}^n.

    Exhaustive; rejects widths above the enumeration cap.
    """
    if n > MAX_EXHAUSTIVE_N:
        raise DomainTooLarge(f"orthomorphism check capped at n={MAX_EXHAUSTIVE_N}")
    N = 1 << n
    f = perm.__getitem__ if isinstance(perm, Sequence) else perm
    images = set()
    xored = set()
    for x in range(N):
        y = f(x)
        if not 0 <= y < N:
            return False
        images.add(y)
        xored.add(x ^ y)
    return len(images) == N and len(xored) == N


def matrix_to_text(m: BinMatrix) -> str:
    """One hex word per row, row 0 first (the matrix text format)."""
    width = (m.n + 3) // 4
    return "\n".join(f"{row:0{width}x}" for row in m.rows)


def matrix_from_text(text: str, n: int) -> BinMatrix:
    rows = [int(line, 16) for line in text.split()]
    if len(rows) != n or any(not 0 <= r < (1 << n) for r in rows):
        raise BadMatrix(f"expected {n} rows below 2^{n}")
    return BinMatrix(tuple(rows))
