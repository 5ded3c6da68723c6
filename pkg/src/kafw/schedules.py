"""Key-schedule representations, concrete instances, and structural transformations.

A schedule is a tuple of sub-key maps, each an n-bit to n-bit transformation
of the master key.  Map kinds: zero, affine (F2 matrix plus constant),
field-affine-cubic (m (x) k ^ k^3 over GF(2^n)), an explicit table, or a
finite XOR of other maps.  Affine maps expose their matrix so attack and
audit code can reason about differences; everything else raises NotAffine.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Sequence

from .errors import (
    ArityMismatch,
    NotAffine,
    OddN,
    TooFewRounds,
    UnknownName,
)
from .gf2 import BinMatrix, DomainParams, gf_cube, gf_mul, mat_vec


class SubkeyMap:
    """Base class; subclasses implement value() and the affine introspection."""

    is_affine = False

    def value(self, k: int, p: DomainParams) -> int:
        raise NotImplementedError

    def matrix(self, p: DomainParams) -> BinMatrix:
        raise NotAffine(f"{type(self).__name__} has no matrix form")

    def constant(self, p: DomainParams) -> int:
        raise NotAffine(f"{type(self).__name__} has no affine form")

    def is_zero(self, p: DomainParams) -> bool:
        return False


@dataclass(frozen=True)
class ZeroMap(SubkeyMap):
    is_affine = True

    def value(self, k, p):
        return 0

    def matrix(self, p):
        return BinMatrix.zero(p.n)

    def constant(self, p):
        return 0

    def is_zero(self, p):
        return True


@dataclass(frozen=True)
class AffineSubkey(SubkeyMap):
    """k -> M.k ^ C over F2."""

    m: BinMatrix
    c: int = 0
    is_affine = True

    def value(self, k, p):
        return mat_vec(self.m, k) ^ self.c

    def matrix(self, p):
        return self.m

    def constant(self, p):
        return self.c

    def is_zero(self, p):
        return self.c == 0 and not any(self.m.rows)


@dataclass(frozen=True)
class FieldCubicSubkey(SubkeyMap):
    """k -> multiplier (x) k ^ k^3 over GF(2^n); non-linear for any multiplier."""

    multiplier: int

    def value(self, k, p):
        return gf_mul(self.multiplier, k, p) ^ gf_cube(k, p)


@dataclass(frozen=True)
class TableSubkey(SubkeyMap):
    """Explicit lookup table; only sensible at enumeration-scale widths."""

    table: tuple[int, ...]

    def value(self, k, p):
        return self.table[k]

    def is_zero(self, p):
        return not any(self.table)


@dataclass(frozen=True)
class XorSubkey(SubkeyMap):
    """XOR of component maps; affine when every component is."""

    parts: tuple[SubkeyMap, ...]

    @property
    def is_affine(self):
        return all(part.is_affine for part in self.parts)

    def value(self, k, p):
        out = 0
        for part in self.parts:
            out ^= part.value(k, p)
        return out

    def matrix(self, p):
        m = BinMatrix.zero(p.n)
        for part in self.parts:
            m = m ^ part.matrix(p)
        return m

    def constant(self, p):
        c = 0
        for part in self.parts:
            c ^= part.constant(p)
        return c

    def is_zero(self, p):
        return all(part.is_zero(p) for part in self.parts)


def identity_map(n: int) -> AffineSubkey:
    return AffineSubkey(BinMatrix.identity(n))


def ortho_map(n: int) -> AffineSubkey:
    """pi(kL||kR) = kR||(kL ^ kR): a linear orthomorphism; needs even n."""
    if n % 2:
        raise OddN(f"orthomorphism split needs even n, got {n}")
    h = n // 2
    rows = [((1 << (h + j)) | (1 << j)) for j in range(h)]  # low half: kL ^ kR
    rows += [(1 << j) for j in range(h)]  # high half: kR
    return AffineSubkey(BinMatrix(tuple(rows)))


@dataclass(frozen=True)
class KeySchedule:
    """Whitening maps wf0..wf3 plus round-key maps gamma_1..gamma_t."""

    params: DomainParams
    whitening: tuple[SubkeyMap, SubkeyMap, SubkeyMap, SubkeyMap]
    round_keys: tuple[SubkeyMap, ...]

    def __post_init__(self):
        if len(self.whitening) != 4:
            raise ArityMismatch("exactly four whitening maps required")
        if not self.round_keys:
            raise ArityMismatch("at least one round-key map required")

    @property
    def t(self) -> int:
        return len(self.round_keys)

    def whitening_key(self, j: int, k: int) -> int:
        return self.whitening[j].value(k, self.params)

    def round_key(self, i: int, k: int) -> int:
        """1-based round index, matching gamma_i."""
        return self.round_keys[i - 1].value(k, self.params)

    def gamma_matrix(self, i: int) -> BinMatrix:
        return self.round_keys[i - 1].matrix(self.params)

    def wf_matrix(self, j: int) -> BinMatrix:
        return self.whitening[j].matrix(self.params)

    @property
    def is_affine(self) -> bool:
        return all(m.is_affine for m in (*self.whitening, *self.round_keys))

    def has_zero_whitening(self) -> bool:
        return all(m.is_zero(self.params) for m in self.whitening)

    # Derived masking maps: phi_1 = wf1 ^ gamma_1 protects the first round's
    # function input, phi_4 / phi_6 = wf2 ^ gamma_t the last round's.
    def phi1_map(self) -> XorSubkey:
        return XorSubkey((self.whitening[1], self.round_keys[0]))

    def phi4_map(self) -> XorSubkey:
        if self.t != 4:
            raise ArityMismatch("phi_4 is defined for 4-round schedules")
        return XorSubkey((self.whitening[2], self.round_keys[3]))

    def phi6_map(self) -> XorSubkey:
        if self.t != 6:
            raise ArityMismatch("phi_6 is defined for 6-round schedules")
        return XorSubkey((self.whitening[2], self.round_keys[5]))

    def bind(self, m: SubkeyMap):
        """Plain int -> int callable for enumeration code."""
        p = self.params
        return lambda k: m.value(k, p)


@dataclass(frozen=True)
class KafvSchedule:
    """Sub-key maps gamma*_0 .. gamma*_{t+1} for a t-round KAFv.

    maps[0] and maps[t+1] become the whitening halves; t = 0 (whitening
    only) is legal and shows up when stripping a 2-round Lucifer.
    """

    params: DomainParams
    maps: tuple[SubkeyMap, ...]

    def __post_init__(self):
        if len(self.maps) < 2:
            raise ArityMismatch("a KAFv schedule needs at least t+2 = 2 maps")

    @property
    def t(self) -> int:
        return len(self.maps) - 2

    def subkey(self, i: int, k: int) -> int:
        return self.maps[i].value(k, self.params)

    def star_matrix(self, i: int) -> BinMatrix:
        return self.maps[i].matrix(self.params)

    @property
    def is_affine(self) -> bool:
        return all(m.is_affine for m in self.maps)


@dataclass(frozen=True)
class LuciferSchedule:
    """One sub-key map per round for the Lucifer-style chain (no whitening slots)."""

    params: DomainParams
    maps: tuple[SubkeyMap, ...]

    def __post_init__(self):
        if len(self.maps) < 2:
            raise TooFewRounds("lucifer needs t >= 2")

    @property
    def t(self) -> int:
        return len(self.maps)

    def round_key(self, i: int, k: int) -> int:
        """1-based round index."""
        return self.maps[i - 1].value(k, self.params)


def kafv_to_kafw(s: KafvSchedule) -> KeySchedule:
    """KAFw schedule functionally equivalent to the given KAFv schedule.

    Round keys accumulate alternating prefixes of the KAFv sub-keys
    (gamma_{2l+1} = gamma*_0 ^ gamma*_2 ^ ... ^ gamma*_{2l}, and likewise for
    even rounds over the odd-indexed sub-keys); the output whitening absorbs
    the last two: wf2 = gamma_t ^ gamma*_{t+1}, wf3 = gamma_{t-1} ^ gamma*_t.
    No input whitening is needed.
    """
    t = s.t
    if t < 2:
        raise TooFewRounds("conversion needs t >= 2")
    gammas: list[SubkeyMap] = []
    for i in range(1, t + 1):
        # Round i takes the XOR of gamma*_{i-1}, gamma*_{i-3}, ... down to
        # gamma*_0 (odd i) or gamma*_1 (even i).
        parts = tuple(s.maps[j] for j in range(i - 1, -1, -2))
        gammas.append(parts[0] if len(parts) == 1 else XorSubkey(parts))
    zero = ZeroMap()
    wf2 = XorSubkey((gammas[t - 1], s.maps[t + 1]))
    wf3 = XorSubkey((gammas[t - 2], s.maps[t]))
    return KeySchedule(s.params, (zero, zero, wf2, wf3), tuple(gammas))


@dataclass(frozen=True)
class LuciferDecomposition:
    """Lucifer as keyless outer rounds around a (t-2)-round KAFv core."""

    outer_first: object  # round function f1, keyless
    outer_last: object  # round function ft, keyless
    core_functions: tuple  # f2 .. f_{t-1}
    core_subkeys: tuple[int, ...]  # k1 .. kt, reused as the KAFv's t sub-keys


def lucifer_strip(functions: Sequence, keys: Sequence[int]) -> LuciferDecomposition:
    """Split a t-round Lucifer into keyless first/last rounds and a KAFv core."""
    t = len(keys)
    if len(functions) != t:
        raise ArityMismatch("need one round function per round key")
    if t < 3:
        raise TooFewRounds("stripping needs t >= 3")
    return LuciferDecomposition(
        outer_first=functions[0],
        outer_last=functions[-1],
        core_functions=tuple(functions[1:-1]),
        core_subkeys=tuple(keys),
    )


BUILTIN_NAMES = (
    "minimal4",
    "ortho6",
    "filled6",
    "tweakem4",
    "identity_bad(t)",
    "bitperm_bad5",
)

_NAME_RE = re.compile(r"^([a-z_][a-z0-9_]*)(?:\((\d+)\))?$")


def builtin(name: str, p: DomainParams, **params) -> KeySchedule:
    """Named schedule instances.

    minimal4        4-round KAF: gamma_1 = m1 (x) k ^ k^3, gamma_4 = m4 (x) k ^ k^3,
                    middle rounds and whitening zero; m1 != m4 nonzero.
    ortho6          6-round KAF (k, 0, 0, 0, 0, pi(k)) with the linear
                    orthomorphism pi(kL||kR) = kR||(kL ^ kR); even n only.
    filled6         6-round KAF (k, k, pi(k), k, k, pi(k)); even n only.
    tweakem4        4-round KAFw with wf1 = m1 (x) k ^ k^3, wf2 = m4 (x) k ^ k^3
                    and every other sub-key zero.
    identity_bad(t) gamma_i = k for all t rounds, zero whitening
                    (complementation-vulnerable).
    bitperm_bad5    5 distinct bit-rotations as round-key matrices; the
                    all-ones offset satisfies M1.d = M5.d.
    """
    m = _NAME_RE.match(name.strip())
    if not m:
        raise UnknownName(f"bad schedule name {name!r}")
    base, arg = m.group(1), m.group(2)
    if arg is not None:
        if base != "identity_bad":
            raise UnknownName(f"{base} takes no round-count argument")
        params.setdefault("rounds", int(arg))
    zero = ZeroMap()
    no_whitening = (zero, zero, zero, zero)

    if base == "minimal4":
        m1 = params.get("m1", 2)
        m4 = params.get("m4", 3)
        if m1 == m4 or m1 == 0 or m4 == 0:
            raise ValueError("minimal4 needs two distinct nonzero multipliers")
        return KeySchedule(
            p,
            no_whitening,
            (FieldCubicSubkey(m1), zero, zero, FieldCubicSubkey(m4)),
        )
    if base == "ortho6":
        return KeySchedule(
            p, no_whitening, (identity_map(p.n), zero, zero, zero, zero, ortho_map(p.n))
        )
    if base == "filled6":
        ident, pi = identity_map(p.n), ortho_map(p.n)
        return KeySchedule(p, no_whitening, (ident, ident, pi, ident, ident, pi))
    if base == "tweakem4":
        m1 = params.get("m1", 2)
        m4 = params.get("m4", 3)
        if m1 == m4 or m1 == 0 or m4 == 0:
            raise ValueError("tweakem4 needs two distinct nonzero multipliers")
        return KeySchedule(
            p,
            (zero, FieldCubicSubkey(m1), FieldCubicSubkey(m4), zero),
            (zero, zero, zero, zero),
        )
    if base == "identity_bad":
        t = params.get("rounds")
        if t is None:
            raise UnknownName("identity_bad needs a round count, e.g. identity_bad(8)")
        return KeySchedule(p, no_whitening, (identity_map(p.n),) * t)
    if base == "bitperm_bad5":
        if p.n < 5:
            raise ValueError("bitperm_bad5 needs n >= 5 for five distinct rotations")
        rots = tuple(AffineSubkey(BinMatrix.rotation(p.n, r)) for r in range(5))
        return KeySchedule(p, no_whitening, rots)
    raise UnknownName(f"unknown builtin schedule {name!r}")


def random_affine(p: DomainParams, t: int, rng: random.Random) -> KeySchedule:
    """Uniformly random affine schedule: t+4 random matrices and constants."""

    def rand_map() -> AffineSubkey:
        rows = tuple(rng.randrange(p.N) for _ in range(p.n))
        return AffineSubkey(BinMatrix(rows), rng.randrange(p.N))

    whitening = tuple(rand_map() for _ in range(4))
    return KeySchedule(p, whitening, tuple(rand_map() for _ in range(t)))
