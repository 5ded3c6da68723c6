"""Exhaustive structural equivalence checks at enumeration-scale widths.

Two identities are checked over every key and every plaintext, for several
oracle seeds and randomized schedules:

- a t-round KAFv equals the KAFw instance produced by the schedule
  conversion, for the same round function;
- a t-round Lucifer chain equals keyless first/last rounds wrapped around
  the stripped (t-2)-round KAFv core.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import DomainTooLarge
from .feistel import (
    Block,
    CipherInstance,
    kafv_encrypt,
    kafw_encrypt,
    lucifer_encrypt,
    psi_tilde_round,
)
from .gf2 import MAX_EXHAUSTIVE_N, BinMatrix, DomainParams
from .oracles import RandomFunctionOracle, derive_seed
from .schedules import (
    AffineSubkey,
    FieldCubicSubkey,
    KafvSchedule,
    LuciferSchedule,
    SubkeyMap,
    XorSubkey,
    ZeroMap,
    kafv_to_kafw,
    lucifer_strip,
)


@dataclass
class SweepResult:
    description: str
    cases: int
    mismatches: int
    first_mismatch: tuple | None = None

    @property
    def passed(self) -> bool:
        return self.mismatches == 0


def random_subkey_map(p: DomainParams, rng: random.Random) -> SubkeyMap:
    """One map drawn over all the kinds the file format can express."""
    kind = rng.randrange(4)
    if kind == 0:
        return ZeroMap()
    if kind == 1:
        rows = tuple(rng.randrange(p.N) for _ in range(p.n))
        return AffineSubkey(BinMatrix(rows), rng.randrange(p.N))
    if kind == 2:
        return FieldCubicSubkey(rng.randrange(1, p.N))
    return XorSubkey((random_subkey_map(p, rng), random_subkey_map(p, rng)))


def _function_table(n: int, seed: int):
    oracle = RandomFunctionOracle(n, seed)
    table = [oracle.query(x) for x in range(1 << n)]
    return table.__getitem__


def kafv_vs_kafw_sweep(n: int, t: int, seeds=(0, 1, 2)) -> SweepResult:
    """Converted-schedule KAFw vs the original KAFv, exhaustively per seed."""
    if n > MAX_EXHAUSTIVE_N:
        raise DomainTooLarge("exhaustive sweep capped")
    p = DomainParams.for_width(n)
    cases = mismatches = 0
    first = None
    for seed in seeds:
        rng = random.Random(derive_seed(seed, "kafv-schedule"))
        star = KafvSchedule(p, tuple(random_subkey_map(p, rng) for _ in range(t + 2)))
        converted = kafv_to_kafw(star)
        f = _function_table(n, derive_seed(seed, "f"))
        kafv_inst = CipherInstance(p, t, star, (f,), "kafv")
        kafw_inst = CipherInstance(p, t, converted, (f,), "kafw")
        for key in range(p.N):
            for word in range(p.N * p.N):
                pt = Block(word >> n, word & (p.N - 1))
                a = kafv_encrypt(kafv_inst, key, pt)
                b = kafw_encrypt(kafw_inst, key, pt)
                cases += 1
                if a != b:
                    mismatches += 1
                    if first is None:
                        first = (seed, key, word, a, b)
    return SweepResult(f"kafv-kafw n={n} t={t}", cases, mismatches, first)


def lucifer_sandwich_sweep(n: int, t: int, seeds=(0, 1, 2)) -> SweepResult:
    """Lucifer chain vs keyless outer rounds around the stripped KAFv core."""
    if n > MAX_EXHAUSTIVE_N:
        raise DomainTooLarge("exhaustive sweep capped")
    if t < 3:
        raise ValueError("the sandwich needs t >= 3")
    p = DomainParams.for_width(n)
    cases = mismatches = 0
    first = None
    for seed in seeds:
        rng = random.Random(derive_seed(seed, "lucifer-schedule"))
        key_maps = LuciferSchedule(p, tuple(random_subkey_map(p, rng) for _ in range(t)))
        fs = [_function_table(n, derive_seed(seed, "f", i)) for i in range(t)]
        lucifer_inst = CipherInstance(p, t, key_maps, tuple(fs), "lucifer")
        for key in range(p.N):
            keys = [key_maps.round_key(i, key) for i in range(1, t + 1)]
            parts = lucifer_strip(fs, keys)
            # KAFv core with the stripped sub-keys as constant maps.
            const_maps = tuple(
                AffineSubkey(BinMatrix.zero(n), c) for c in parts.core_subkeys
            )
            core_inst = CipherInstance(
                p, t - 2, KafvSchedule(p, const_maps), parts.core_functions, "kafv"
            )
            for word in range(p.N * p.N):
                pt = Block(word >> n, word & (p.N - 1))
                direct = lucifer_encrypt(lucifer_inst, keys, pt)
                mid = psi_tilde_round(pt, 0, parts.outer_first)
                mid = kafv_encrypt(core_inst, 0, mid)
                sandwich = psi_tilde_round(mid, 0, parts.outer_last)
                cases += 1
                if direct != sandwich:
                    mismatches += 1
                    if first is None:
                        first = (seed, key, word, direct, sandwich)
    return SweepResult(f"lucifer-sandwich n={n} t={t}", cases, mismatches, first)
