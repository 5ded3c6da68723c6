"""Related-key distinguishers against affine-schedule constructions.

Every attack consumes a RelatedKeyOracle and returns a single bit (1 =
"this is the construction").  The boomerang family exploits that one
round with an affine schedule carries a probability-1 related-key
differential: under key offset d, a state difference (M_{i+1}.d, M_i.d)
entering round i makes the round-function inputs collide, so the round
deterministically emits (M_i.d, M_{i+1}.d).  Chaining two such rounds
down from the plaintext and two up from the ciphertext closes a quartet
of four related-key queries whose final XOR is predictable; against an
ideal cipher the closing equality holds with probability 1/(N^2 - 1).

The complementation attacks push the same differential through every
round at once, which needs all odd-round matrices to agree on the offset
(and likewise the even ones); two queries then suffice.  The birthday
attack is schedule-agnostic: it trades q_e related-key queries against
q_g offline key guesses and wins once some guess hits k ^ offset.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import ArityMismatch, NoWeakDelta, TooFewRounds
from .feistel import CipherInstance
from .gf2 import BinMatrix, joint_kernel_basis, mat_vec
from .oracles import RelatedKeyOracle
from .schedules import KeySchedule


def _pack(left: int, right: int, n: int) -> int:
    return (left << n) | right


@dataclass(frozen=True)
class BoomerangParams:
    """Derived offsets of one quartet: key offset and the four block shifts."""

    delta: int
    nabla1: int
    nabla2: int
    nabla3: int
    nabla4: int
    base_left: int = 0
    base_right: int = 0


@dataclass
class AttackOutcome:
    """Result of one attack run plus its measured query usage."""

    bit: int
    q_e_used: int
    q_f_used: int
    transcript: list | None = None


def _affine_forms(s: KeySchedule):
    """(wf matrices, gamma matrices 1-indexed) or NotAffine."""
    wf = tuple(s.wf_matrix(j) for j in range(4))
    gammas = tuple(s.gamma_matrix(i) for i in range(1, s.t + 1))
    return wf, gammas


def weak_delta(matrices: Sequence[BinMatrix]) -> int:
    """Smallest nonzero vector of the joint kernel basis; deterministic choice."""
    basis = joint_kernel_basis(matrices)
    if not basis:
        raise NoWeakDelta("the matrix-difference condition has only the trivial solution")
    return min(basis)


def quartet_params_4round(
    s: KeySchedule, delta: int, left: int = 0, right: int = 0
) -> BoomerangParams:
    """Shifts for the 4-round boomerang: two probability-1 two-round trails."""
    wf, g = _affine_forms(s)
    if s.t != 4:
        raise ArityMismatch("the 4-round boomerang needs t = 4")
    return BoomerangParams(
        delta=delta,
        nabla1=mat_vec(wf[0] ^ g[1], delta),
        nabla2=mat_vec(wf[1] ^ g[0], delta),
        nabla3=mat_vec(g[3] ^ wf[2], delta),
        nabla4=mat_vec(g[2] ^ wf[3], delta),
        base_left=left,
        base_right=right,
    )


def run_quartet(rk: RelatedKeyOracle, n: int, bp: BoomerangParams) -> int:
    """Four related-key queries; 1 iff the returning pair differs by (nabla1, nabla2)."""
    mask = (1 << n) - 1
    ct0 = rk.encrypt(0, _pack(bp.base_left, bp.base_right, n))
    ct1 = rk.encrypt(
        bp.delta, _pack(bp.base_left ^ bp.nabla1, bp.base_right ^ bp.nabla2, n)
    )
    back0 = rk.decrypt(bp.delta, _pack((ct0 >> n) ^ bp.nabla3, (ct0 & mask) ^ bp.nabla4, n))
    back1 = rk.decrypt(0, _pack((ct1 >> n) ^ bp.nabla3, (ct1 & mask) ^ bp.nabla4, n))
    return 1 if back0 ^ back1 == _pack(bp.nabla1, bp.nabla2, n) else 0


def four_round_boomerang(
    rk: RelatedKeyOracle, s: KeySchedule, delta: int, left: int = 0, right: int = 0
) -> int:
    """(0,4)-distinguisher against any 4-round affine schedule; real-world output
    is 1 for every key, function tuple, base plaintext, and nonzero offset."""
    if delta == 0:
        raise ValueError("the key offset must be nonzero")
    return run_quartet(rk, s.params.n, quartet_params_4round(s, delta, left, right))


def five_round_boomerang_switch(
    rk: RelatedKeyOracle,
    s: KeySchedule,
    delta: int | None = None,
    left: int = 0,
    right: int = 0,
) -> int:
    """5-round boomerang: the middle round is switched for free when the offset
    satisfies M1.d = M5.d, so the bottom trail covers rounds 4-5."""
    wf, g = _affine_forms(s)
    if s.t != 5:
        raise ArityMismatch("the switch boomerang needs t = 5")
    if delta is None:
        delta = weak_delta([g[0] ^ g[4]])
    elif delta == 0 or mat_vec(g[0] ^ g[4], delta) != 0:
        raise NoWeakDelta("offset does not satisfy M1.d = M5.d")
    bp = BoomerangParams(
        delta=delta,
        nabla1=mat_vec(wf[0] ^ g[1], delta),
        nabla2=mat_vec(wf[1] ^ g[0], delta),
        nabla3=mat_vec(g[4] ^ wf[2], delta),
        nabla4=mat_vec(g[3] ^ wf[3], delta),
        base_left=left,
        base_right=right,
    )
    return run_quartet(rk, s.params.n, bp)


def five_round_complementation_boomerang(
    rk: RelatedKeyOracle,
    s: KeySchedule,
    delta: int | None = None,
    left: int = 0,
    right: int = 0,
) -> int:
    """5-round quartet for schedules with M1.d = M3.d: the probability-1 top
    trail then extends through round 3, and the bottom trail covers rounds 4-5
    exactly as in the switch variant."""
    wf, g = _affine_forms(s)
    if s.t != 5:
        raise ArityMismatch("this boomerang needs t = 5")
    if delta is None:
        delta = weak_delta([g[0] ^ g[2]])
    elif delta == 0 or mat_vec(g[0] ^ g[2], delta) != 0:
        raise NoWeakDelta("offset does not satisfy M1.d = M3.d")
    bp = BoomerangParams(
        delta=delta,
        nabla1=mat_vec(wf[0] ^ g[1], delta),
        nabla2=mat_vec(wf[1] ^ g[0], delta),
        nabla3=mat_vec(g[4] ^ wf[2], delta),
        nabla4=mat_vec(g[3] ^ wf[3], delta),
        base_left=left,
        base_right=right,
    )
    return run_quartet(rk, s.params.n, bp)


def any_round_differential(
    rk: RelatedKeyOracle,
    s: KeySchedule,
    delta: int | None = None,
    left: int = 0,
    right: int = 0,
) -> int:
    """Two-query complementation distinguisher for any round count t >= 2.

    Needs an offset on which all odd-round matrices agree and all
    even-round matrices agree; the input shift (nabla1, nabla2) then rides
    the alternating differential through every round, and the output
    difference is fully determined (swapping halves once per round, with
    the output whitening masks applied position-wise).
    """
    t = s.t
    if t < 2:
        raise TooFewRounds("the differential needs t >= 2")
    wf, g = _affine_forms(s)
    constraints = [g[0] ^ g[j] for j in range(2, t, 2)]  # M1 vs M3, M5, ...
    constraints += [g[1] ^ g[j] for j in range(3, t, 2)]  # M2 vs M4, M6, ...
    if delta is None:
        if not constraints:  # t = 2: every nonzero offset works
            delta = 1
        else:
            delta = weak_delta(constraints)
    elif delta == 0 or any(mat_vec(c, delta) != 0 for c in constraints):
        raise NoWeakDelta("offset does not satisfy the common-difference conditions")
    n = s.params.n
    d1 = mat_vec(g[0], delta)
    d2 = mat_vec(g[1], delta)
    nabla1 = mat_vec(wf[0] ^ g[1], delta)
    nabla2 = mat_vec(wf[1] ^ g[0], delta)
    out0 = rk.encrypt(0, _pack(left, right, n))
    out1 = rk.encrypt(delta, _pack(left ^ nabla1, right ^ nabla2, n))
    # State difference after round i alternates (d1, d2), (d2, d1), ...
    sl, sr = (d2, d1) if t % 2 == 0 else (d1, d2)
    expect = _pack(sl ^ mat_vec(wf[2], delta), sr ^ mat_vec(wf[3], delta), n)
    return 1 if out0 ^ out1 == expect else 0


def birthday_collision_attack(
    rk: RelatedKeyOracle,
    fs: Sequence[Callable[[int], int]],
    params,
    rounds: int,
    schedule,
    q_e: int,
    q_g: int,
    rng,
    construction: str = "kafw",
    offsets: Sequence[int] | None = None,
    guesses: Sequence[int] | None = None,
    plaintexts: tuple[int, int] = (0, 1),
) -> int:
    """Collide secret related keys with offline key guesses.

    Queries the related-key oracle at q_e distinct offsets on one fixed
    plaintext, evaluates the construction under q_g guessed keys offline
    through the public round-function interface, and on a ciphertext match
    confirms the candidate on a second plaintext (one extra oracle query).
    Success against the construction approaches 1 - exp(-q_e*q_g/N); an
    ideal cipher only passes the confirmation by accident.
    """
    N = params.N
    offline = CipherInstance(params, rounds, schedule, tuple(fs), construction)
    w1, w2 = plaintexts
    if offsets is None:
        offsets = rng.sample(range(N), q_e)
    if guesses is None:
        guesses = rng.sample(range(N), q_g)
    seen = {}
    for off in offsets:
        seen[rk.encrypt(off, w1)] = off
    confirm_cache: dict[int, int] = {}
    for guess in guesses:
        off = seen.get(offline.encrypt_block(guess, w1))
        if off is None:
            continue
        if off not in confirm_cache:
            confirm_cache[off] = rk.encrypt(off, w2)
        if confirm_cache[off] == offline.encrypt_block(guess, w2):
            return 1
    return 0
