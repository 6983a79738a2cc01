"""Inductive constructions for coordinatewise-product algebras.

Round r = (m, l) appends a fractional-power block (S^{a_r} y^(l))^{1/m} whose
seminorm certificates make every polynomial in the assembled generator track
the scheduled targets:

  A1: the block itself is small in the round's seminorm;
  A2: every earlier shift applied to every relevant power of the block is small;
  A3: consecutive indices are separated by more than the previous target's
      support, which keeps all block supports pairwise disjoint.

Candidate indices come from a hypercyclicity witness and are screened with
vectorized log arithmetic; the accepted index is then re-certified through the
exact sequence/seminorm path, which is also what bundle re-validation uses.
"""
from __future__ import annotations

import math

import numpy as np

from .bundle import Bundle, Cert, CoordRound
from .core import (
    NEG_INF,
    FiniteSeq,
    WeightSpec,
    WideComplex,
    backward_iterate,
    coordinatewise_power,
    root_power_block,
)
from .criteria import PkWitness, extend_pk_witness, find_pk_witness
from .element import AlgebraElement
from .errors import SearchExhausted, SpaceProductError, search_budget
from .schedule import PairOrder, TargetSchedule
from .spaces import SpaceSpec, basis_log_array, seminorm_eval

_LN2 = math.log(2.0)


class CoordState:
    """Mutable record of a coordinatewise construction in progress."""

    def __init__(
        self,
        space: SpaceSpec,
        w: WeightSpec,
        targets: list[FiniteSeq],
        K: int = 1,
        *,
        pk: PkWitness | None = None,
        pk_horizon_n: int = 64,
        pk_horizon_q: int = 5,
    ):
        if not space.supports_coordinatewise:
            raise SpaceProductError(
                f"{space.cli_id} is not an algebra under the coordinatewise product"
            )
        self.space = space
        self.w = w
        self.schedule = TargetSchedule(targets, K)
        self.pairing = PairOrder()
        self.pk = pk if pk is not None else find_pk_witness(
            space, w, 64, horizon_n=pk_horizon_n, horizon_q=pk_horizon_q, growth=True
        )
        self.rounds: list[CoordRound] = []

    @property
    def K(self) -> int:
        return self.schedule.K

    def a_values(self) -> list[int]:
        return [rd.a for rd in self.rounds]


def _candidate_lower_bound(state: CoordState, r: int) -> int:
    if r == 1:
        return 0
    prev = state.rounds[-1]
    return prev.a + state.schedule.s(prev.l)  # strict A3: a_r > a_{r-1} + s


def _combine_terms(space: SpaceSpec, terms: list[np.ndarray]) -> np.ndarray:
    """Seminorm of coefficient-term log arrays, matching seminorm_eval exactly:
    sup-type families take the max, l_p sums p-th powers, the rest sum."""
    sid = space.space_id
    if sid in ("c0", "omega_coord"):
        acc = terms[0]
        for t in terms[1:]:
            acc = np.maximum(acc, t)
        return acc
    if sid == "l_p":
        p = space.p
        acc = terms[0] * p
        for t in terms[1:]:
            acc = np.logaddexp(acc, t * p)
        return acc / p
    acc = terms[0]
    for t in terms[1:]:
        acc = np.logaddexp(acc, t)
    return acc


def _screen(state: CoordState, r: int, m: int, y: FiniteSeq, lower: int) -> np.ndarray:
    """Vectorized A1/A2 pre-filter over witness indices > lower (order preserved)."""
    space, w = state.space, state.w
    cands = state.pk.p[np.searchsorted(state.pk.p, lower, side="right"):]
    if len(cands) == 0:
        return cands
    supp = [(n, c.log_mag / m) for n, c in y.items()]
    smax = y.max_index
    logv = w.v_log_array(int(cands[-1]) + smax)
    d_r = state.pairing.max_degree_before(r)
    bound = -r * _LN2

    alive = cands
    # A1: || (S^a y)^{1/m} ||_r < 2^-r
    terms = []
    for n, ylog in supp:
        idx = alive + n
        terms.append(ylog - (logv[idx] - logv[n]) / m + basis_log_array(space, r, idx))
    alive = alive[_combine_terms(space, terms) < bound]
    # A2: || T^{a_t} (S^a y)^{nu/m} ||_r < 2^-r, most recent shifts first
    for t in range(r - 1, 0, -1):
        a_t = state.rounds[t - 1].a
        for nu in range(1, d_r + 1):
            if len(alive) == 0:
                return alive
            terms = []
            for n, ylog in supp:
                idx = alive + n
                terms.append(
                    nu * (ylog - (logv[idx] - logv[n]) / m)
                    + (logv[idx] - logv[idx - a_t])
                    + basis_log_array(space, r, idx - a_t)
                )
            alive = alive[_combine_terms(space, terms) < bound]
    return alive


def certify_coord_round(
    space: SpaceSpec,
    w: WeightSpec,
    schedule: TargetSchedule,
    pairing: PairOrder,
    prev_rounds: list[CoordRound],
    r: int,
    a: int,
) -> CoordRound:
    """Exact certification of round r at index a via the sequence/seminorm path."""
    m, l = pairing.decode(r)
    y = schedule.target(l)
    block = root_power_block(w, y, a, 1, m)
    checks = {"A1": Cert.less(seminorm_eval(space, r, block).upper_log, -r)}
    if r >= 2:
        d_r = pairing.max_degree_before(r)
        worst = NEG_INF
        for t in range(1, r):
            a_t = prev_rounds[t - 1].a
            for nu in range(1, d_r + 1):
                img = backward_iterate(w, coordinatewise_power(block, nu), a_t)
                worst = max(worst, seminorm_eval(space, r, img).upper_log)
        checks["A2"] = Cert.less(worst, -r)
        prev = prev_rounds[-1]
        checks["A3"] = Cert.greater(a - prev.a, schedule.s(prev.l))
    return CoordRound(r=r, m=m, l=l, a=a, block=block, checks=checks)


def select_ar(state: CoordState, r: int) -> CoordRound:
    """Smallest admissible witness index for round r, with stored certificates.

    Equivalent to an ascending first-success scan; the vectorized screen only
    discards indices that fail a necessary inequality, and the survivor is
    re-certified exactly before acceptance.
    """
    if r != len(state.rounds) + 1:
        raise ValueError(f"rounds are built in order; expected round {len(state.rounds) + 1}")
    m, l = state.pairing.decode(r)
    y = state.schedule.target(l)
    lower = _candidate_lower_bound(state, r)
    budget = search_budget()
    while True:
        alive = _screen(state, r, m, y, lower)
        for a in alive[:16]:
            round_ = certify_coord_round(
                state.space, state.w, state.schedule, state.pairing, state.rounds, r, int(a)
            )
            if round_.passed:
                state.rounds.append(round_)
                return round_
        if len(alive) > 16:
            # screen said yes but certification said no for 16 candidates in a row:
            # numerical disagreement beyond slack would be a bug
            raise SearchExhausted(
                "screened candidates repeatedly failed exact certification",
                round=r,
                first_candidate=int(alive[0]),
            )
        want = max(2 * state.pk.count, 128)
        if int(state.pk.p[-1]) >= budget:
            raise SearchExhausted(
                "no admissible index within the search budget",
                round=r,
                m=m,
                l=l,
                scanned_to=int(state.pk.p[-1]),
            )
        state.pk = extend_pk_witness(state.space, state.w, state.pk, want)


def build_generator(state: CoordState, R: int) -> Bundle:
    """Drive rounds 1..R and assemble the truncated generator bundle."""
    for r in range(len(state.rounds) + 1, R + 1):
        select_ar(state, r)
    _assert_disjoint(state.rounds[:R])
    kind = "coord" if state.K == 1 else "coord-algebrable"
    return Bundle(
        kind=kind,
        space=state.space,
        weight=state.w,
        targets=list(state.schedule.targets),
        K=state.K,
        rounds=list(state.rounds[:R]),
    )


def build_algebrable(state: CoordState, R: int) -> Bundle:
    """K disjointly supported generators sharing one round sequence (K = state.K)."""
    if state.K < 1:
        raise ValueError("need K >= 1")
    return build_generator(state, R)


def _assert_disjoint(rounds: list[CoordRound]) -> None:
    seen: set[int] = set()
    for rd in rounds:
        s = set(rd.block.support)
        if seen & s:
            raise AssertionError("block supports overlap; separation bookkeeping is broken")
        seen |= s


def homogeneous_parts(z: AlgebraElement, generators: list[FiniteSeq]) -> dict[int, FiniteSeq]:
    """Surviving diagonal parts Q_nu = sum_k c_{nu,k} (x^(k))^nu of z.

    Terms touching two distinct generators vanish exactly (disjoint supports),
    so only single-generator powers survive.  Keys are the degrees nu with a
    nonzero surviving part.
    """
    if z.num_generators > len(generators):
        raise ValueError(f"element uses {z.num_generators} generators, bundle has {len(generators)}")
    parts: dict[int, FiniteSeq] = {}
    for beta, c in z.coeffs.items():
        active = [k for k, e in enumerate(beta) if e > 0]
        if len(active) >= 2:
            continue  # cross term: exact zero by disjoint supports
        (k,) = active
        nu = beta[k]
        piece = coordinatewise_power(generators[k], nu).scale(WideComplex.from_complex(c))
        parts[nu] = parts.get(nu, FiniteSeq.zero()) + piece
    return {nu: seq for nu, seq in sorted(parts.items()) if not seq.is_zero}
