"""Minimal free resolutions, Betti numbers and periodicity detection."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .decomp import (
    ClassRegistry,
    Iso,
    Unknown,
    decompose,
    fingerprint,
    is_isomorphic,
)
from .errors import BudgetExceeded
from .laurent import LaurentPoly
from .modules import Module


@dataclass(frozen=True)
class Resolution:
    module: Module
    length: int
    syzygy_chain: tuple[Module, ...]
    betti: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "length": self.length,
            "betti": list(self.betti),
            "syzygy_dims": [M.dim for M in self.syzygy_chain],
        }


def minimal_resolution(M: Module, steps: int) -> Resolution:
    """``Omega^0 M, ..., Omega^steps M`` from minimal covers.

    Stops early once a syzygy vanishes; the zero syzygy is kept in the chain
    but contributes no Betti number.
    """
    chain = [M]
    betti = []
    cur = M
    for i in range(steps + 1):
        if cur.dim == 0:
            break
        betti.append(cur.nu)
        if i == steps:
            break
        cur = cur.omega
        chain.append(cur)
    return Resolution(M, len(chain) - 1, tuple(chain), tuple(betti))


def betti_sequence(M: Module, t: int) -> list[int]:
    """``beta_0 .. beta_t``, padded with zeros past the projective dimension."""
    b = list(minimal_resolution(M, t).betti)
    return b + [0] * (t + 1 - len(b))


def poincare_truncation(M: Module, t: int) -> LaurentPoly:
    return LaurentPoly.from_coefficients(betti_sequence(M, t))


def is_pd_finite(M: Module, budget: int = 1) -> bool:
    cur = M
    for _ in range(budget + 1):
        if cur.is_free:
            return True
        cur = cur.omega
    return cur.is_free


@dataclass(frozen=True)
class Periodic:
    lead: int
    period: int
    witness: Optional[np.ndarray]
    betti: tuple[int, ...]
    class_ids: tuple[int, ...] = ()

    kind = "periodic"

    def to_dict(self) -> dict:
        return {
            "verdict": "periodic",
            "lead": self.lead,
            "period": self.period,
            "betti": list(self.betti),
            "witness": None if self.witness is None else self.witness.tolist(),
            "class_ids": list(self.class_ids),
        }


@dataclass(frozen=True)
class PeriodicityExceeded:
    betti: tuple[int, ...]
    dims: tuple[int, ...]

    kind = "exceeded"

    def to_dict(self) -> dict:
        return {"verdict": "exceeded_budget", "betti": list(self.betti), "dims": list(self.dims)}


PeriodicityVerdict = Union[Periodic, PeriodicityExceeded]


def _coarse_invariants(M: Module) -> tuple:
    # cheap enough to compute for every syzygy; the full fingerprint needs Hom
    return (M.dim, M.nu, int(M.socle.shape[1]), tuple(int(b.shape[1]) for b in M.radical_filtration))


def detect_periodicity(M: Module, budget: int, reg: ClassRegistry | None = None) -> PeriodicityVerdict:
    """Find the first ``l < l + n <= budget`` with ``Omega^l M = Omega^(l+n) M``.

    Syzygies are compared only when cheap invariants and then fingerprints agree, and a repeat
    is reported only with an isomorphism witness.  With a registry, the
    indecomposable summands of the periodic syzygy are registered and their
    ids returned.
    """
    if reg is None:
        reg = ClassRegistry(M.algebra)
    chain: list[Module] = []
    coarse = []
    betti: list[int] = []
    cur = M
    for i in range(budget + 1):
        key = _coarse_invariants(cur)
        betti.append(cur.nu)
        for j in range(i):
            if coarse[j] != key:
                continue
            if fingerprint(chain[j], reg.depth) != fingerprint(cur, reg.depth):
                continue
            v = is_isomorphic(chain[j], cur, reg.budget, reg.rng, reg.depth)
            if isinstance(v, Iso):
                ids = tuple(sorted(reg.canonical_id(S) for S in decompose(cur, reg.budget, reg.rng) if not S.is_free))
                return Periodic(j, i - j, v.witness, tuple(betti), ids)
            if isinstance(v, Unknown):
                raise BudgetExceeded(
                    "isomorphism between syzygies undecided",
                    {"indices": [j, i], "trials": v.trials, "hom_dim": v.hom_dim},
                )
        chain.append(cur)
        coarse.append(key)
        if i < budget:
            cur = cur.omega
    return PeriodicityExceeded(tuple(betti), tuple(C.dim for C in chain))
