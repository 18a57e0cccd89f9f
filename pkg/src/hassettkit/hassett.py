"""Hassett discriminants and the lattice constructions around them.

``dm_quotient`` turns a lattice with a distinguished element into the form
``v -> disc(Span(o, v))`` on ``M / Zo``; ``lift_form`` goes the other way,
building a lattice one rank up whose quotient is a given form with values in
the Hassett set.  Membership of the intersection of all Hassett divisors is
certified through the primitive image of the quotient.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

from .arithmetic import F0_GRAM, in_hassett, solve_hassett_proof
from .enumeration import image_up_to, represents_primitively, vectors_with_norm
from .errors import (
    MissingDiscriminants,
    NotInHassett,
    NotSupportedInH,
    ProofModeUnavailable,
    RankOutOfRange,
)
from .gramio import dumps, gram_digest
from .lattice import (
    Lattice,
    _column_reduce,
    content,
    default_distinguished,
    require_distinguished,
    smith_normal_form,
    validate,
)

__all__ = [
    "in_hassett",
    "hassett_up_to",
    "quotient_basis",
    "dm_quotient",
    "LiftResult",
    "lift_form",
    "k_lattice",
    "YangYuReport",
    "yang_yu_check",
    "cm_in_cd",
    "ZCertificate",
    "verify_z_membership",
    "check_certificate",
]


def hassett_up_to(bound: int) -> list:
    return [d for d in range(8, bound + 1) if in_hassett(d)]


def quotient_basis(o: Sequence[int]) -> tuple:
    """Vectors completing the primitive vector ``o`` to a basis of Z^n.

    Taken from the inverse of a unimodular column reduction of ``o``; for
    ``o = e_1`` this is ``e_2, ..., e_n``.
    """
    g, _, Vinv = _column_reduce(o)
    if g != 1:
        raise ValueError(f"{tuple(o)} is not primitive")
    return tuple(tuple(r) for r in Vinv[1:])


def dm_quotient(L: Lattice, o: Sequence[int]) -> Lattice:
    """Gram matrix of ``M / Zo`` with pairing ``3<u,w> - <o,u><o,w>``."""
    o = require_distinguished(L, o)
    basis = quotient_basis(o)
    ob = [L.pair(o, b) for b in basis]
    gram = [
        [3 * L.pair(basis[i], basis[j]) - ob[i] * ob[j] for j in range(len(basis))]
        for i in range(len(basis))
    ]
    if not gram:
        raise ValueError("quotient of a rank-1 lattice is zero")
    return validate(gram)


@dataclass(frozen=True)
class LiftResult:
    lattice: Lattice
    distinguished: tuple
    parity_flag: int
    basis: tuple  # normalized basis of the input form, rows in input coordinates


def _norm_mod6_witness(F: Lattice, u, w):
    """Whichever of ``u + w``, ``u - w`` has norm 4 mod 6."""
    for s in (1, -1):
        v = tuple(a + s * b for a, b in zip(u, w))
        if F.norm(v) % 6 == 4:
            return v
    return None


def lift_form(F) -> LiftResult:
    """Lattice ``M`` one rank up with ``f(c) = 3|v| - <o, v>^2`` for ``v = sum c_i v_i'``.

    The basis of ``F`` is first normalized so that every basis norm after the
    first is 0 mod 6; the result's Gram matrix is expressed in that basis.
    Whenever a check fails the form provably takes a value outside the
    Hassett set and :class:`NotSupportedInH` carries a vector exhibiting it.
    """
    F = F if isinstance(F, Lattice) else validate(F)
    n = F.rank
    for bad in (2, 6):
        vs = vectors_with_norm(F, bad)
        if vs:
            raise NotSupportedInH(vs[0], bad, "values 2 and 6 are excluded")
    basis = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    for i, v in enumerate(basis):
        if F.norm(v) % 6 not in (0, 2):
            raise NotSupportedInH(v, F.norm(v), "basis norm is not 0 or 2 mod 6")

    for k in range(n - 1, 0, -1):
        if F.norm(basis[k]) % 6 == 0:
            continue
        if F.norm(basis[k - 1]) % 6 == 0:
            basis[k - 1], basis[k] = basis[k], basis[k - 1]
            continue
        for s in (1, -1):
            cand = tuple(a + s * b for a, b in zip(basis[k - 1], basis[k]))
            if F.norm(cand) % 6 == 0:
                basis[k] = cand
                break
        else:
            w = tuple(a + b for a, b in zip(basis[k - 1], basis[k]))
            raise NotSupportedInH(w, F.norm(w), "pairing of two norm-2-mod-6 vectors is 0 mod 3")

    for i in range(n):
        for j in range(i + 1, n):
            if F.pair(basis[i], basis[j]) % 3:
                w = _norm_mod6_witness(F, basis[i], basis[j])
                raise NotSupportedInH(w, F.norm(w), "basis pairing not divisible by 3")

    flag = 1 if F.norm(basis[0]) % 6 == 2 else 0
    gram = [[0] * (n + 1) for _ in range(n + 1)]
    gram[0][0] = 3
    gram[0][1] = gram[1][0] = flag
    for i in range(n):
        for j in range(n):
            p = F.pair(basis[i], basis[j])
            if i == j == 0:
                p += flag
            gram[i + 1][j + 1] = p // 3
    M = validate(gram)
    return LiftResult(M, (1,) + (0,) * n, flag, tuple(basis))


def k_lattice(d: int) -> Lattice:
    """The rank-2 lattice of discriminant ``d`` spanned by o and one class."""
    if not in_hassett(d):
        raise NotInHassett(d)
    m = d // 6
    if d % 6 == 2:
        return validate([[3, 1], [1, 2 * m + 1]])
    return validate([[3, 0], [0, 2 * m]])


@dataclass(frozen=True)
class YangYuReport:
    distinguished: Optional[tuple]
    roots: tuple
    rank: int
    l: int
    passes: bool
    codimension: Optional[int]

    def to_dict(self) -> dict:
        return {
            "distinguished": list(self.distinguished) if self.distinguished else None,
            "roots": [list(r) for r in self.roots],
            "rank": self.rank,
            "l": self.l,
            "passes": self.passes,
            "codimension": self.codimension,
        }


def yang_yu_check(L: Lattice) -> YangYuReport:
    """Distinguished element present, no roots, and rank + l <= 20."""
    if not 2 <= L.rank <= 21:
        raise RankOutOfRange(f"rank {L.rank} outside 2..21")
    o = default_distinguished(L)
    roots = tuple(vectors_with_norm(L, 2))
    l = smith_normal_form(L.gram).l
    passes = o is not None and not roots and L.rank + l <= 20
    return YangYuReport(o, roots, L.rank, l, passes, L.rank - 1 if passes else None)


def cm_in_cd(L: Lattice, o: Sequence[int], d: int) -> Optional[tuple]:
    """Primitive class of ``D(L, o)`` with norm ``d``, or ``None``."""
    return represents_primitively(dm_quotient(L, o), d)


@dataclass(frozen=True)
class ZCertificate:
    digest: str
    distinguished: tuple
    bound: int
    mode: str
    witnesses: dict  # d -> vector in the quotient basis

    def to_dict(self) -> dict:
        return {
            "digest": self.digest,
            "distinguished": list(self.distinguished),
            "bound": self.bound,
            "mode": self.mode,
            "witnesses": [{"d": d, "vector": list(self.witnesses[d])} for d in sorted(self.witnesses)],
        }

    def to_json(self) -> str:
        return dumps(self.to_dict())

    @classmethod
    def from_dict(cls, obj: dict) -> "ZCertificate":
        return cls(
            obj["digest"],
            tuple(obj["distinguished"]),
            obj["bound"],
            obj["mode"],
            {w["d"]: tuple(w["vector"]) for w in obj["witnesses"]},
        )

    @classmethod
    def from_json(cls, text: str) -> "ZCertificate":
        return cls.from_dict(json.loads(text))


MODES = ("enumeration", "proof")


def verify_z_membership(L: Lattice, o: Sequence[int], bound: int, mode: str = "enumeration", workers: int = 1) -> ZCertificate:
    """Witness a primitive class of ``D(L, o)`` for every Hassett ``d <= bound``.

    ``proof`` mode is only available when the quotient is exactly the rank-4
    form ``f0`` and then uses the constructive solver instead of enumeration.
    """
    if bound < 8:
        raise ValueError("bound must be >= 8")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    o = tuple(o)
    D = dm_quotient(L, o)
    targets = hassett_up_to(bound)
    if mode == "proof":
        if D.gram != F0_GRAM:
            raise ProofModeUnavailable("proof mode needs the quotient to equal the f0 Gram matrix")
        if workers > 1:
            with ProcessPoolExecutor(workers) as ex:
                sols = list(ex.map(solve_hassett_proof, targets, chunksize=256))
        else:
            sols = [solve_hassett_proof(d) for d in targets]
        found = {d: s.vector for d, s in zip(targets, sols)}
    else:
        found = image_up_to(D, bound, primitive_only=True, witnesses=True).witnesses
    witnesses = {d: found[d] for d in targets if d in found}
    missing = [d for d in targets if d not in witnesses]
    if missing:
        raise MissingDiscriminants(missing, bound)
    return ZCertificate(gram_digest(L), o, bound, mode, witnesses)


def check_certificate(L: Lattice, cert: ZCertificate) -> bool:
    """Independently re-check a certificate against a lattice."""
    if cert.digest != gram_digest(L):
        return False
    D = dm_quotient(L, cert.distinguished)
    if sorted(cert.witnesses) != hassett_up_to(cert.bound):
        return False
    return all(content(v) == 1 and D.norm(v) == d for d, v in cert.witnesses.items())
