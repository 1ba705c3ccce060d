"""Discrete sigma-finite measure spaces and the random variables on them.

A space is a finite list of atoms (id, weight > 0) partitioned into
finite-mass blocks. Countable spaces are represented by a truncation with a
tail note recording what was cut off; every statement "almost everywhere"
then means "at every atom", since zero-mass atoms are rejected outright.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import SpaceMismatchError

FINITE = "finite"
TRUNCATED = "truncated_countable"

DEFAULT_TRUNCATION = 1024


@dataclass(frozen=True, eq=False)
class MeasureSpace:
    atom_ids: np.ndarray
    weights: np.ndarray
    block_ids: np.ndarray
    kind: str
    tail_note: str = ""

    def __post_init__(self):
        ids = np.asarray(self.atom_ids, dtype=np.int64)
        w = np.asarray(self.weights, dtype=float)
        blocks = np.asarray(self.block_ids, dtype=np.int64)
        if ids.ndim != 1 or ids.size == 0:
            raise ValueError("a measure space needs at least one atom")
        if len(w) != len(ids) or len(blocks) != len(ids):
            raise ValueError("atom_ids, weights and block_ids must align")
        if np.any(np.diff(ids) <= 0):
            raise ValueError("atom ids must be strictly ascending and unique")
        if not np.all(np.isfinite(w)) or np.any(w <= 0.0):
            raise ValueError("atom weights must be finite and strictly positive")
        if self.kind not in (FINITE, TRUNCATED):
            raise ValueError(f"unknown space kind {self.kind!r}")
        for arr, name in ((ids, "atom_ids"), (w, "weights"), (blocks, "block_ids")):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        fp = hash((self.kind, ids.tobytes(), w.tobytes(), blocks.tobytes()))
        object.__setattr__(self, "_fingerprint", fp)
        uniq = np.unique(blocks)  # ascending block ids define the block order
        block_index = [np.flatnonzero(blocks == b) for b in uniq]
        object.__setattr__(self, "_blocks", tuple(block_index))

    # -- basic queries -----------------------------------------------------

    @property
    def n_atoms(self) -> int:
        return int(self.atom_ids.size)

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum())

    @property
    def fingerprint(self) -> int:
        return self._fingerprint

    def blocks(self) -> tuple[np.ndarray, ...]:
        """Index arrays of the blocks, ordered by ascending block id."""
        return self._blocks

    def block_mass(self, block: np.ndarray) -> float:
        return float(self.weights[block].sum())

    def is_probability(self, tol: float = 1e-9) -> bool:
        return abs(self.total_mass - 1.0) <= tol

    def same_space(self, other: "MeasureSpace") -> bool:
        return self is other or self._fingerprint == other._fingerprint

    # -- constructors ------------------------------------------------------

    @staticmethod
    def finite(
        weights: Iterable[float],
        atom_ids: Iterable[int] | None = None,
        block_ids: Iterable[int] | None = None,
    ) -> "MeasureSpace":
        w = np.asarray(list(weights), dtype=float)
        n = len(w)
        ids = np.arange(1, n + 1) if atom_ids is None else np.asarray(list(atom_ids))
        blocks = np.arange(n) if block_ids is None else np.asarray(list(block_ids))
        return MeasureSpace(ids, w, blocks, FINITE)

    @staticmethod
    def truncated_countable(
        weights: Iterable[float],
        atom_ids: Iterable[int] | None = None,
        block_ids: Iterable[int] | None = None,
        tail_note: str = "",
    ) -> "MeasureSpace":
        """Truncation of a countable space; blocks default to the dyadic
        ranges {2^k, ..., 2^(k+1)-1} of atom positions."""
        w = np.asarray(list(weights), dtype=float)
        n = len(w)
        ids = np.arange(1, n + 1) if atom_ids is None else np.asarray(list(atom_ids))
        if block_ids is None:
            pos = np.arange(1, n + 1)
            blocks = np.floor(np.log2(pos)).astype(np.int64)
        else:
            blocks = np.asarray(list(block_ids))
        note = tail_note or f"atoms beyond position {n} truncated"
        return MeasureSpace(ids, w, blocks, TRUNCATED, tail_note=note)


def uniform_probability(n: int, truncated: bool = False) -> MeasureSpace:
    w = np.full(n, 1.0 / n)
    if truncated:
        return MeasureSpace.truncated_countable(w)
    return MeasureSpace.finite(w)


def counting(n: int, truncated: bool = False) -> MeasureSpace:
    w = np.ones(n)
    if truncated:
        return MeasureSpace.truncated_countable(w)
    return MeasureSpace.finite(w)


# -- random variables ------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Rv:
    """A real vector indexed by the atoms of a space (one value per atom)."""

    space: MeasureSpace
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).copy()
        if v.shape != (self.space.n_atoms,):
            raise ValueError(
                f"value vector of shape {v.shape} does not fit a space with "
                f"{self.space.n_atoms} atoms"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("Rv values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @staticmethod
    def _wrap(space: MeasureSpace, values: np.ndarray) -> "Rv":
        """Internal no-copy, no-validation constructor for hot loops.

        The caller owns ``values`` and must not let the Rv outlive a buffer
        it intends to mutate.
        """
        rv = object.__new__(Rv)
        object.__setattr__(rv, "space", space)
        object.__setattr__(rv, "values", values)
        return rv

    # -- arithmetic (same-space checked) ------------------------------------

    def _peer(self, other: "Rv") -> None:
        if not self.space.same_space(other.space):
            raise SpaceMismatchError("operands live on different measure spaces")

    def __add__(self, other):
        if isinstance(other, Rv):
            self._peer(other)
            return Rv(self.space, self.values + other.values)
        return Rv(self.space, self.values + float(other))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Rv):
            self._peer(other)
            return Rv(self.space, self.values - other.values)
        return Rv(self.space, self.values - float(other))

    def __mul__(self, a):
        return Rv(self.space, self.values * float(a))

    __rmul__ = __mul__

    def __neg__(self):
        return Rv(self.space, -self.values)

    def abs(self) -> "Rv":
        return Rv(self.space, np.abs(self.values))

    def pos_part(self) -> "Rv":
        return Rv(self.space, np.maximum(self.values, 0.0))

    def neg_part(self) -> "Rv":
        return Rv(self.space, np.maximum(-self.values, 0.0))

    def min_value(self) -> float:
        return float(self.values.min())

    def max_value(self) -> float:
        return float(self.values.max())

    def sup_norm(self) -> float:
        return float(np.abs(self.values).max())


def zeros(space: MeasureSpace) -> Rv:
    return Rv(space, np.zeros(space.n_atoms))


def ones(space: MeasureSpace) -> Rv:
    return Rv(space, np.ones(space.n_atoms))


def indicator(space: MeasureSpace, index: Sequence[int] | np.ndarray | int) -> Rv:
    """Indicator of a set of atom *positions* (0-based indexes, not ids)."""
    v = np.zeros(space.n_atoms)
    v[np.asarray(index)] = 1.0
    return Rv(space, v)


def meet(x: Rv, y: Rv) -> Rv:
    x._peer(y)
    return Rv(x.space, np.minimum(x.values, y.values))


def join(x: Rv, y: Rv) -> Rv:
    x._peer(y)
    return Rv(x.space, np.maximum(x.values, y.values))


@dataclass(frozen=True)
class LatticeOps:
    meet: Rv
    join: Rv
    abs: Rv
    pos_part: Rv
    neg_part: Rv


def lattice_ops(x: Rv, y: Rv) -> LatticeOps:
    """Meet/join of the pair plus the unary lattice parts of ``x``."""
    return LatticeOps(meet(x, y), join(x, y), x.abs(), x.pos_part(), x.neg_part())


# -- strictly positive witness ---------------------------------------------


def strictly_positive_witness(space: MeasureSpace, phi) -> Rv:
    """A strictly positive vector with Luxemburg norm at most 1.

    Block n (1-based, in block order) carries the constant
    ``2**-n / (1 + ||indicator(block)||_phi)``; summing over blocks gives a
    strictly positive element whose norm is bounded by the triangle
    inequality by sum 2**-n <= 1.
    """
    from .norms import luxemburg_norm  # local import to avoid a module cycle

    v = np.zeros(space.n_atoms)
    for n, block in enumerate(space.blocks(), start=1):
        chi = indicator(space, block)
        nrm = luxemburg_norm(chi, phi).value
        v[block] = 2.0**-n / (1.0 + nrm)
    return Rv(space, v)


# -- pointwise (atomwise) convergence ---------------------------------------


@dataclass(frozen=True)
class AeVerdict:
    converged: bool
    settle_steps: np.ndarray  # first index from which the tail sup stays <= tol; len(seq) if never
    final_residuals: np.ndarray
    slowest_atom_id: int
    slowest_settle_step: int
    tol: float


def ae_converges(seq: Sequence[Rv], f: Rv, tol: float) -> AeVerdict:
    """Does the recorded sequence settle within ``tol`` at every atom?

    An atom counts as settled once the running tail supremum of
    ``|f_n - f|`` drops to ``tol`` or below and stays there through the end
    of the recording. Reports the slowest atom (largest settle step; among
    unsettled atoms, the one with the worst final residual).
    """
    if len(seq) == 0:
        raise ValueError("cannot judge convergence of an empty sequence")
    for term in seq:
        term._peer(f)
    resid = np.stack([np.abs(term.values - f.values) for term in seq])
    tail_sup = np.maximum.accumulate(resid[::-1], axis=0)[::-1]
    settled = tail_sup <= tol
    n_terms = resid.shape[0]
    settle_steps = n_terms - settled.sum(axis=0)
    converged = bool(np.all(settle_steps < n_terms))
    if converged:
        slow_pos = int(np.argmax(settle_steps))
    else:
        unsettled = settle_steps >= n_terms
        finals = np.where(unsettled, resid[-1], -np.inf)
        slow_pos = int(np.argmax(finals))
    return AeVerdict(
        converged=converged,
        settle_steps=settle_steps,
        final_residuals=resid[-1],
        slowest_atom_id=int(f.space.atom_ids[slow_pos]),
        slowest_settle_step=int(settle_steps[slow_pos]),
        tol=tol,
    )
