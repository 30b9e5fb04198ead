"""Fusion combinatorics of the dual of a compact group.

The dual is modelled as a countable set of irreducible-representation labels
together with dimensions, conjugation and fusion multiplicities
``N[a,b]^c`` (the number of copies of ``c`` in the decomposition of the
tensor product ``a (x) b``).  Everything here is exact integer arithmetic;
the only floating-point number produced is the final Folner ratio.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from itertools import count, product
from typing import Iterable, Iterator, Union

import numpy as np

from .errors import InvalidInputError

Label = Union[int, tuple]


class FusionRing(ABC):
    """Labels, dimensions, conjugates and fusion rules of a dual object.

    Subclasses provide:

    - ``trivial``: the label of the trivial representation,
    - ``dim(a)``: positive integer dimension,
    - ``conj(a)``: the conjugate label (same dimension, involutive),
    - ``fuse(a, b)``: decomposition of ``a (x) b`` as ``{label: multiplicity}``
      with all multiplicities positive integers,
    - ``labels()``: a stream of all labels in a fixed, documented total order,
    - ``is_valid_label(a)`` and ``sort_key(a)``.

    The total order given by ``sort_key`` agrees with the enumeration order
    of ``labels()``; it is used for every deterministic reduction.
    """

    name: str = "ring"

    @property
    @abstractmethod
    def trivial(self) -> Label: ...

    @abstractmethod
    def dim(self, label: Label) -> int: ...

    @abstractmethod
    def conj(self, label: Label) -> Label: ...

    @abstractmethod
    def fuse(self, a: Label, b: Label) -> dict[Label, int]: ...

    @abstractmethod
    def labels(self) -> Iterator[Label]: ...

    @abstractmethod
    def is_valid_label(self, label) -> bool: ...

    @abstractmethod
    def sort_key(self, label: Label): ...

    def check_label(self, label) -> Label:
        if not self.is_valid_label(label):
            raise InvalidInputError(f"{label!r} is not a label of ring {self.name}")
        return label

    def multiplicity(self, a: Label, b: Label, c: Label) -> int:
        """Fusion multiplicity N[a,b]^c."""
        self.check_label(c)
        return self.fuse(a, b).get(c, 0)

    def enumerate_labels(self, bound: int) -> list[Label]:
        """First `bound` labels in the ring's total order."""
        if bound < 1:
            raise InvalidInputError("bound must be >= 1")
        out = []
        for label in self.labels():
            out.append(label)
            if len(out) >= bound:
                break
        return out

    def sorted_labels(self, labels: Iterable[Label]) -> list[Label]:
        return sorted(labels, key=self.sort_key)

    def parse_label(self, literal) -> Label:
        raise NotImplementedError

    def format_label(self, label: Label) -> str:
        return str(label)

    def default_schedule(self, steps: int) -> "FolnerSchedule":
        raise InvalidInputError(f"ring {self.name} has no default schedule")

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


@dataclass(frozen=True)
class FolnerSchedule:
    """An ordered list of finite nonempty label sets (nesting not required)."""

    sets: tuple[frozenset, ...]
    description: str = ""

    def __post_init__(self):
        if len(self.sets) == 0:
            raise InvalidInputError("schedule must contain at least one set")
        object.__setattr__(self, "sets", tuple(frozenset(F) for F in self.sets))
        for F in self.sets:
            if len(F) == 0:
                raise InvalidInputError("schedule sets must be nonempty")

    def __len__(self):
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    def __getitem__(self, i):
        return self.sets[i]


class LatticeRing(FusionRing):
    """Dual of the d-torus, equally the group ring of the free abelian group
    of the given rank.  Labels are ints for rank 1 and int tuples otherwise;
    every dimension is 1, fusion is addition, conjugation is negation.

    Enumeration order: rank 1 goes 0, 1, -1, 2, -2, ...; higher ranks walk
    sup-norm shells outward, lexicographically inside each shell.
    """

    def __init__(self, rank: int = 1, name: str | None = None):
        if rank < 1:
            raise InvalidInputError("rank must be >= 1")
        self.rank = rank
        self.name = name or ("Z" if rank == 1 else f"Z^{rank}")

    @property
    def trivial(self) -> Label:
        return 0 if self.rank == 1 else (0,) * self.rank

    def dim(self, label):
        self.check_label(label)
        return 1

    def conj(self, label):
        self.check_label(label)
        return -label if self.rank == 1 else tuple(-x for x in label)

    def fuse(self, a, b):
        self.check_label(a)
        self.check_label(b)
        if self.rank == 1:
            return {a + b: 1}
        return {tuple(x + y for x, y in zip(a, b)): 1}

    def is_valid_label(self, label):
        if self.rank == 1:
            return isinstance(label, (int, np.integer)) and not isinstance(label, bool)
        return (
            isinstance(label, tuple)
            and len(label) == self.rank
            and all(isinstance(x, (int, np.integer)) for x in label)
        )

    def sort_key(self, label):
        if self.rank == 1:
            return (abs(label), 0 if label >= 0 else 1)
        return (max(abs(x) for x in label), label)

    def labels(self):
        if self.rank == 1:
            yield 0
            for n in count(1):
                yield n
                yield -n
        else:
            for r in count(0):
                shell = [
                    t
                    for t in product(range(-r, r + 1), repeat=self.rank)
                    if max(abs(x) for x in t) == r
                ]
                yield from sorted(shell)

    def box(self, n: int) -> frozenset:
        """The box {-n..n}^rank."""
        if n < 0:
            raise InvalidInputError("box radius must be >= 0")
        if self.rank == 1:
            return frozenset(range(-n, n + 1))
        return frozenset(product(range(-n, n + 1), repeat=self.rank))

    def default_schedule(self, steps: int) -> FolnerSchedule:
        return FolnerSchedule(
            tuple(self.box(n) for n in range(1, steps + 1)),
            description=f"{self.name} boxes {{-n..n}} for n=1..{steps}",
        )

    def parse_label(self, literal):
        if self.is_valid_label(literal):
            return literal if self.rank == 1 else tuple(int(x) for x in literal)
        if isinstance(literal, (list, tuple)) and self.rank > 1:
            return self.check_label(tuple(int(x) for x in literal))
        if isinstance(literal, (int, np.integer)) and self.rank > 1:
            raise InvalidInputError(f"label of {self.name} needs {self.rank} components")
        if isinstance(literal, str):
            text = literal[2:] if literal.startswith("w:") else literal
            parts = [p for p in text.replace(";", ",").split(",") if p.strip() != ""]
            try:
                values = [int(p) for p in parts]
            except ValueError as exc:
                raise InvalidInputError(f"cannot parse label literal {literal!r}") from exc
            if self.rank == 1 and len(values) == 1:
                return values[0]
            return self.check_label(tuple(values))
        raise InvalidInputError(f"cannot parse label literal {literal!r}")

    def format_label(self, label):
        if self.rank == 1:
            return str(label)
        return ",".join(str(x) for x in label)


class SU2Ring(FusionRing):
    """Dual of SU(2).  Labels are nonnegative integers n = 2j, the dimension
    is n+1, every label is self-conjugate, and fusion follows the
    Clebsch-Gordan rule a (x) b = |a-b| + |a-b|+2 + ... + a+b.
    """

    name = "SU2"

    @property
    def trivial(self):
        return 0

    def dim(self, label):
        self.check_label(label)
        return label + 1

    def conj(self, label):
        self.check_label(label)
        return label

    def fuse(self, a, b):
        self.check_label(a)
        self.check_label(b)
        return {c: 1 for c in range(abs(a - b), a + b + 1, 2)}

    def is_valid_label(self, label):
        return isinstance(label, (int, np.integer)) and not isinstance(label, bool) and label >= 0

    def sort_key(self, label):
        return label

    def labels(self):
        return count(0)

    def spins(self, n: int) -> frozenset:
        """The spin interval {2j = 0..n}."""
        if n < 0:
            raise InvalidInputError("spin bound must be >= 0")
        return frozenset(range(n + 1))

    def default_schedule(self, steps: int) -> FolnerSchedule:
        return FolnerSchedule(
            tuple(self.spins(n) for n in range(1, steps + 1)),
            description=f"SU2 spin intervals {{0..n}} for n=1..{steps}",
        )

    def parse_label(self, literal):
        if self.is_valid_label(literal):
            return int(literal)
        if isinstance(literal, str):
            try:
                return self.check_label(int(literal))
            except ValueError as exc:
                raise InvalidInputError(f"cannot parse label literal {literal!r}") from exc
        raise InvalidInputError(f"cannot parse label literal {literal!r}")


class FiniteDualRing(FusionRing):
    """Dual of a finite group, built from tabulated irrep data.

    Labels are indices into `irrep_names` (trivial first).  Fusion
    multiplicities come from character orthogonality,
    N[a,b]^c = (1/|G|) sum_g chi_a(g) chi_b(g) conj(chi_c(g)),
    rounded to the nearest integer after checking the residue is tiny.
    """

    def __init__(self, name: str, irrep_names: tuple[str, ...], dims: tuple[int, ...],
                 character_table: np.ndarray):
        # character_table[a, i] = chi_a(g_i) over the group's element list
        self.name = name
        self.irrep_names = tuple(irrep_names)
        self.dims = tuple(int(d) for d in dims)
        self.characters = np.asarray(character_table, dtype=complex)
        self.order = self.characters.shape[1]
        if self.characters.shape[0] != len(self.dims):
            raise InvalidInputError("character table / dimension list mismatch")
        if sum(d * d for d in self.dims) != self.order:
            raise InvalidInputError("irrep dimensions do not sum-of-squares to the group order")
        self._conj = [self._match_character(np.conj(self.characters[a])) for a in range(len(dims))]
        # the dual is tiny, so the whole fusion table is materialized up front
        # and instances stay immutable
        k = len(self.dims)
        self._fusion = {
            (a, b): self._fuse_from_characters(a, b) for a in range(k) for b in range(k)
        }

    def _match_character(self, chi: np.ndarray) -> int:
        for b in range(self.characters.shape[0]):
            if np.max(np.abs(self.characters[b] - chi)) < 1e-8:
                return b
        raise InvalidInputError(f"character table of {self.name} is not closed under conjugation")

    @property
    def trivial(self):
        return 0

    def dim(self, label):
        self.check_label(label)
        return self.dims[label]

    def conj(self, label):
        self.check_label(label)
        return self._conj[label]

    def _fuse_from_characters(self, a: int, b: int) -> dict[int, int]:
        prod = self.characters[a] * self.characters[b]
        out = {}
        for c in range(len(self.dims)):
            n = np.vdot(self.characters[c], prod) / self.order
            n_int = int(round(n.real))
            if abs(n - n_int) > 1e-8:
                raise InvalidInputError(
                    f"non-integer fusion multiplicity {n} in ring {self.name}"
                )
            if n_int:
                out[c] = n_int
        return out

    def fuse(self, a, b):
        self.check_label(a)
        self.check_label(b)
        return dict(self._fusion[(int(a), int(b))])

    def is_valid_label(self, label):
        return (
            isinstance(label, (int, np.integer))
            and not isinstance(label, bool)
            and 0 <= label < len(self.dims)
        )

    def sort_key(self, label):
        return label

    def labels(self):
        return iter(range(len(self.dims)))

    def full_dual(self) -> frozenset:
        return frozenset(range(len(self.dims)))

    def default_schedule(self, steps: int) -> FolnerSchedule:
        return FolnerSchedule(
            tuple(self.full_dual() for _ in range(steps)),
            description=f"{self.name} full dual, constant",
        )

    def parse_label(self, literal):
        if self.is_valid_label(literal):
            return int(literal)
        if isinstance(literal, str):
            if literal in self.irrep_names:
                return self.irrep_names.index(literal)
            try:
                return self.check_label(int(literal))
            except ValueError as exc:
                raise InvalidInputError(
                    f"unknown irrep {literal!r} of {self.name}; names: {self.irrep_names}"
                ) from exc
        raise InvalidInputError(f"cannot parse label literal {literal!r}")

    def format_label(self, label):
        return self.irrep_names[self.check_label(label)]


def weighted_cardinality(F: Iterable[Label], ring: FusionRing) -> int:
    """|F|_w = sum of squared dimensions over F.  Exact integer."""
    return sum(ring.dim(a) ** 2 for a in F)


def fuse(a: Label, b: Label, ring: FusionRing) -> dict[Label, int]:
    """Decomposition of a (x) b as {label: multiplicity}."""
    return ring.fuse(a, b)


def boundary(F: Iterable[Label], S: Iterable[Label], ring: FusionRing) -> frozenset:
    """Boundary of F relative to S.

    The inner part collects a in F that fuse with some g in S to a label
    outside F.  The outer part is defined by a quantifier over all labels
    not in F; by Frobenius reciprocity (N[a,g]^b = N[b,conj(g)]^a) it equals
    the set of labels outside F reachable by fusing F with conj(S), which is
    finite and computed directly.
    """
    F = frozenset(ring.check_label(a) for a in F)
    S = frozenset(ring.check_label(g) for g in S)
    if not S:
        raise InvalidInputError("S must be nonempty")
    inner = set()
    outer = set()
    for a in F:
        for g in S:
            if any(b not in F for b in ring.fuse(a, g)):
                inner.add(a)
                break
    for b in F:
        for g in S:
            for a in ring.fuse(b, ring.conj(g)):
                if a not in F:
                    outer.add(a)
    return frozenset(inner | outer)


def folner_ratio(F: Iterable[Label], S: Iterable[Label], ring: FusionRing) -> float:
    """|boundary(F,S)|_w / |F|_w, both sides exact integers before the division."""
    F = frozenset(F)
    if not F:
        raise InvalidInputError("F must be nonempty")
    return weighted_cardinality(boundary(F, S, ring), ring) / weighted_cardinality(F, ring)


def verify_folner(schedule: FolnerSchedule, S: Iterable[Label], ring: FusionRing) -> list[float]:
    """Folner ratio of every set in the schedule, in order.

    A sequence with ratios tending to zero for every finite nonempty S is a
    right Folner sequence; this merely reports the finitely many ratios asked
    for and makes no limit claim.
    """
    S = frozenset(S)
    return [folner_ratio(F, S, ring) for F in schedule]
