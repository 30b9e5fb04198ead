"""Concrete compact groups with exact irreducible matrix coefficients.

Shipped models: the circle and d-torus, SU(2), and a family of finite groups
(C2..C12, S3, D4, Q8) with hard-coded irreducible *matrix* representations,
not just characters.  Duals of discrete abelian groups (the group-algebra
side, where the underlying "space" is noncommutative for nonabelian
examples) are exposed as plain fusion rings without a model.

Every model evaluates u^a_ij(g), the (i,j) entry of a unitary matrix
realizing the irrep a at the element g, and the character as its trace.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from functools import lru_cache
from itertools import permutations

import numpy as np

from .errors import InvalidInputError
from .fusion import FiniteDualRing, FusionRing, LatticeRing, SU2Ring


class CompactGroupModel(ABC):
    """A compact group together with its fusion ring and irrep evaluator.

    Elements are plain values (complex numbers, tuples, indices) interpreted
    by the model; they are normalized on construction and all operations are
    pure, so models are safe to share between threads.
    """

    ring: FusionRing
    name: str

    @abstractmethod
    def identity(self): ...

    @abstractmethod
    def multiply(self, g, h): ...

    @abstractmethod
    def inverse(self, g): ...

    @abstractmethod
    def irrep_matrix(self, label, g) -> np.ndarray: ...

    @abstractmethod
    def haar_sample(self, rng: np.random.Generator): ...

    @abstractmethod
    def distance(self, g, h) -> float: ...

    @abstractmethod
    def parse_element(self, literal): ...

    @abstractmethod
    def format_element(self, g) -> str: ...

    def character_value(self, label, g) -> complex:
        """chi(a)(g), the trace of the irrep matrix; |chi(a)(g)| <= dim(a)."""
        return complex(np.trace(self.irrep_matrix(label, g)))

    def enumerate_dual(self, bound: int) -> list:
        """Deterministic prefix of the dual in the ring's label order."""
        return self.ring.enumerate_labels(bound)

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


def _parse_floats(text: str, expected: int, literal) -> list[float]:
    parts = text.split(",")
    if len(parts) != expected:
        raise InvalidInputError(f"cannot parse element literal {literal!r}")
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise InvalidInputError(f"cannot parse element literal {literal!r}") from exc


class TorusModel(CompactGroupModel):
    """The d-torus; rank 1 is the circle.

    Elements are unit complex numbers (a tuple of them for rank >= 2),
    renormalized on construction.  The irrep labelled by n is the character
    z -> z^n, a 1x1 unitary.
    """

    def __init__(self, rank: int = 1, ring: LatticeRing | None = None):
        self.rank = rank
        self.ring = ring if ring is not None else LatticeRing(rank)
        self.name = "circle" if rank == 1 else f"torus^{rank}"

    def element(self, *coords):
        """Build an element from complex coordinates, renormalizing each."""
        if len(coords) != self.rank:
            raise InvalidInputError(f"{self.name} element needs {self.rank} coordinates")
        zs = []
        for z in coords:
            z = complex(z)
            r = abs(z)
            if r < 1e-9:
                raise InvalidInputError("torus coordinate too close to zero to normalize")
            zs.append(z / r)
        return zs[0] if self.rank == 1 else tuple(zs)

    def identity(self):
        return 1 + 0j if self.rank == 1 else (1 + 0j,) * self.rank

    def multiply(self, g, h):
        if self.rank == 1:
            return g * h
        return tuple(a * b for a, b in zip(g, h))

    def inverse(self, g):
        # unit modulus: the inverse is the conjugate, exactly
        if self.rank == 1:
            return g.conjugate()
        return tuple(z.conjugate() for z in g)

    def irrep_matrix(self, label, g):
        self.ring.check_label(label)
        if self.rank == 1:
            return np.array([[g ** label]], dtype=complex)
        value = 1 + 0j
        for z, n in zip(g, label):
            value *= z ** n
        return np.array([[value]], dtype=complex)

    def haar_sample(self, rng):
        phases = np.exp(2j * np.pi * rng.random(self.rank))
        return complex(phases[0]) if self.rank == 1 else tuple(complex(z) for z in phases)

    def distance(self, g, h):
        if self.rank == 1:
            return abs(g - h)
        return max(abs(a - b) for a, b in zip(g, h))

    def parse_element(self, literal):
        if isinstance(literal, (list, tuple)):
            if self.rank == 1:
                raise InvalidInputError(f"cannot parse element literal {literal!r}")
            coords = []
            for part in literal:
                coords.append(self._parse_circle_coord(part))
            if len(coords) != self.rank:
                raise InvalidInputError(f"{self.name} element needs {self.rank} coordinates")
            return self.element(*coords)
        if isinstance(literal, str):
            if not literal.startswith("z:"):
                raise InvalidInputError(f"cannot parse element literal {literal!r}")
            chunks = literal[2:].split(";")
            coords = [complex(*_parse_floats(c, 2, literal)) for c in chunks]
            if len(coords) != self.rank:
                raise InvalidInputError(f"{self.name} element needs {self.rank} coordinates")
            return self.element(*coords)
        raise InvalidInputError(f"cannot parse element literal {literal!r}")

    def _parse_circle_coord(self, part) -> complex:
        if isinstance(part, str) and part.startswith("z:"):
            return complex(*_parse_floats(part[2:], 2, part))
        raise InvalidInputError(f"cannot parse element literal {part!r}")

    def format_element(self, g):
        if self.rank == 1:
            return f"z:{g.real!r},{g.imag!r}"
        return "z:" + ";".join(f"{z.real!r},{z.imag!r}" for z in g)


def _sym_power(u: np.ndarray, n: int) -> np.ndarray:
    """Matrix of the n-th symmetric tensor power of a 2x2 matrix, in the
    orthonormal monomial basis x^(n-k) y^k / sqrt(binom(n,k))^{-1} of
    homogeneous degree-n polynomials.

    Column k is the expansion of (u00 x + u10 y)^(n-k) (u01 x + u11 y)^k;
    for unitary u the result is unitary and (UV)^sym = U^sym V^sym, so no
    angle convention enters anywhere.
    """
    if n == 0:
        return np.ones((1, 1), dtype=complex)
    top = np.array([u[0, 0], u[1, 0]], dtype=complex)
    bot = np.array([u[0, 1], u[1, 1]], dtype=complex)
    pow_top = [np.ones(1, dtype=complex)]
    pow_bot = [np.ones(1, dtype=complex)]
    for _ in range(n):
        pow_top.append(np.convolve(pow_top[-1], top))
        pow_bot.append(np.convolve(pow_bot[-1], bot))
    m = np.empty((n + 1, n + 1), dtype=complex)
    for k in range(n + 1):
        m[:, k] = np.convolve(pow_top[n - k], pow_bot[k])
    root_binom = np.sqrt(np.array([math.comb(n, l) for l in range(n + 1)], dtype=float))
    m *= root_binom[None, :] / root_binom[:, None]
    return m


class SU2Model(CompactGroupModel):
    """SU(2) with elements stored as unit quaternions (a, b), realizing the
    defining matrix [[a, b], [-conj(b), conj(a)]].  The irrep 2j = n acts on
    degree-n polynomials as the n-th symmetric power of the defining matrix.
    """

    name = "SU2"

    def __init__(self, ring: SU2Ring | None = None):
        self.ring = ring if ring is not None else SU2Ring()

    def element(self, a, b):
        a, b = complex(a), complex(b)
        norm = math.hypot(abs(a), abs(b))
        if norm < 1e-9:
            raise InvalidInputError("quaternion too close to zero to normalize")
        return (a / norm, b / norm)

    def from_axis_angle(self, axis, angle: float):
        """Rotation by `angle` about the 3-vector `axis` (need not be unit)."""
        x, y, z = (float(v) for v in axis)
        r = math.sqrt(x * x + y * y + z * z)
        if r < 1e-12:
            raise InvalidInputError("axis must be nonzero")
        s = math.sin(angle / 2) / r
        return (complex(math.cos(angle / 2), z * s), complex(y * s, x * s))

    def identity(self):
        return (1 + 0j, 0j)

    def multiply(self, g, h):
        a1, b1 = g
        a2, b2 = h
        return (a1 * a2 - b1 * b2.conjugate(), a1 * b2 + b1 * a2.conjugate())

    def inverse(self, g):
        a, b = g
        return (a.conjugate(), -b)

    def defining_matrix(self, g) -> np.ndarray:
        a, b = g
        return np.array([[a, b], [-b.conjugate(), a.conjugate()]], dtype=complex)

    def irrep_matrix(self, label, g):
        self.ring.check_label(label)
        return _sym_power(self.defining_matrix(g), label)

    def character_value(self, label, g):
        self.ring.check_label(label)
        if label == 0:
            return 1 + 0j
        return complex(np.trace(self.irrep_matrix(label, g)))

    def rotation_angle(self, g) -> float:
        """Angle t in [0, 2*pi] with g conjugate to diag(e^{it/2}, e^{-it/2})."""
        a, _ = g
        return 2 * math.acos(min(1.0, max(-1.0, a.real)))

    def haar_sample(self, rng):
        v = rng.normal(size=4)
        v /= np.linalg.norm(v)
        return (complex(v[0], v[1]), complex(v[2], v[3]))

    def distance(self, g, h):
        return math.hypot(abs(g[0] - h[0]), abs(g[1] - h[1]))

    def parse_element(self, literal):
        if isinstance(literal, str) and literal.startswith("q:"):
            ra, ia, rb, ib = _parse_floats(literal[2:], 4, literal)
            return self.element(complex(ra, ia), complex(rb, ib))
        raise InvalidInputError(f"cannot parse element literal {literal!r}")

    def format_element(self, g):
        a, b = g
        return f"q:{a.real!r},{a.imag!r},{b.real!r},{b.imag!r}"


class FiniteGroupModel(CompactGroupModel):
    """A finite group given by an element list, a multiplication function and
    a complete list of irreducible matrix representations.

    Elements are exposed as integer indices into the fixed element list; the
    Cayley table, inverses and the character table are precomputed, and the
    fusion ring is derived from the characters.  Haar measure is uniform.
    """

    def __init__(self, name: str, elements: list, mult, irreps: list[tuple]):
        self.name = name
        self._elements = list(elements)
        index = {e: i for i, e in enumerate(self._elements)}
        order = len(self._elements)
        self.cayley = np.empty((order, order), dtype=np.int64)
        for i, a in enumerate(self._elements):
            for j, b in enumerate(self._elements):
                self.cayley[i, j] = index[mult(a, b)]
        self._identity = next(
            i for i in range(order)
            if all(self.cayley[i, j] == j == self.cayley[j, i] for j in range(order))
        )
        self._inverse = np.empty(order, dtype=np.int64)
        for i in range(order):
            self._inverse[i] = int(np.nonzero(self.cayley[i] == self._identity)[0][0])
        self.irrep_names = tuple(nm for nm, _ in irreps)
        self._matrices = []
        for _, func in irreps:
            mats = [np.asarray(func(e), dtype=complex) for e in self._elements]
            self._matrices.append(mats)
        dims = tuple(m[0].shape[0] for m in self._matrices)
        table = np.array(
            [[np.trace(m) for m in mats] for mats in self._matrices], dtype=complex
        )
        self.ring = FiniteDualRing(f"finite:{name}", self.irrep_names, dims, table)

    @property
    def order(self) -> int:
        return len(self._elements)

    def identity(self):
        return self._identity

    def multiply(self, g, h):
        return int(self.cayley[self._check(g), self._check(h)])

    def inverse(self, g):
        return int(self._inverse[self._check(g)])

    def _check(self, g) -> int:
        if not isinstance(g, (int, np.integer)) or not 0 <= g < self.order:
            raise InvalidInputError(f"{g!r} is not an element index of {self.name}")
        return int(g)

    def elements(self) -> list[int]:
        return list(range(self.order))

    def irrep_matrix(self, label, g):
        self.ring.check_label(label)
        return self._matrices[label][self._check(g)]

    def haar_sample(self, rng):
        return int(rng.integers(self.order))

    def distance(self, g, h):
        return 0.0 if self._check(g) == self._check(h) else 1.0

    def parse_element(self, literal):
        if isinstance(literal, (int, np.integer)):
            return self._check(literal)
        if isinstance(literal, str) and literal.startswith("g:"):
            try:
                return self._check(int(literal[2:]))
            except ValueError as exc:
                raise InvalidInputError(f"cannot parse element literal {literal!r}") from exc
        raise InvalidInputError(f"cannot parse element literal {literal!r}")

    def format_element(self, g):
        return f"g:{self._check(g)}"


def _cyclic_group(n: int) -> FiniteGroupModel:
    omega = 2j * np.pi / n

    def irrep(k):
        return lambda g: [[np.exp(omega * ((k * g) % n))]]

    irreps = [(f"chi{k}", irrep(k)) for k in range(n)]
    return FiniteGroupModel(f"C{n}", list(range(n)), lambda a, b: (a + b) % n, irreps)


def _symmetric_group_3() -> FiniteGroupModel:
    elems = sorted(permutations(range(3)))  # identity (0,1,2) first

    def mult(p, q):
        return tuple(p[q[i]] for i in range(3))

    def sign(p):
        return 1 if (p[0], p[1], p[2]) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] else -1

    # standard 2-dim irrep: permutation matrices restricted to the sum-zero
    # plane, in the orthonormal basis (1,-1,0)/sqrt2, (1,1,-2)/sqrt6
    basis = np.array([[1, 1], [-1, 1], [0, -2]], dtype=float)
    basis /= np.sqrt([2, 6])

    def std(p):
        perm = np.zeros((3, 3))
        for j in range(3):
            perm[p[j], j] = 1
        return basis.T @ perm @ basis

    irreps = [
        ("trivial", lambda p: [[1]]),
        ("sign", lambda p: [[sign(p)]]),
        ("std", std),
    ]
    return FiniteGroupModel("S3", elems, mult, irreps)


def _dihedral_group_4() -> FiniteGroupModel:
    # elements (k, e) = r^k s^e with s r s = r^-1
    elems = [(k, e) for e in range(2) for k in range(4)]

    def mult(a, b):
        k1, e1 = a
        k2, e2 = b
        return ((k1 + (k2 if e1 == 0 else -k2)) % 4, (e1 + e2) % 2)

    rot = np.array([[0, -1], [1, 0]], dtype=float)
    flip = np.array([[1, 0], [0, -1]], dtype=float)

    def one_dim(sr, ss):
        return lambda a: [[sr ** a[0] * ss ** a[1]]]

    def twodim(a):
        return np.linalg.matrix_power(rot, a[0]) @ np.linalg.matrix_power(flip, a[1])

    irreps = [
        ("trivial", one_dim(1, 1)),
        ("sign_s", one_dim(1, -1)),
        ("sign_r", one_dim(-1, 1)),
        ("sign_rs", one_dim(-1, -1)),
        ("twodim", twodim),
    ]
    return FiniteGroupModel("D4", elems, mult, irreps)


def _quaternion_group_8() -> FiniteGroupModel:
    # unit quaternions as integer quadruples (w, x, y, z)
    elems = []
    for axis in range(4):
        for s in (1, -1):
            q = [0, 0, 0, 0]
            q[axis] = s
            elems.append(tuple(q))

    def mult(p, q):
        w1, x1, y1, z1 = p
        w2, x2, y2, z2 = q
        return (
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
            w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
            w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
        )

    def one_dim(si, sj, sk):
        signs = (1, si, sj, sk)
        return lambda q: [[signs[next(i for i in range(4) if q[i] != 0)]]]

    pauli = [
        np.eye(2, dtype=complex),
        np.array([[1j, 0], [0, -1j]]),
        np.array([[0, 1], [-1, 0]], dtype=complex),
        np.array([[0, 1j], [1j, 0]]),
    ]

    def twodim(q):
        return sum(c * m for c, m in zip(q, pauli))

    irreps = [
        ("trivial", one_dim(1, 1, 1)),
        ("chi_i", one_dim(1, -1, -1)),
        ("chi_j", one_dim(-1, 1, -1)),
        ("chi_k", one_dim(-1, -1, 1)),
        ("twodim", twodim),
    ]
    return FiniteGroupModel("Q8", elems, mult, irreps)


_FINITE_NAMES = tuple(f"C{n}" for n in range(2, 13)) + ("S3", "D4", "Q8")


@lru_cache(maxsize=None)
def finite_group_model(name: str) -> FiniteGroupModel:
    if name == "S3":
        return _symmetric_group_3()
    if name == "D4":
        return _dihedral_group_4()
    if name == "Q8":
        return _quaternion_group_8()
    if name.startswith("C"):
        try:
            n = int(name[1:])
        except ValueError:
            n = 0
        if 2 <= n <= 12:
            return _cyclic_group(n)
    raise InvalidInputError(f"unknown finite group {name!r}; known: {_FINITE_NAMES}")


@lru_cache(maxsize=None)
def _cached_model(kind: str, rank: int):
    if kind == "torus":
        # ring carries the canonical CLI identifier for JSON round-trips
        name = "Z" if rank == 1 else f"Z^d:{rank}"
        return TorusModel(rank, ring=LatticeRing(rank, name=name))
    if kind == "su2":
        return SU2Model()
    raise AssertionError(kind)


@lru_cache(maxsize=None)
def _dual_group_ring(rank: int) -> LatticeRing:
    return LatticeRing(rank, name=f"dualgroup:Z^d:{rank}")


def resolve(ring_id: str) -> tuple[FusionRing, CompactGroupModel | None]:
    """Resolve a ring identifier to (ring, model).

    Identifiers: "Z", "Z^d:<d>", "SU2", "finite:<name>", "dualgroup:Z^d:<d>".
    The dual-group rings have no model attached: they present the group
    algebra of the discrete group, whose function "space" is noncommutative,
    so only fusion combinatorics and operator averages apply.
    """
    if not isinstance(ring_id, str):
        raise InvalidInputError(f"ring id must be a string, got {ring_id!r}")
    if ring_id == "Z":
        model = _cached_model("torus", 1)
        return model.ring, model
    if ring_id == "SU2":
        model = _cached_model("su2", 0)
        return model.ring, model
    if ring_id.startswith("Z^d:"):
        rank = _parse_rank(ring_id[4:], ring_id)
        model = _cached_model("torus", rank)
        return model.ring, model
    if ring_id.startswith("dualgroup:Z^d:"):
        return _dual_group_ring(_parse_rank(ring_id[14:], ring_id)), None
    if ring_id.startswith("finite:"):
        model = finite_group_model(ring_id[7:])
        return model.ring, model
    raise InvalidInputError(
        f"unknown ring id {ring_id!r}; expected Z, Z^d:<d>, SU2, finite:<name> "
        f"or dualgroup:Z^d:<d>"
    )


def _parse_rank(text: str, ring_id: str) -> int:
    try:
        rank = int(text)
    except ValueError as exc:
        raise InvalidInputError(f"bad rank in ring id {ring_id!r}") from exc
    if rank < 1:
        raise InvalidInputError(f"bad rank in ring id {ring_id!r}")
    return rank


def get_ring(ring_id: str) -> FusionRing:
    return resolve(ring_id)[0]


def get_model(ring_id: str) -> CompactGroupModel:
    ring, model = resolve(ring_id)
    if model is None:
        raise InvalidInputError(f"ring {ring_id!r} has no compact-group model attached")
    return model
