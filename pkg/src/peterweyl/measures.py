"""Finite Borel measures stored as atoms plus a Peter-Weyl density.

A measure is a finite list of weighted point masses together with a finitely
supported coefficient family D(a), representing the density
``f(g) = sum_a dim(a) * trace(D(a) @ U^a(g)^H)`` against Haar.  With that
normalization the Fourier coefficient matrix of the density part at a is
D(a) itself, so every coefficient of the measure is exact up to element
evaluation roundoff:

    fourier_matrix(mu, a) = sum_i w_i U^a(x_i) + D(a).

Convolution and conjugation act coefficientwise (product and adjoint).
"""

from __future__ import annotations

import warnings

import numpy as np

from .errors import ConsistencyError, InvalidInputError
from .groups import CompactGroupModel, resolve

# atoms closer than this are rejected as duplicates at construction time
ATOM_DISTINCT_TOL = 1e-12
# products of atoms closer than this merge into one atom (quaternion roundoff)
ATOM_MERGE_TOL = 1e-9


class MeasureSpec:
    """Atoms + density coefficients on a compact group model.

    Atom weights must be strictly positive reals and atom locations pairwise
    distinct; density matrices may be arbitrary complex (signed and complex
    densities arise from intermediate arithmetic; the published statements
    concern positive measures).  Instances are immutable.
    """

    def __init__(self, model: CompactGroupModel, atoms=(), density=None, meta=None):
        self.model = model
        ring = model.ring
        checked = []
        for g, w in atoms:
            w = float(w)
            if not w > 0:
                raise InvalidInputError(f"atom weight {w} must be strictly positive")
            checked.append((g, w))
        for i in range(len(checked)):
            for j in range(i + 1, len(checked)):
                if model.distance(checked[i][0], checked[j][0]) <= ATOM_DISTINCT_TOL:
                    raise InvalidInputError("atoms must be pairwise distinct")
        self.atoms = tuple(checked)
        dens = {}
        for label, mat in (density or {}).items():
            ring.check_label(label)
            d = ring.dim(label)
            arr = np.array(mat, dtype=complex)
            if arr.shape != (d, d):
                raise InvalidInputError(
                    f"density matrix for {label!r} must be {d}x{d}, got {arr.shape}"
                )
            arr.setflags(write=False)
            dens[label] = arr
        self.density = dens
        self.meta = dict(meta or {})
        triv = ring.trivial
        if triv in dens and abs(dens[triv][0, 0].imag) > 1e-8:
            raise ConsistencyError("trivial density entry must be real")

    def density_support(self) -> list:
        return self.model.ring.sorted_labels(self.density)

    def density_minimum(self, rng: np.random.Generator, samples: int = 10_000) -> float:
        """Sampled minimum of the density over Haar; a value below -1e-8
        warns (the density part is then not certified positive).
        """
        lo = min(density_eval(self, self.model.haar_sample(rng)) for _ in range(samples))
        if lo < -1e-8:
            warnings.warn(
                f"density of measure on {self.model.name} dips to {lo:.3e} in sampling",
                stacklevel=2,
            )
        return lo

    def __repr__(self):
        return (
            f"MeasureSpec({self.model.name}, {len(self.atoms)} atoms, "
            f"density on {len(self.density)} labels)"
        )


def dirac(model: CompactGroupModel, g, weight: float = 1.0) -> MeasureSpec:
    """The point mass weight * delta_g."""
    return MeasureSpec(model, atoms=[(g, weight)])


def haar(model: CompactGroupModel, mass: float = 1.0) -> MeasureSpec:
    """Haar measure scaled to the given total mass (density f = mass)."""
    return MeasureSpec(model, density={model.ring.trivial: [[mass]]})


def _atom_part(model: CompactGroupModel, atoms, label) -> np.ndarray:
    d = model.ring.dim(label)
    out = np.zeros((d, d), dtype=complex)
    for g, w in atoms:
        out += w * model.irrep_matrix(label, g)
    return out


def fourier_matrix(mu: MeasureSpec, label) -> np.ndarray:
    """mu(u^a_ij) as a dim(a) x dim(a) matrix: atom sum plus D(a)."""
    mu.model.ring.check_label(label)
    out = _atom_part(mu.model, mu.atoms, label)
    if label in mu.density:
        out = out + mu.density[label]
    return out


def total_mass(mu: MeasureSpec) -> float:
    value = fourier_matrix(mu, mu.model.ring.trivial)[0, 0]
    if abs(value.imag) > 1e-8:
        raise ConsistencyError(f"total mass {value} has imaginary residue")
    return value.real


def atom_list(mu: MeasureSpec) -> tuple:
    """Ground-truth atoms; consumed by oracles only, never by averaging."""
    return mu.atoms


def atom_weight_at(mu: MeasureSpec, y, tol: float = ATOM_MERGE_TOL) -> float:
    """Oracle weight mu{y} from the stored atoms."""
    return sum(w for g, w in mu.atoms if mu.model.distance(g, y) <= tol)


def density_eval(mu: MeasureSpec, g) -> float:
    """Value of the density part at g via Peter-Weyl inversion of D."""
    value = 0j
    for label in mu.density_support():
        coeff = mu.density[label]
        u = mu.model.irrep_matrix(label, g)
        value += mu.model.ring.dim(label) * np.trace(coeff @ u.conj().T)
    if abs(value.imag) > 1e-8:
        raise ConsistencyError(f"density value {value} has imaginary residue")
    return value.real


def _merge_atoms(model: CompactGroupModel, pairs) -> list:
    merged: list[list] = []
    for g, w in pairs:
        for slot in merged:
            if model.distance(slot[0], g) <= ATOM_MERGE_TOL:
                slot[1] += w
                break
        else:
            merged.append([g, w])
    return [(g, w) for g, w in merged]


def convolve(mu: MeasureSpec, nu: MeasureSpec, support=None) -> MeasureSpec:
    """Convolution, exact in coefficients: fourier(conv, a) = fourier(mu, a) @ fourier(nu, a).

    Atom products merge when closer than ATOM_MERGE_TOL; the mixed and
    density-density parts are materialized in coefficient form on the union
    of both density supports (off that union both densities vanish, so the
    atomic part alone is already the exact coefficient).  An extra working
    `support` may be supplied; it is unioned in.
    """
    if mu.model is not nu.model:
        raise InvalidInputError("convolution requires measures on the same model")
    model = mu.model
    ring = model.ring
    products = [
        (model.multiply(x, y), wx * wy) for x, wx in mu.atoms for y, wy in nu.atoms
    ]
    atoms = _merge_atoms(model, products)
    labels = set(mu.density) | set(nu.density)
    if support is not None:
        labels |= {ring.check_label(a) for a in support}
    density = {}
    for label in ring.sorted_labels(labels):
        target = fourier_matrix(mu, label) @ fourier_matrix(nu, label)
        density[label] = target - _atom_part(model, atoms, label)
    return MeasureSpec(
        model,
        atoms=atoms,
        density=density,
        meta={"exact_support_bound": ring.sorted_labels(labels)},
    )


def conjugate_measure(mu: MeasureSpec) -> MeasureSpec:
    """Pushforward under inversion: atoms move to inverses, every coefficient
    matrix becomes its adjoint (for positive measures this is the classical
    conjugate measure)."""
    atoms = [(mu.model.inverse(g), w) for g, w in mu.atoms]
    density = {label: mat.conj().T for label, mat in mu.density.items()}
    return MeasureSpec(mu.model, atoms=atoms, density=density, meta=dict(mu.meta))


def scalar_from_json(entry) -> complex:
    if isinstance(entry, (int, float)):
        return complex(entry)
    if isinstance(entry, (list, tuple)) and len(entry) == 2:
        return complex(float(entry[0]), float(entry[1]))
    raise InvalidInputError(f"matrix entry {entry!r} must be a number or [re, im]")


def scalar_to_json(z: complex):
    return [z.real, z.imag]


def measure_from_json(obj: dict) -> MeasureSpec:
    """Parse the measure-spec JSON schema:

    {"group": <ring id>,
     "atoms": [{"element": <literal>, "weight": <float>}, ...],
     "density": [{"irrep": <label literal>, "matrix": [[entry, ...], ...]}, ...]}
    """
    if not isinstance(obj, dict):
        raise InvalidInputError("measure spec must be a JSON object")
    if "group" not in obj:
        raise InvalidInputError("measure spec is missing the 'group' field")
    ring, model = resolve(obj["group"])
    if model is None:
        raise InvalidInputError(
            f"ring {obj['group']!r} has no point model; measures need a compact group"
        )
    atoms = []
    for k, entry in enumerate(obj.get("atoms", [])):
        try:
            atoms.append((model.parse_element(entry["element"]), float(entry["weight"])))
        except (KeyError, TypeError) as exc:
            raise InvalidInputError(f"atoms[{k}] needs 'element' and 'weight' fields") from exc
    density = {}
    for k, entry in enumerate(obj.get("density", [])):
        try:
            label = ring.parse_label(entry["irrep"])
            rows = entry["matrix"]
        except (KeyError, TypeError) as exc:
            raise InvalidInputError(f"density[{k}] needs 'irrep' and 'matrix' fields") from exc
        if label in density:
            raise InvalidInputError(f"density[{k}] repeats irrep {entry['irrep']!r}")
        density[label] = [[scalar_from_json(e) for e in row] for row in rows]
    return MeasureSpec(model, atoms=atoms, density=density)


def measure_to_json(mu: MeasureSpec) -> dict:
    """Canonical JSON form: atoms in stored order, density in ring order."""
    ring = mu.model.ring
    return {
        "group": ring.name,
        "atoms": [
            {"element": mu.model.format_element(g), "weight": w} for g, w in mu.atoms
        ],
        "density": [
            {
                "irrep": ring.format_label(label),
                "matrix": [[scalar_to_json(z) for z in row] for row in mu.density[label]],
            }
            for label in mu.density_support()
        ],
    }
