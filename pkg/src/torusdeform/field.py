"""Doubly periodic scalar fields given as trigonometric polynomials.

A field is a finite sum of terms ``a * cos(2*pi*(p*x + q*y) + phase)``
with integer frequencies, evaluated on the unit square with opposite
sides identified.  The module finds and classifies nondegenerate critical
points and detects the finite group of rational translations preserving
the field.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .errors import DegenerateField, NotMorse, ToleranceAmbiguity
from .algebra import smith_basis, smith_pair, subgroup_elements

TWO_PI = 2.0 * math.pi

KIND_MIN = "minimum"
KIND_SADDLE = "saddle"
KIND_MAX = "maximum"


@dataclass(frozen=True)
class TorusPoint:
    """A point on the torus, coordinates reduced into [0, 1)."""

    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", self.x % 1.0)
        object.__setattr__(self, "y", self.y % 1.0)

    def translated(self, dx, dy) -> "TorusPoint":
        return TorusPoint(self.x + float(dx), self.y + float(dy))

    def dist(self, other: "TorusPoint") -> float:
        dx = abs(self.x - other.x)
        dy = abs(self.y - other.y)
        dx = min(dx, 1.0 - dx)
        dy = min(dy, 1.0 - dy)
        return math.hypot(dx, dy)


@dataclass(frozen=True)
class TrigTerm:
    a: float
    p: int
    q: int
    phase: float = 0.0


@dataclass(frozen=True)
class TrigFieldSpec:
    terms: tuple

    def __post_init__(self):
        for t in self.terms:
            if not isinstance(t, TrigTerm):
                raise TypeError("terms must be TrigTerm instances")

    @property
    def max_frequency(self) -> int:
        out = 0
        for t in self.terms:
            out = max(out, abs(t.p), abs(t.q))
        return max(out, 1)

    @property
    def amplitude_scale(self) -> float:
        return max(sum(abs(t.a) for t in self.terms), 1e-300)

    def is_constant(self) -> bool:
        return all(t.a == 0 or (t.p == 0 and t.q == 0) for t in self.terms)


@dataclass(frozen=True)
class CriticalPoint:
    point: TorusPoint
    value: float
    kind: str
    hessian_det: float


@dataclass(frozen=True)
class TranslationSubgroup:
    """Finite subgroup of rational translations preserving a field."""

    elements: tuple          # sorted Fraction pairs, identity included
    generators: tuple        # (g1, g2) adapted to the invariant factors
    order: int
    smith_pair: tuple        # (n, m): the group is Z_n x Z_{n*m}


# ---------------------------------------------------------------------------
# evaluation


def evaluate(spec: TrigFieldSpec, x, y):
    """Field value at (x, y); accepts scalars or numpy arrays."""
    out = 0.0
    for t in spec.terms:
        out = out + t.a * np.cos(TWO_PI * (t.p * x + t.q * y) + t.phase)
    return out


def gradient(spec: TrigFieldSpec, x, y):
    gx = 0.0
    gy = 0.0
    for t in spec.terms:
        s = np.sin(TWO_PI * (t.p * x + t.q * y) + t.phase)
        gx = gx - t.a * TWO_PI * t.p * s
        gy = gy - t.a * TWO_PI * t.q * s
    return gx, gy


def hessian(spec: TrigFieldSpec, x, y):
    hxx = 0.0
    hxy = 0.0
    hyy = 0.0
    for t in spec.terms:
        c = np.cos(TWO_PI * (t.p * x + t.q * y) + t.phase)
        w = -t.a * TWO_PI * TWO_PI * c
        hxx = hxx + w * t.p * t.p
        hxy = hxy + w * t.p * t.q
        hyy = hyy + w * t.q * t.q
    return hxx, hxy, hyy


def evaluate_grid(spec: TrigFieldSpec, resolution: int) -> np.ndarray:
    """Values on the node grid, F[i, j] = f(i/res, j/res)."""
    xs = np.arange(resolution) / resolution
    x, y = np.meshgrid(xs, xs, indexing="ij")
    return evaluate(spec, x, y)


# ---------------------------------------------------------------------------
# critical points


def find_critical_points(spec: TrigFieldSpec, grid: int = 128,
                         tol: float = 1e-9) -> list:
    """Locate and classify the critical points of the field.

    Candidate cells are those where both gradient components change sign
    (or vanish) among the cell corners; each candidate is polished by
    Newton iteration on the gradient to residual below ``tol``.  Raises
    NotMorse when a critical point is degenerate, when critical points
    are not isolated at the grid scale, or when the signed count of
    minima, saddles and maxima is nonzero.
    """
    if spec.is_constant():
        raise DegenerateField("field has no term with a nonzero frequency")

    xs = np.arange(grid) / grid
    x, y = np.meshgrid(xs, xs, indexing="ij")
    gx, gy = gradient(spec, x, y)

    band = 1e-10 * TWO_PI * spec.max_frequency * spec.amplitude_scale

    def straddles(a):
        corners = [a, np.roll(a, -1, 0), np.roll(a, -1, 1),
                   np.roll(np.roll(a, -1, 0), -1, 1)]
        lo = np.minimum.reduce(corners)
        hi = np.maximum.reduce(corners)
        return (lo <= band) & (hi >= -band)

    seeds = np.argwhere(straddles(gx) & straddles(gy))

    refined = []
    h_floor = 1e-13 * (TWO_PI * spec.max_frequency) ** 2 * spec.amplitude_scale
    for i, j in seeds:
        px = (i + 0.5) / grid
        py = (j + 0.5) / grid
        ok = False
        for _ in range(60):
            vx, vy = gradient(spec, px, py)
            if max(abs(vx), abs(vy)) < tol:
                ok = True
                break
            hxx, hxy, hyy = hessian(spec, px, py)
            det = hxx * hyy - hxy * hxy
            if abs(det) > h_floor:
                dx = (-vx * hyy + vy * hxy) / det
                dy = (-vy * hxx + vx * hxy) / det
            else:
                # singular Hessian: fall back to a least-squares step
                sol, *_ = np.linalg.lstsq(
                    np.array([[hxx, hxy], [hxy, hyy]]),
                    np.array([-vx, -vy]), rcond=None)
                dx, dy = sol
            step = math.hypot(dx, dy)
            if step > 0.5:
                dx *= 0.5 / step
                dy *= 0.5 / step
            px += dx
            py += dy
        if ok:
            refined.append(TorusPoint(px, py))

    # collapse duplicates from neighboring seeds
    points = []
    for p in sorted(refined, key=lambda t: (t.x, t.y)):
        if all(p.dist(q) > 1e-6 for q in points):
            points.append(p)

    # isolation check at the grid scale
    vtol = max(10 * tol, 1e-8 * spec.amplitude_scale)
    for a in range(len(points)):
        for b in range(a + 1, len(points)):
            if points[a].dist(points[b]) < 1.0 / grid:
                va = float(evaluate(spec, points[a].x, points[a].y))
                vb = float(evaluate(spec, points[b].x, points[b].y))
                if abs(va - vb) <= vtol:
                    raise NotMorse(
                        "critical points are not isolated at the grid scale")

    out = []
    for p in points:
        hxx, hxy, hyy = hessian(spec, p.x, p.y)
        det = float(hxx * hyy - hxy * hxy)
        if abs(det) < tol:
            raise NotMorse(
                f"degenerate critical point at ({p.x:.6f}, {p.y:.6f})")
        if det < 0:
            kind = KIND_SADDLE
        elif hxx > 0:
            kind = KIND_MIN
        else:
            kind = KIND_MAX
        out.append(CriticalPoint(
            point=p, value=float(evaluate(spec, p.x, p.y)),
            kind=kind, hessian_det=det))

    n_min = sum(1 for c in out if c.kind == KIND_MIN)
    n_sad = sum(1 for c in out if c.kind == KIND_SADDLE)
    n_max = sum(1 for c in out if c.kind == KIND_MAX)
    if n_min - n_sad + n_max != 0 or n_min == 0 or n_max == 0:
        raise NotMorse(
            f"critical point census ({n_min} minima, {n_sad} saddles, "
            f"{n_max} maxima) is inconsistent with a torus Morse function")

    out.sort(key=lambda c: (c.value, c.point.x, c.point.y))
    return out


# ---------------------------------------------------------------------------
# translation symmetries


def translation_deviation(spec: TrigFieldSpec, dx: Fraction, dy: Fraction,
                          samples: int) -> float:
    """Max |f(x+dx, y+dy) - f(x, y)| over a samples x samples grid."""
    xs = np.arange(samples) / samples
    x, y = np.meshgrid(xs, xs, indexing="ij")
    base = evaluate(spec, x, y)
    moved = evaluate(spec, x + float(dx), y + float(dy))
    return float(np.max(np.abs(moved - base)))


def detect_translation_symmetries(spec: TrigFieldSpec, tol: float = 1e-9,
                                  max_order: int = 12) -> TranslationSubgroup:
    """Find all rational translations of order <= max_order preserving the
    field, and normalize the group they span.

    Raises ToleranceAmbiguity when a candidate's deviation falls between
    tol and 2*tol: too large to accept, too small to reject.
    """
    if spec.is_constant():
        raise DegenerateField("field has no term with a nonzero frequency")
    samples = max(64, 4 * spec.max_frequency + 1)
    candidates = set()
    for d in range(1, max_order + 1):
        for a in range(d):
            for b in range(d):
                candidates.add((Fraction(a, d), Fraction(b, d)))
    accepted = []
    for dx, dy in sorted(candidates):
        dev = translation_deviation(spec, dx, dy, samples)
        if dev < tol:
            accepted.append((dx, dy))
        elif dev <= 2 * tol:
            raise ToleranceAmbiguity(
                f"translation ({dx}, {dy}) has deviation {dev:.3e}, "
                f"between tol and 2*tol")
    elems = tuple(subgroup_elements(accepted))
    pair = smith_pair(accepted)
    basis = smith_basis(accepted)
    return TranslationSubgroup(
        elements=elems,
        generators=basis,
        order=len(elems),
        smith_pair=pair,
    )


# ---------------------------------------------------------------------------
# field files


def spec_from_dict(data: dict) -> TrigFieldSpec:
    terms = data.get("terms")
    if not isinstance(terms, list) or not terms:
        raise ValueError("field file needs a nonempty 'terms' list")
    out = []
    for i, t in enumerate(terms):
        if not isinstance(t, dict):
            raise ValueError(f"term {i} is not a table")
        try:
            a = float(t["a"])
            p = int(t["p"])
            q = int(t["q"])
            if p != t["p"] or q != t["q"]:
                raise ValueError("frequencies must be whole numbers")
        except (KeyError, TypeError, ValueError) as e:
            raise ValueError(f"term {i} needs numeric 'a' and integer "
                             f"'p', 'q': {e}") from e
        phase = float(t.get("phase", 0.0))
        out.append(TrigTerm(a=a, p=p, q=q, phase=phase))
    return TrigFieldSpec(terms=tuple(out))


def load_field(path: str) -> TrigFieldSpec:
    """Read a field description from a TOML or JSON file."""
    with open(path, "rb") as fh:
        raw = fh.read()
    text = raw.decode("utf-8")
    stripped = text.lstrip()
    if stripped.startswith("{"):
        data = json.loads(text)
    else:
        try:
            import tomllib
        except ImportError:
            import tomli as tomllib
        data = tomllib.loads(text)
    return spec_from_dict(data)
