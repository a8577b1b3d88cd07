"""Exact representations of the antiderivative potential u on [0, pi].

The operator studied here is -y'' + q(x) y with q = u' understood
distributionally, so the user supplies u itself, not q.  The additive
constant of u matters: shifting u by a constant turns the regularized
Neumann condition at pi into a Robin condition, which is why the loader
insists on an explicit u rather than reconstructing it from q.

Three closed-form families are supported, all complex-valued and all
integrable in closed form against oscillatory kernels:

* ``step``  -- piecewise constants (delta interactions in q),
* ``poly``  -- piecewise polynomials in the global coordinate,
* ``trig``  -- piecewise finite Fourier blocks c0 + sum_k (a_k cos kt + b_k sin kt).

Values at breakpoints follow the right-continuity convention; a value at a
single point never affects an integral, the convention only keeps eval_u
deterministic.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from . import moments
from .errors import DomainError, PotentialFormatError

PI = math.pi

_BREAK_TOL = 1e-9

# trig pieces store ((k, cos_coeff, sin_coeff), ...) with integer k >= 0;
# k = 0 carries only the cos (constant) coefficient.


@dataclass(frozen=True)
class PotentialSpec:
    """Exact description of u as an ordered partition of [0, pi].

    kind
        One of ``step``, ``poly``, ``trig``.
    breaks
        Strictly increasing breakpoints, first 0 and last pi.
    coeffs
        Per-piece coefficients.  For ``step`` a 1-tuple (height,); for
        ``poly`` ascending global-coordinate coefficients; for ``trig``
        a tuple of (k, cos_coeff, sin_coeff) triples.
    """

    kind: str
    breaks: tuple
    coeffs: tuple

    def __post_init__(self):
        if self.kind not in ("step", "poly", "trig"):
            raise PotentialFormatError(f"unknown potential kind {self.kind!r}")
        if len(self.breaks) < 2 or len(self.coeffs) != len(self.breaks) - 1:
            raise PotentialFormatError("pieces and breakpoints do not match")
        if abs(self.breaks[0]) > _BREAK_TOL or abs(self.breaks[-1] - PI) > _BREAK_TOL:
            raise PotentialFormatError(
                f"pieces must partition [0, pi]; got endpoints "
                f"{self.breaks[0]} and {self.breaks[-1]}")
        for a, b in zip(self.breaks, self.breaks[1:]):
            if not b > a:
                raise PotentialFormatError(
                    f"breakpoints must increase strictly; offending breakpoint {b}")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero():
        return PotentialSpec("step", (0.0, PI), ((0j,),))

    @staticmethod
    def constant(value):
        return PotentialSpec("step", (0.0, PI), ((complex(value),),))

    @staticmethod
    def step(pieces):
        """pieces: iterable of (a, b, height) covering [0, pi] in order."""
        breaks, heights = _assemble(pieces)
        return PotentialSpec("step", breaks, tuple((complex(h),) for h in heights))

    @staticmethod
    def poly(pieces):
        """pieces: iterable of (a, b, coeffs) with ascending global coeffs."""
        breaks, clists = _assemble(pieces)
        return PotentialSpec(
            "poly", breaks, tuple(tuple(complex(c) for c in cl) for cl in clists))

    @staticmethod
    def trig(pieces):
        """pieces: iterable of (a, b, sin_coeffs); sin_coeffs[k-1] scales sin(kt)."""
        breaks, clists = _assemble(pieces)
        coeffs = tuple(
            tuple((k + 1, 0j, complex(c)) for k, c in enumerate(cl))
            for cl in clists)
        return PotentialSpec("trig", breaks, coeffs)

    # -- evaluation --------------------------------------------------------

    @cached_property
    def piecewise(self) -> moments.PiecewiseExp:
        """The potential as a polynomial-exponential object."""
        if self.kind == "step":
            pieces = tuple(((0j, (c[0],)),) for c in self.coeffs)
            return moments.PiecewiseExp(self.breaks, pieces)
        if self.kind == "poly":
            return moments.poly_global(self.coeffs, self.breaks)
        pieces = []
        for i, triples in enumerate(self.coeffs):
            a = self.breaks[i]
            atoms = []
            for k, ac, bc in triples:
                if k == 0:
                    atoms.append((0j, (complex(ac),)))
                    continue
                up = np.exp(1j * k * a)
                dn = np.exp(-1j * k * a)
                # a cos(kt) + b sin(kt) in the piece-local coordinate
                atoms.append((complex(k), ((ac / 2 - 1j * bc / 2) * up,)))
                atoms.append((complex(-k), ((ac / 2 + 1j * bc / 2) * dn,)))
            pieces.append(moments._merge_atoms(atoms))
        return moments.PiecewiseExp(self.breaks, tuple(pieces))

    def eval_u(self, x):
        """u(x) for x in [0, pi], right-continuous at breakpoints."""
        arr = np.asarray(x, dtype=float)
        if np.any(arr < -1e-12) or np.any(arr > PI + 1e-12):
            raise DomainError(f"coordinate {x} outside [0, pi]")
        return self.piecewise.eval(x)

    # -- algebra (closed within the representation) -------------------------

    def conjugate(self) -> "PotentialSpec":
        return PotentialSpec(self.kind, self.breaks, _map_coeffs(self, np.conj))

    def real_part(self) -> "PotentialSpec":
        return PotentialSpec(self.kind, self.breaks,
                             _map_coeffs(self, lambda c: complex(c.real)))

    def imag_part(self) -> "PotentialSpec":
        return PotentialSpec(self.kind, self.breaks,
                             _map_coeffs(self, lambda c: complex(c.imag)))

    def square(self) -> "PotentialSpec":
        """u^2, re-expanded inside the same piece family."""
        if self.kind == "step":
            return PotentialSpec("step", self.breaks,
                                 tuple((c[0] * c[0],) for c in self.coeffs))
        if self.kind == "poly":
            return PotentialSpec("poly", self.breaks,
                                 tuple(moments._polymul(c, c) for c in self.coeffs))
        out = []
        for triples in self.coeffs:
            acc: dict[int, list] = {}

            def add(k, ac, bc):
                ent = acc.setdefault(k, [0j, 0j])
                ent[0] += ac
                ent[1] += bc

            for k1, a1, b1 in triples:
                for k2, a2, b2 in triples:
                    # (a1 cos k1t + b1 sin k1t)(a2 cos k2t + b2 sin k2t)
                    ks, kd = k1 + k2, k1 - k2
                    sgn = 0.0 if kd == 0 else math.copysign(1.0, kd)
                    add(ks, (a1 * a2 - b1 * b2) / 2, (b1 * a2 + a1 * b2) / 2)
                    add(abs(kd), (a1 * a2 + b1 * b2) / 2,
                        sgn * (b1 * a2 - a1 * b2) / 2)
            cleaned = tuple(
                (k, acc[k][0], acc[k][1]) for k in sorted(acc)
                if acc[k][0] != 0 or acc[k][1] != 0)
            out.append(cleaned if cleaned else ((0, 0j, 0j),))
        return PotentialSpec("trig", self.breaks, tuple(out))

    # -- derived quantities --------------------------------------------------

    @cached_property
    def l2_norm_sq(self) -> float:
        """The squared L2 norm of u over [0, pi], integral of |u|^2."""
        val = (self.piecewise * self.piecewise.conj()).integral()
        return float(val.real)

    @property
    def is_real(self) -> bool:
        return all(
            abs(complex(c).imag) == 0.0
            for piece in self.coeffs for c in _flatten(self.kind, piece))

    @property
    def is_zero(self) -> bool:
        return all(
            complex(c) == 0
            for piece in self.coeffs for c in _flatten(self.kind, piece))

    def describe(self) -> str:
        return f"{self.kind} potential, {len(self.coeffs)} piece(s) on [0, pi]"


def _flatten(kind, piece):
    if kind == "trig":
        for _, ac, bc in piece:
            yield ac
            yield bc
    else:
        yield from piece


def _map_coeffs(spec, fn):
    if spec.kind == "trig":
        return tuple(
            tuple((k, complex(fn(complex(ac))), complex(fn(complex(bc))))
                  for k, ac, bc in piece)
            for piece in spec.coeffs)
    return tuple(
        tuple(complex(fn(complex(c))) for c in piece) for piece in spec.coeffs)


def _assemble(pieces):
    pieces = list(pieces)
    if not pieces:
        raise PotentialFormatError("potential needs at least one piece")
    breaks = [float(pieces[0][0])]
    payload = []
    for a, b, data in pieces:
        a, b = float(a), float(b)
        if abs(a - breaks[-1]) > _BREAK_TOL:
            kindw = "gap" if a > breaks[-1] else "overlap"
            raise PotentialFormatError(
                f"pieces leave a {kindw} at breakpoint {breaks[-1]!r} "
                f"(next piece starts at {a!r})")
        if not b > a:
            raise PotentialFormatError(
                f"piece [{a}, {b}] is empty; offending breakpoint {b!r}")
        breaks.append(b)
        payload.append(data)
    return tuple(breaks), payload


# -- oscillatory moments ----------------------------------------------------

def trig_moment(spec: PotentialSpec, omega, a, b, weight: str) -> complex:
    """Exact integral of u(t) * trig(2*omega*t) over [a, b] in [0, pi].

    weight selects ``sin`` or ``cos``.  Closed-form antiderivatives are used
    piece by piece; frequencies small enough to cancel catastrophically are
    integrated by a truncated power series instead.
    """
    a, b = float(a), float(b)
    if a < -1e-12 or b > PI + 1e-12 or b < a:
        raise DomainError(f"moment interval [{a}, {b}] outside [0, pi]")
    if weight == "sin":
        kern = moments.sin_kernel(2 * omega, spec.breaks)
    elif weight == "cos":
        kern = moments.cos_kernel(2 * omega, spec.breaks)
    else:
        raise ValueError(f"weight must be 'sin' or 'cos', got {weight!r}")
    return (spec.piecewise * kern).integral(a, b)


# -- JSON loader --------------------------------------------------------------

def load_potential(source) -> PotentialSpec:
    """Build a PotentialSpec from a JSON file path, JSON text, or a dict.

    Schema::

        { "kind": "step" | "poly" | "trig",
          "pieces": [ { "from": float, "to": float,
                        "coeffs_re": [...], "coeffs_im": [...] } ] }

    ``coeffs_im`` is optional and defaults to zeros.  For ``trig`` pieces
    coefficient k scales sin((k+1) t).  The pieces must partition [0, pi];
    violations raise PotentialFormatError naming the offending breakpoint.
    """
    if isinstance(source, dict):
        doc = source
    else:
        text = Path(source).read_text() if Path(str(source)).exists() else str(source)
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise PotentialFormatError(f"potential file is not valid JSON: {exc}")
    if not isinstance(doc, dict) or "kind" not in doc or "pieces" not in doc:
        raise PotentialFormatError("potential document needs 'kind' and 'pieces'")
    kind = doc["kind"]
    if kind not in ("step", "poly", "trig"):
        raise PotentialFormatError(f"unknown potential kind {kind!r}")
    rows = doc["pieces"]
    if not isinstance(rows, list) or not rows:
        raise PotentialFormatError("'pieces' must be a non-empty list")
    assembled = []
    for row in rows:
        try:
            a, b = float(row["from"]), float(row["to"])
            re = [float(v) for v in row["coeffs_re"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise PotentialFormatError(f"malformed piece {row!r}: {exc}")
        im = [float(v) for v in row.get("coeffs_im", [0.0] * len(re))]
        if len(im) != len(re):
            raise PotentialFormatError(
                f"coeffs_re and coeffs_im lengths differ in piece starting at {a!r}")
        if not re:
            raise PotentialFormatError(f"piece starting at {a!r} has no coefficients")
        coeffs = [complex(r, i) for r, i in zip(re, im)]
        if not all(math.isfinite(abs(c)) for c in coeffs):
            raise PotentialFormatError(f"non-finite coefficient in piece at {a!r}")
        assembled.append((a, b, coeffs))
    if kind == "step":
        for a, b, coeffs in assembled:
            if len(coeffs) != 1:
                raise PotentialFormatError(
                    f"step piece starting at {a!r} must have exactly one coefficient")
        return PotentialSpec.step([(a, b, c[0]) for a, b, c in assembled])
    if kind == "poly":
        return PotentialSpec.poly(assembled)
    return PotentialSpec.trig(assembled)
