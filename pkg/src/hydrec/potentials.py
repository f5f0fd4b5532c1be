"""Potential models V(x, t) with exact spatial derivatives of any order.

Every built-in model is polynomial in x (with possibly time-dependent
coefficients), so the derivative ladder required by the moment recursion is
exact and terminates: derivatives beyond the polynomial degree are
identically zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "PotentialModel",
    "free_potential",
    "harmonic_potential",
    "quartic_potential",
    "polynomial_potential",
    "paul_trap_potential",
    "potential_value",
    "potential_derivative",
    "model_to_dict",
    "model_from_dict",
]

KINDS = ("free", "harmonic", "quartic", "polynomial", "paul_trap")


@dataclass(frozen=True)
class PotentialModel:
    """Tagged potential description.

    ``coeffs[k]`` holds the time-polynomial coefficients of the x^k term:
    ``V(x, t) = sum_k (sum_j coeffs[k][j] * t**j) * x**k``.  The tuple-of-
    tuples form is derived once from the kind-specific parameters, keeping
    evaluation and differentiation uniform across kinds.
    """

    kind: str
    params: dict = field(default_factory=dict)
    coeffs: tuple = field(init=False, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown potential kind {self.kind!r}; expected one of {KINDS}")
        object.__setattr__(self, "coeffs", _build_coeffs(self.kind, self.params))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1


def _build_coeffs(kind: str, params: dict) -> tuple:
    if kind == "free":
        return ((0.0,),)
    if kind == "harmonic":
        omega = float(params["omega"])
        mass = float(params.get("mass", 1.0))
        return ((0.0,), (0.0,), (0.5 * mass * omega**2,))
    if kind == "quartic":
        c2 = float(params.get("c2", 0.0))
        c4 = float(params.get("c4", 0.0))
        return ((0.0,), (0.0,), (c2,), (0.0,), (c4,))
    if kind == "polynomial":
        rows = params["coeffs"]
        if not rows:
            raise ValueError("polynomial potential needs at least one coefficient row")
        return tuple(tuple(float(c) for c in row) for row in rows)
    if kind == "paul_trap":
        # V = mass/2 * (A + B cos(Omega t)) * x^2; the cosine is not a
        # t-polynomial, so this kind keeps its parameters and is special-cased
        # in the x^2 coefficient below.
        for key in ("a", "b", "big_omega"):
            if key not in params:
                raise ValueError(f"paul_trap potential needs parameter {key!r}")
        return ((0.0,), (0.0,), (None,))
    raise AssertionError(kind)


def _x_coefficients(model: PotentialModel, t: float) -> np.ndarray:
    """Coefficients c_k(t) of x^k at a given time."""
    out = np.empty(len(model.coeffs))
    for k, row in enumerate(model.coeffs):
        if row == (None,):  # paul_trap x^2 term
            p = model.params
            mass = float(p.get("mass", 1.0))
            out[k] = 0.5 * mass * (float(p["a"]) + float(p["b"]) * np.cos(float(p["big_omega"]) * t))
        else:
            out[k] = sum(c * t**j for j, c in enumerate(row))
    return out


def potential_value(model: PotentialModel, x, t: float):
    """Evaluate V(x, t); ``x`` may be a scalar or an array."""
    c = _x_coefficients(model, t)
    return np.polynomial.polynomial.polyval(x, c)


def potential_derivative(model: PotentialModel, order: int, x, t: float):
    """Exact spatial derivative d^order V / dx^order at (x, t).

    Orders above the polynomial degree return exactly zero.
    """
    if order < 1:
        raise ValueError(f"derivative order must be >= 1, got {order}")
    c = _x_coefficients(model, t)
    if order >= c.size:
        return np.zeros_like(np.asarray(x, dtype=float))
    d = c[order:].copy()
    k = np.arange(d.size)
    for i in range(order):
        d *= k + order - i
    return np.polynomial.polynomial.polyval(x, d)


def free_potential() -> PotentialModel:
    return PotentialModel("free")


def harmonic_potential(omega: float, mass: float = 1.0) -> PotentialModel:
    """V = mass * omega^2 * x^2 / 2."""
    return PotentialModel("harmonic", {"omega": omega, "mass": mass})


def quartic_potential(c2: float = 0.0, c4: float = 0.0) -> PotentialModel:
    """V = c2 * x^2 + c4 * x^4."""
    return PotentialModel("quartic", {"c2": c2, "c4": c4})


def polynomial_potential(coeffs) -> PotentialModel:
    """V with per-order time-polynomial coefficients.

    ``coeffs[k][j]`` multiplies ``t**j * x**k``; pass ``[[0], [0], [0], [1]]``
    for V = x^3.
    """
    return PotentialModel("polynomial", {"coeffs": [list(row) for row in coeffs]})


def paul_trap_potential(a: float, b: float, big_omega: float, mass: float = 1.0) -> PotentialModel:
    """V = mass/2 * (a + b*cos(big_omega * t)) * x^2."""
    return PotentialModel("paul_trap", {"a": a, "b": b, "big_omega": big_omega, "mass": mass})


def model_to_dict(model: PotentialModel) -> dict:
    """Serializable {kind, params} record."""
    return {"kind": model.kind, "params": dict(model.params)}


def model_from_dict(record: dict) -> PotentialModel:
    return PotentialModel(str(record["kind"]), dict(record.get("params", {})))
