"""One-parameter sweeps locating changes of Jordan structure."""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as la

from .exceptions import FamilyParseError, InputError, NumericalError
from .jordan import jordan_decompose
from .numfield import DEFAULT_TOL, check_operator
from .pseudoherm import build_eta, classify_spectrum

__all__ = [
    "AffineFamily",
    "heff_family",
    "builtin_family",
    "SweepRecord",
    "Transition",
    "SweepResult",
    "run_sweep",
    "BUILTIN_FAMILIES",
]


@dataclass(frozen=True, eq=False)
class AffineFamily:
    """``H(t) = base + t * direction``."""

    name: str
    base: np.ndarray
    direction: np.ndarray

    def __post_init__(self):
        base = check_operator(self.base)
        direction = check_operator(self.direction)
        if base.shape != direction.shape:
            raise FamilyParseError("base and direction shapes differ")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "direction", direction)

    def __call__(self, t):
        return self.base + t * self.direction


def heff_family(E=1.0, r=1.0):
    """``[[E, i r], [i s, E]]`` with ``s`` as the parameter."""
    return AffineFamily(
        "heff",
        np.array([[E, 1j * r], [0, E]]),
        np.array([[0, 0], [1j, 0]]),
    )


def _identity_family(dim=2):
    return AffineFamily("identity", np.eye(dim), np.zeros((dim, dim)))


def _nilpotent_family():
    # J_2(0) + t e_21: eigenvalues +-sqrt(t)
    return AffineFamily("nilpotent", np.array([[0, 1], [0, 0]]), np.array([[0, 0], [1, 0]]))


BUILTIN_FAMILIES = {
    "heff": heff_family,
    "identity": _identity_family,
    "nilpotent": _nilpotent_family,
}


def builtin_family(name, **params):
    try:
        factory = BUILTIN_FAMILIES[name]
    except KeyError:
        raise FamilyParseError(
            f"unknown family {name!r}; built-ins are {sorted(BUILTIN_FAMILIES)}"
        ) from None
    return factory(**params)


@dataclass
class SweepRecord:
    parameter: float
    eigenvalues: list
    min_gap: float
    blocks: tuple = None  # ((eigenvalue, size), ...) in ledger order
    condition_i: bool = None
    inertia: tuple = None
    spectral_type: str = None  # "real", "complex" or "mixed"
    ill_conditioned: bool = False
    error: str = None

    @property
    def block_multiset(self):
        if self.blocks is None:
            return None
        return tuple(sorted((p for _, p in self.blocks), reverse=True))


@dataclass(frozen=True)
class Transition:
    """Change of block multiset.

    ``index`` is set when a single grid point differs from equal neighbours
    on both sides (the sweep hit the exceptional point); otherwise the change
    lies in the open interval ``(lower, upper)``.
    """

    lower: float
    upper: float
    before: tuple
    after: tuple
    index: int = None
    at: tuple = None

    @property
    def parameter(self):
        return self.lower if self.index is not None else 0.5 * (self.lower + self.upper)


@dataclass
class SweepResult:
    family: str
    records: list
    transitions: list = field(default_factory=list)
    spectral_changes: list = field(default_factory=list)


def _record(t, H, tol):
    w = la.eigvals(H)
    gaps = np.abs(w[:, None] - w[None, :])[np.triu_indices(w.size, 1)]
    rec = SweepRecord(
        parameter=float(t),
        eigenvalues=[complex(z) for z in np.sort_complex(w)],
        min_gap=float(gaps.min()) if gaps.size else float("inf"),
    )
    try:
        jd = jordan_decompose(H, tol)
        cls = classify_spectrum(jd, tol)
    except NumericalError as exc:
        rec.error = f"{type(exc).__name__}: {exc}"
        return rec
    rec.blocks = tuple((complex(jd.eigenvalues[b.eigenvalue_index]), b.block_size) for b in jd.blocks)
    rec.condition_i = cls.condition_i_holds
    if cls.all_real:
        rec.spectral_type = "real"
    elif not cls.real_eigs:
        rec.spectral_type = "complex"
    else:
        rec.spectral_type = "mixed"
    if cls.condition_i_holds:
        try:
            rec.inertia = build_eta(jd, cls, tol)[1].inertia
        except NumericalError:
            rec.inertia = None
    return rec


def _runs(values):
    runs = []
    for i, v in enumerate(values):
        if runs and runs[-1][0] == v:
            runs[-1][2] = i
        else:
            runs.append([v, i, i])
    return runs


def _transitions(records):
    params = [r.parameter for r in records]
    runs = _runs([r.block_multiset for r in records])
    out, consumed = [], set()
    for k in range(1, len(runs) - 1):
        value, start, end = runs[k]
        if start == end and runs[k - 1][0] == runs[k + 1][0]:
            out.append(
                Transition(params[start], params[start], runs[k - 1][0], runs[k + 1][0], start, value)
            )
            consumed.update({k - 1, k})
    for k in range(len(runs) - 1):
        if k in consumed:
            continue
        i, j = runs[k][2], runs[k + 1][1]
        out.append(Transition(params[i], params[j], runs[k][0], runs[k + 1][0]))
    out.sort(key=lambda tr: tr.lower)
    return out


def run_sweep(family, t0, t1, steps, tol=DEFAULT_TOL):
    """Analyze ``family(t)`` on ``steps`` equally spaced points of ``[t0, t1]``."""
    if steps < 2:
        raise InputError("a sweep needs at least 2 steps")
    grid = np.linspace(t0, t1, steps)
    records = [_record(t, check_operator(family(t)), tol) for t in grid]
    transitions = _transitions(records)
    step = abs(grid[1] - grid[0]) * (1 + 1e-9)
    for tr in transitions:
        lo = min(tr.lower, tr.upper) - step
        hi = max(tr.lower, tr.upper) + step
        for r in records:
            if lo <= r.parameter <= hi:
                r.ill_conditioned = True
    spectral = [
        (records[i].parameter, records[i + 1].parameter, records[i].spectral_type, records[i + 1].spectral_type)
        for i in range(len(records) - 1)
        if records[i].spectral_type != records[i + 1].spectral_type
    ]
    return SweepResult(getattr(family, "name", "custom"), records, transitions, spectral)
