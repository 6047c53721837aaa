"""Exact correlation computation and brute-force zone certification.

Aperiodic correlation follows the sliding-window convention

    accf(a, b)(u) = sum_{i=0}^{L-1-u} a_i * conj(b_{i+u}),   0 <= u <= L,

with the mirrored sum for negative u and accf(.)(+-L) = 0 (empty sum).
Periodic correlation is assembled from two aperiodic terms:

    pccf(a, b)(u) = accf(a, b)(u) + conj(accf(b, a)(L - u)).

For q in {1, 2, 4} every value is a Gaussian integer and all zone tests
are exact; for other moduli values are complex doubles with an absolute
zero tolerance of 1e-9 * L.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .gbf import UnimodularSequence

__all__ = [
    "CorrelationValue",
    "Violation",
    "ZczCertificate",
    "InterSetReport",
    "CccReport",
    "SpectrumTable",
    "SpectrumCapError",
    "accf",
    "pccf",
    "code_accf",
    "verify_ccc",
    "verify_zcz",
    "verify_inter_zccz",
    "performance_parameter",
    "correlation_spectrum",
]

FLOAT_ZERO_TOL_PER_CHIP = 1e-9
DEFAULT_SPECTRUM_CELL_CAP = 1 << 24


@dataclass(frozen=True)
class CorrelationValue:
    """One correlation value; ints when exact, floats with a tolerance
    otherwise."""

    re: float
    im: float
    exact: bool
    tol: float = 0.0

    def as_complex(self) -> complex:
        return complex(self.re, self.im)

    @property
    def magnitude(self) -> float:
        return abs(self.as_complex())

    def is_zero(self) -> bool:
        if self.exact:
            return self.re == 0 and self.im == 0
        return self.magnitude <= self.tol

    def matches(self, other: "CorrelationValue") -> bool:
        if self.exact and other.exact:
            return self.re == other.re and self.im == other.im
        tol = max(self.tol, other.tol)
        return abs(self.as_complex() - other.as_complex()) <= tol

    def conjugate(self) -> "CorrelationValue":
        return CorrelationValue(self.re, -self.im, self.exact, self.tol)

    def __add__(self, other):
        if not isinstance(other, CorrelationValue):
            return NotImplemented
        exact = self.exact and other.exact
        return CorrelationValue(
            self.re + other.re, self.im + other.im, exact, max(self.tol, other.tol)
        )

    def scaled(self, factor: int) -> "CorrelationValue":
        return CorrelationValue(
            factor * self.re, factor * self.im, self.exact, abs(factor) * self.tol
        )


def _check_pair(a: UnimodularSequence, b: UnimodularSequence) -> int:
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    if a.q != b.q:
        raise ValueError(f"modulus mismatch: q={a.q} vs q={b.q}")
    return len(a)


def accf(a: UnimodularSequence, b: UnimodularSequence, u: int) -> CorrelationValue:
    """Aperiodic cross-correlation of a against b at shift u (|u| <= L)."""
    L = _check_pair(a, b)
    if abs(u) > L:
        raise ValueError(f"shift {u} outside [-{L}, {L}]")
    exact = a.exact and b.exact
    if abs(u) == L:
        return CorrelationValue(0, 0, exact, 0.0 if exact else FLOAT_ZERO_TOL_PER_CHIP * L)
    if u >= 0:
        sa, sb = slice(0, L - u), slice(u, L)
    else:
        sa, sb = slice(-u, L), slice(0, L + u)
    if exact:
        ar, ai = a.exact_components()
        br, bi = b.exact_components()
        re = int(np.dot(ar[sa], br[sb]) + np.dot(ai[sa], bi[sb]))
        im = int(np.dot(ai[sa], br[sb]) - np.dot(ar[sa], bi[sb]))
        return CorrelationValue(re, im, True)
    val = np.dot(a.values()[sa], np.conj(b.values()[sb]))
    return CorrelationValue(float(val.real), float(val.imag), False, FLOAT_ZERO_TOL_PER_CHIP * L)


def pccf(a: UnimodularSequence, b: UnimodularSequence, u: int) -> CorrelationValue:
    """Periodic cross-correlation at shift u, 0 <= u < L."""
    L = _check_pair(a, b)
    if not 0 <= u < L:
        raise ValueError(f"periodic shift {u} outside [0, {L})")
    return accf(a, b, u) + accf(b, a, L - u).conjugate()


def _rows_of(code) -> tuple[UnimodularSequence, ...]:
    rows = getattr(code, "rows", code)
    return tuple(rows)


def code_accf(code1, code2, u: int) -> CorrelationValue:
    """Row-wise sum of aperiodic cross-correlations between two codes."""
    rows1, rows2 = _rows_of(code1), _rows_of(code2)
    if not rows1 or not rows2:
        raise ValueError("codes must hold at least one row")
    if len(rows1) != len(rows2):
        raise ValueError(f"row count mismatch: {len(rows1)} vs {len(rows2)}")
    total = accf(rows1[0], rows2[0], u)
    for r1, r2 in zip(rows1[1:], rows2[1:]):
        total = total + accf(r1, r2, u)
    return total


# ---------------------------------------------------------------------------
# batch engine: stacked periodic correlations for whole sets at once

class _Block:
    __slots__ = ("K", "L", "q", "exact", "re", "im", "tol")

    def __init__(self, seqs):
        seqs = list(seqs)
        if not seqs:
            raise ValueError("empty sequence set")
        q = seqs[0].q
        L = len(seqs[0])
        for z in seqs:
            if z.q != q:
                raise ValueError("sequences must share one modulus")
            if len(z) != L:
                raise ValueError("sequences must share one length")
        self.K = len(seqs)
        self.L = L
        self.q = q
        self.exact = all(z.exact for z in seqs)
        if self.exact:
            comps = [z.exact_components() for z in seqs]
            self.re = np.stack([c[0] for c in comps])
            self.im = np.stack([c[1] for c in comps])
            if not self.im.any():
                self.im = None
            self.tol = 0.0
        else:
            self.re = np.stack([z.values() for z in seqs])
            self.im = None
            self.tol = FLOAT_ZERO_TOL_PER_CHIP * L


def _windows(mat: np.ndarray, shifts: np.ndarray, L: int) -> np.ndarray:
    ext = np.concatenate([mat, mat[:, : max(int(shifts.max()), 1)]], axis=1)
    view = np.lib.stride_tricks.sliding_window_view(ext, L, axis=1)
    return view[:, shifts, :]


def _periodic_table(A: _Block, B: _Block, shifts) -> tuple[np.ndarray, np.ndarray | None]:
    """phi[u_idx, i, j] = sum_t A_i[t] * conj(B_j[(t + u) mod L])."""
    shifts = np.asarray(shifts, dtype=np.int64)
    if shifts.size == 0:
        raise ValueError("no shifts requested")
    if np.any((shifts < 0) | (shifts >= A.L)):
        raise ValueError("periodic shifts must lie in [0, L)")
    if not A.exact:
        win = _windows(B.re, shifts, A.L)
        phi = np.einsum("it,jut->uij", A.re, np.conj(win))
        return phi, None
    win_re = _windows(B.re, shifts, A.L)
    win_im = _windows(B.im, shifts, A.L) if B.im is not None else None
    re = np.einsum("it,jut->uij", A.re, win_re)
    im = None
    if A.im is not None:
        re = re + (np.einsum("it,jut->uij", A.im, win_im) if win_im is not None else 0)
        im = np.einsum("it,jut->uij", A.im, win_re)
    if win_im is not None:
        part = np.einsum("it,jut->uij", A.re, win_im)
        im = part * -1 if im is None else im - part
    if im is None:
        im = np.zeros_like(re)
    return re, im


@dataclass(frozen=True)
class Violation:
    """A single nonzero correlation where the claimed zone demands zero."""

    i: int
    j: int
    shift: int
    re: float
    im: float

    @property
    def magnitude(self) -> float:
        return abs(complex(self.re, self.im))

    def to_json_dict(self) -> dict:
        return {
            "i": self.i,
            "j": self.j,
            "shift": self.shift,
            "re": self.re,
            "im": self.im,
            "magnitude": self.magnitude,
        }


def _scan_block(re, im, shifts, tol, expect_peak_at_zero, L):
    """Collect zone violations from one periodic-correlation table.

    Returns the worst violation per ordered pair, scan-order first witness
    included.  ``expect_peak_at_zero`` additionally demands phi(i,i)(0) = L.
    """
    violations: dict[tuple[int, int], Violation] = {}
    witness = None
    n_u, K1, K2 = re.shape
    for u_idx in range(n_u):
        u = int(shifts[u_idx])
        tab_re = re[u_idx]
        tab_im = im[u_idx] if im is not None else None
        expected_re = np.zeros((K1, K2))
        if u == 0 and expect_peak_at_zero:
            np.fill_diagonal(expected_re, L)
        dev = np.abs(tab_re - expected_re)
        if tab_im is not None:
            dev = dev + np.abs(tab_im)
        bad = np.argwhere(dev > tol)
        for i, j in bad:
            v = Violation(
                int(i), int(j), u,
                _plain(tab_re[i, j]),
                _plain(tab_im[i, j]) if tab_im is not None else 0,
            )
            if witness is None:
                witness = v
            prev = violations.get((v.i, v.j))
            if prev is None or v.magnitude > prev.magnitude:
                violations[(v.i, v.j)] = v
    ordered = tuple(violations[k] for k in sorted(violations))
    return ordered, witness


def _plain(x):
    return int(x) if isinstance(x, (int, np.integer)) else float(x)


def performance_parameter(K: int, Z: int, L: int, binary: bool = False):
    """Zone quality ratio and its optimality classification.

    Binary sets use rho = 2KZ/L with near-optimality at 2K(Z+1)/L = 1;
    general sets use rho = K(Z+1)/L with near-optimality at K(Z+2)/L = 1.
    Returns (rho as an exact Fraction, classification string).
    """
    if K < 1 or Z < 0 or L < 1:
        raise ValueError(f"need K >= 1, Z >= 0, L >= 1, got ({K}, {Z}, {L})")
    if binary:
        rho = Fraction(2 * K * Z, L)
        near = Fraction(2 * K * (Z + 1), L)
    else:
        rho = Fraction(K * (Z + 1), L)
        near = Fraction(K * (Z + 2), L)
    if rho > 1:
        classification = "bound-violation"
    elif rho == 1:
        classification = "optimal"
    elif near == 1:
        classification = "near-optimal"
    else:
        classification = "neither"
    return rho, classification


@dataclass(frozen=True)
class ZczCertificate:
    """Brute-force certificate that K sequences form a (K, Z, L) zone set."""

    K: int
    Z: int
    L: int
    q: int
    passed: bool
    rho: Fraction
    classification: str
    formula: str
    violations: tuple[Violation, ...]
    witness: Violation | None

    def to_json_dict(self) -> dict:
        return {
            "kind": "zcz",
            "parameters": {"K": self.K, "Z": self.Z, "L": self.L, "q": self.q},
            "pass": self.passed,
            "rho": [self.rho.numerator, self.rho.denominator],
            "classification": self.classification,
            "formula": self.formula,
            "witnesses": [v.to_json_dict() for v in self.violations],
        }


def verify_zcz(seqs, Z: int) -> ZczCertificate:
    """Certify the zone property of Definition-style ZCZ sets by direct
    computation of every in-zone periodic correlation.

    Checks phi(i, i)(0) = L, phi(i, i)(u) = 0 for 1 <= u <= Z and
    phi(i, j)(u) = 0 for i != j, 0 <= u <= Z, over all ordered pairs;
    negative shifts follow from conjugate symmetry.
    """
    block = _Block(seqs)
    if not 0 <= Z < block.L:
        raise ValueError(f"zone width {Z} outside [0, {block.L})")
    shifts = np.arange(Z + 1, dtype=np.int64)
    re, im = _periodic_table(block, block, shifts)
    if not block.exact:
        mag = re
        re, im = mag.real, mag.imag
    violations, witness = _scan_block(
        re, im, shifts, block.tol, expect_peak_at_zero=True, L=block.L
    )
    rho, classification = performance_parameter(
        block.K, Z, block.L, binary=(block.q == 2)
    )
    return ZczCertificate(
        K=block.K,
        Z=Z,
        L=block.L,
        q=block.q,
        passed=not violations,
        rho=rho,
        classification=classification,
        formula="binary" if block.q == 2 else "general",
        violations=violations,
        witness=witness,
    )


@dataclass(frozen=True)
class InterSetReport:
    """Cross-set zone report: phi(a_i, b_j)(u) = 0 for |u| <= Zc."""

    Zc: int
    L: int
    q: int
    passed: bool
    violations: tuple[Violation, ...]
    witness: Violation | None

    def to_json_dict(self) -> dict:
        return {
            "kind": "inter-zccz",
            "parameters": {"Zc": self.Zc, "L": self.L, "q": self.q},
            "pass": self.passed,
            "witnesses": [v.to_json_dict() for v in self.violations],
        }


def verify_inter_zccz(set_a, set_b, Zc: int) -> InterSetReport:
    """Certify a zero cross-correlation zone between two sequence sets.

    Shifts 0..Zc are computed for both orientations; a violation found in
    the reversed orientation is reported with a negative shift (conjugate
    symmetry maps it back to the forward pair).
    """
    A, B = _Block(set_a), _Block(set_b)
    if A.L != B.L or A.q != B.q:
        raise ValueError("sets must share length and modulus")
    if not 0 <= Zc < A.L:
        raise ValueError(f"zone width {Zc} outside [0, {A.L})")
    shifts = np.arange(Zc + 1, dtype=np.int64)
    collected = []
    for front, back, sign in ((A, B, 1), (B, A, -1)):
        re, im = _periodic_table(front, back, shifts)
        if not front.exact:
            re, im = re.real, re.imag
        vio, _ = _scan_block(
            re, im, shifts, front.tol, expect_peak_at_zero=False, L=front.L
        )
        if sign < 0:
            # shift-0 entries mirror the forward orientation; drop duplicates
            vio = tuple(
                Violation(v.j, v.i, -v.shift, v.re, -v.im) for v in vio if v.shift != 0
            )
        collected.extend(vio)
    witness = collected[0] if collected else None
    return InterSetReport(
        Zc=Zc,
        L=A.L,
        q=A.q,
        passed=not collected,
        violations=tuple(collected),
        witness=witness,
    )


@dataclass(frozen=True)
class CccReport:
    """Row-sum correlation check over a collection of equal-shape codes."""

    P: int
    M: int
    L: int
    passed: bool
    is_complete: bool
    violations: tuple[Violation, ...]
    witness: Violation | None

    def to_json_dict(self) -> dict:
        return {
            "kind": "ccc",
            "parameters": {"P": self.P, "M": self.M, "L": self.L},
            "pass": self.passed,
            "complete": self.is_complete,
            "witnesses": [v.to_json_dict() for v in self.violations],
        }


def verify_ccc(codes) -> CccReport:
    """Check the complete-complementary conditions over all ordered code
    pairs and all shifts |u| < L: row-summed ACCF equals L*M only for a
    code against itself at zero shift.  Negative shifts follow from
    conjugate symmetry of the row sums."""
    codes = [_rows_of(c) for c in codes]
    if not codes:
        raise ValueError("empty code collection")
    M = len(codes[0])
    L = len(codes[0][0])
    for rows in codes:
        if len(rows) != M or any(len(r) != L for r in rows):
            raise ValueError("codes must share one (rows, length) shape")
    P = len(codes)
    violations: dict[tuple[int, int], Violation] = {}
    witness = None
    for e1 in range(P):
        for e2 in range(P):
            for u in range(L):
                val = code_accf(codes[e1], codes[e2], u)
                want = L * M if (e1 == e2 and u == 0) else 0
                dev = abs(val.as_complex() - want)
                if dev > (0 if val.exact else val.tol):
                    v = Violation(e1, e2, u, val.re, val.im)
                    if witness is None:
                        witness = v
                    prev = violations.get((e1, e2))
                    if prev is None or v.magnitude > prev.magnitude:
                        violations[(e1, e2)] = v
    ordered = tuple(violations[k] for k in sorted(violations))
    return CccReport(
        P=P,
        M=M,
        L=L,
        passed=not ordered and P == M,
        is_complete=P == M,
        violations=ordered,
        witness=witness,
    )


class SpectrumCapError(ValueError):
    """Requested spectrum exceeds the configured cell cap."""


@dataclass(frozen=True)
class SpectrumTable:
    """Dense periodic-correlation table phi[(u, i, j)] for one sequence set."""

    K: int
    L: int
    q: int
    exact: bool
    re: np.ndarray
    im: np.ndarray

    def value(self, i: int, j: int, u: int) -> complex:
        return complex(self.re[u, i, j], self.im[u, i, j])

    def max_magnitude(self, shifts=None) -> float:
        sl = slice(None) if shifts is None else list(shifts)
        return float(np.abs(self.re[sl] + 1j * self.im[sl]).max())

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["pair_i", "pair_j", "shift", "re", "im"])
            for i in range(self.K):
                for j in range(self.K):
                    for u in range(self.L):
                        re, im = self.re[u, i, j], self.im[u, i, j]
                        if self.exact:
                            w.writerow([i, j, u, int(re), int(im)])
                        else:
                            w.writerow([i, j, u, repr(float(re)), repr(float(im))])


def correlation_spectrum(seqs, max_cells: int = DEFAULT_SPECTRUM_CELL_CAP) -> SpectrumTable:
    """All-pairs, all-shifts periodic correlation table.

    Refuses to allocate more than ``max_cells`` table entries (K * K * L).
    """
    block = _Block(seqs)
    cells = block.K * block.K * block.L
    if cells > max_cells:
        raise SpectrumCapError(
            f"spectrum needs {cells} cells, cap is {max_cells}; raise max_cells to override"
        )
    shifts = np.arange(block.L, dtype=np.int64)
    re, im = _periodic_table(block, block, shifts)
    if not block.exact:
        re, im = re.real.copy(), re.imag.copy()
    return SpectrumTable(K=block.K, L=block.L, q=block.q, exact=block.exact, re=re, im=im)
