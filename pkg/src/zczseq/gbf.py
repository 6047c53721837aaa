"""Generalized Boolean functions over Z_q and their unimodular sequences.

A generalized Boolean function (GBF) maps {0,1}^m into Z_q and is stored
sparsely as a multilinear polynomial: sorted variable-index tuples mapped
to nonzero coefficients mod q.  Input index j is identified with the bit
vector (j_0, ..., j_{m-1}) where j_0 is the least significant bit, so x0
is the fastest-toggling variable.  This convention is load-bearing: every
sequence layout in the package depends on it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

__all__ = [
    "GeneralizedBooleanFunction",
    "UnimodularSequence",
    "QuadraticGraph",
    "PathFormReport",
    "binvec",
    "psi",
    "psi_restricted",
    "quadratic_graph",
    "validate_restricted_path_form",
    "parse_gbf_text",
    "format_gbf_text",
]


def binvec(j: int, m: int) -> tuple[int, ...]:
    """Bit vector (j_0, ..., j_{m-1}) of j, least significant bit first."""
    if not 0 <= j < (1 << m):
        raise ValueError(f"index {j} out of range for {m} variables")
    return tuple((j >> beta) & 1 for beta in range(m))


def _bit_columns(m: int) -> np.ndarray:
    # rows = inputs 0..2^m-1, columns = variables, LSB-first
    j = np.arange(1 << m, dtype=np.int64)
    return (j[:, None] >> np.arange(m, dtype=np.int64)) & 1


class GeneralizedBooleanFunction:
    """Z_q-valued multilinear polynomial in m binary variables.

    ``terms`` maps tuples of distinct variable indices (sorted ascending;
    the empty tuple is the constant term) to coefficients in [1, q).
    Instances are immutable; arithmetic returns new objects.
    """

    __slots__ = ("q", "m", "_terms")

    def __init__(self, q: int, m: int, terms=None):
        if q < 2 or q % 2:
            raise ValueError(f"modulus q must be even and >= 2, got {q}")
        if m < 0:
            raise ValueError(f"variable count must be nonnegative, got {m}")
        canon: dict[tuple[int, ...], int] = {}
        for idx, coeff in dict(terms or {}).items():
            key = tuple(sorted(set(idx)))
            for i in key:
                if not 0 <= i < m:
                    raise ValueError(f"variable index {i} out of range [0, {m})")
            c = (canon.get(key, 0) + int(coeff)) % q
            if c:
                canon[key] = c
            else:
                canon.pop(key, None)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "_terms", canon)

    def __setattr__(self, name, value):
        raise AttributeError("GeneralizedBooleanFunction is immutable")

    @classmethod
    def zero(cls, q: int, m: int) -> "GeneralizedBooleanFunction":
        return cls(q, m, {})

    @property
    def terms(self) -> dict[tuple[int, ...], int]:
        return dict(self._terms)

    @property
    def degree(self) -> int:
        return max((len(t) for t in self._terms), default=0)

    def coefficient(self, indices) -> int:
        return self._terms.get(tuple(sorted(set(indices))), 0)

    def evaluate(self, x) -> int:
        """Value at a binary assignment ``x`` of length m."""
        x = tuple(x)
        if len(x) != self.m:
            raise ValueError(f"expected {self.m} inputs, got {len(x)}")
        total = 0
        for idx, coeff in self._terms.items():
            prod = 1
            for i in idx:
                prod *= x[i]
                if not prod:
                    break
            total += coeff * prod
        return total % self.q

    def truth_table(self) -> np.ndarray:
        """Values at all 2^m inputs, index j read LSB-first."""
        vals = np.zeros(1 << self.m, dtype=np.int64)
        bits = _bit_columns(self.m)
        for idx, coeff in self._terms.items():
            if idx:
                prod = bits[:, idx[0]].copy()
                for i in idx[1:]:
                    prod &= bits[:, i]
                vals += coeff * prod
            else:
                vals += coeff
        return vals % self.q

    def restrict(self, J, e) -> "GeneralizedBooleanFunction":
        """Substitute x_{J[beta]} = e[beta]; the result keeps m variables."""
        J = tuple(J)
        e = tuple(int(b) for b in e)
        if len(J) != len(e):
            raise ValueError(f"|J| = {len(J)} but |e| = {len(e)}")
        if any(b not in (0, 1) for b in e):
            raise ValueError(f"restriction values must be bits, got {e}")
        if len(set(J)) != len(J):
            raise ValueError(f"duplicate indices in J = {J}")
        for i in J:
            if not 0 <= i < self.m:
                raise ValueError(f"restriction index {i} out of range [0, {self.m})")
        assign = dict(zip(J, e))
        out: dict[tuple[int, ...], int] = {}
        for idx, coeff in self._terms.items():
            mult = 1
            rest = []
            for i in idx:
                if i in assign:
                    mult *= assign[i]
                else:
                    rest.append(i)
            if mult:
                key = tuple(rest)
                out[key] = (out.get(key, 0) + coeff) % self.q
        return GeneralizedBooleanFunction(self.q, self.m, out)

    def with_variables(self, m: int) -> "GeneralizedBooleanFunction":
        """Same polynomial declared over a larger variable set."""
        if m < self.m:
            raise ValueError(f"cannot shrink variable count {self.m} -> {m}")
        return GeneralizedBooleanFunction(self.q, m, self._terms)

    def __add__(self, other):
        if not isinstance(other, GeneralizedBooleanFunction):
            return NotImplemented
        if other.q != self.q or other.m != self.m:
            raise ValueError("operands must share modulus and variable count")
        merged = dict(self._terms)
        for idx, coeff in other._terms.items():
            merged[idx] = merged.get(idx, 0) + coeff
        return GeneralizedBooleanFunction(self.q, self.m, merged)

    def __eq__(self, other):
        if not isinstance(other, GeneralizedBooleanFunction):
            return NotImplemented
        return (self.q, self.m, self._terms) == (other.q, other.m, other._terms)

    def __hash__(self):
        return hash((self.q, self.m, tuple(sorted(self._terms.items()))))

    def __repr__(self):
        body = " + ".join(
            (f"{c}*" + "*".join(f"x{i}" for i in idx) if idx else str(c))
            for idx, c in sorted(self._terms.items(), key=lambda kv: (len(kv[0]), kv[0]))
        )
        return f"GBF(q={self.q}, m={self.m}: {body or '0'})"


@dataclass(frozen=True, eq=False)
class UnimodularSequence:
    """Length-L sequence of q-th roots of unity stored as exponents.

    ``zero_mask`` (optional) marks entries that are literally 0 rather
    than a root of unity, as produced by restricted functions.
    """

    q: int
    exponents: np.ndarray
    zero_mask: np.ndarray | None = None

    def __post_init__(self):
        if self.q < 1:
            raise ValueError(f"modulus must be positive, got {self.q}")
        exps = np.asarray(self.exponents, dtype=np.int64)
        if exps.ndim != 1 or exps.size < 1:
            raise ValueError("exponents must be a nonempty 1-d vector")
        if np.any((exps < 0) | (exps >= self.q)):
            raise ValueError(f"exponents must lie in [0, {self.q})")
        exps = exps.copy()
        exps.setflags(write=False)
        object.__setattr__(self, "exponents", exps)
        if self.zero_mask is not None:
            mask = np.asarray(self.zero_mask, dtype=bool)
            if mask.shape != exps.shape:
                raise ValueError("zero_mask must match exponents in shape")
            mask = mask.copy()
            mask.setflags(write=False)
            object.__setattr__(self, "zero_mask", mask)

    def __len__(self) -> int:
        return int(self.exponents.size)

    def __eq__(self, other):
        if not isinstance(other, UnimodularSequence):
            return NotImplemented
        if self.q != other.q or not np.array_equal(self.exponents, other.exponents):
            return False
        a = self.zero_mask if self.zero_mask is not None else np.zeros(len(self), bool)
        b = other.zero_mask if other.zero_mask is not None else np.zeros(len(other), bool)
        return np.array_equal(a, b)

    @property
    def exact(self) -> bool:
        """True when entries are Gaussian integers (q divides 4)."""
        return self.q in (1, 2, 4)

    def values(self) -> np.ndarray:
        """Complex entries; masked positions are 0."""
        if self.q == 1:
            vals = np.ones(len(self), dtype=np.complex128)
        elif self.q == 2:
            vals = (1.0 - 2.0 * self.exponents).astype(np.complex128)
        elif self.q == 4:
            re = np.array([1, 0, -1, 0], dtype=np.float64)[self.exponents]
            im = np.array([0, 1, 0, -1], dtype=np.float64)[self.exponents]
            vals = re + 1j * im
        else:
            vals = np.exp(2j * np.pi * self.exponents / self.q)
        if self.zero_mask is not None:
            vals = np.where(self.zero_mask, 0.0, vals)
        return vals

    def exact_components(self) -> tuple[np.ndarray, np.ndarray] | None:
        """Integer (re, im) entry arrays, or None when q does not divide 4."""
        if not self.exact:
            return None
        if self.q == 4:
            re = np.array([1, 0, -1, 0], dtype=np.int64)[self.exponents]
            im = np.array([0, 1, 0, -1], dtype=np.int64)[self.exponents]
        else:
            re = 1 - 2 * self.exponents if self.q == 2 else np.ones(len(self), np.int64)
            im = np.zeros(len(self), dtype=np.int64)
        if self.zero_mask is not None:
            re = np.where(self.zero_mask, 0, re)
            im = np.where(self.zero_mask, 0, im)
        return re, im


@dataclass(frozen=True)
class QuadraticGraph:
    """Graph of a quadratic GBF: one vertex per variable, one edge per
    nonzero quadratic coefficient."""

    vertices: frozenset[int]
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        for a, b in self.edges:
            if a == b or a not in self.vertices or b not in self.vertices:
                raise ValueError(f"edge ({a},{b}) not between distinct known vertices")

    def adjacency(self) -> dict[int, tuple[int, ...]]:
        adj: dict[int, list[int]] = {v: [] for v in sorted(self.vertices)}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return {v: tuple(sorted(ns)) for v, ns in adj.items()}

    def degree(self, v: int) -> int:
        return sum(1 for a, b in self.edges if v in (a, b))


def psi(f: GeneralizedBooleanFunction) -> UnimodularSequence:
    """Unimodular sequence of f: entry j carries exponent f(j_0,...,j_{m-1})."""
    return UnimodularSequence(f.q, f.truth_table())


def psi_restricted(f: GeneralizedBooleanFunction, J, e) -> UnimodularSequence:
    """Sequence of a restriction: equal to psi(f) where the index bits agree
    with ``e`` on ``J``, literally zero elsewhere (recorded in the mask)."""
    J = tuple(J)
    e = tuple(int(b) for b in e)
    f.restrict(J, e)  # reuse argument validation
    j = np.arange(1 << f.m, dtype=np.int64)
    agree = np.ones(j.size, dtype=bool)
    for idx, bit in zip(J, e):
        agree &= ((j >> idx) & 1) == bit
    return UnimodularSequence(f.q, f.truth_table(), zero_mask=~agree)


def quadratic_graph(f: GeneralizedBooleanFunction) -> QuadraticGraph:
    """Edges of the degree-2 part of f.  Raises if any term has degree > 2."""
    if f.degree > 2:
        raise ValueError(f"function has degree {f.degree}; graph needs degree <= 2")
    edges = frozenset(
        (idx[0], idx[1]) for idx in f.terms if len(idx) == 2
    )
    return QuadraticGraph(vertices=frozenset(range(f.m)), edges=edges)


@dataclass(frozen=True)
class PathFormReport:
    """Outcome of the restricted-path structure check.

    ``path`` lists the required path vertices in order; gamma1/gamma2 are
    its end vertices.  ``violations`` holds (restriction bits, reason)
    pairs; the check passes when it is empty.
    """

    passed: bool
    gamma1: int
    gamma2: int
    path: tuple[int, ...]
    violations: tuple[tuple[tuple[int, ...], str], ...]


def validate_restricted_path_form(
    f: GeneralizedBooleanFunction, k: int, s: int, J, pi
) -> PathFormReport:
    """Check that every restriction of f onto the J variables is exactly
    (q/2) * (path on the free vertices, ordered by ``pi``) plus linear
    terms on allowed variables plus a constant.

    Structural misuse (bad k/s/J/pi) raises; defects of f itself are
    reported, not thrown, so near-misses can be observed.
    """
    m = f.m
    J = tuple(J)
    pi = tuple(pi)
    if not (0 <= s <= k <= m - 2):
        raise ValueError(f"need 0 <= s <= k <= m-2, got s={s}, k={k}, m={m}")
    if len(J) != k - s or len(set(J)) != len(J):
        raise ValueError(f"J must hold {k - s} distinct indices, got {J}")
    if any(not 0 <= i < m - s for i in J):
        raise ValueError(f"J must be a subset of [0, {m - s}), got {J}")
    if sorted(pi) != list(range(m - k)):
        raise ValueError(f"pi must permute 0..{m - k - 1}, got {pi}")

    isolated = tuple(range(m - s, m))
    free = tuple(sorted(set(range(m - s)) - set(J)))
    path = tuple(free[p] for p in pi)
    path_edges = {
        tuple(sorted((path[b], path[b + 1]))) for b in range(len(path) - 1)
    }
    allowed_linear = set(free) | set(isolated)
    half = f.q // 2

    violations = []
    for e in itertools.product((0, 1), repeat=len(J)):
        g = f.restrict(J, e)
        seen_edges = set()
        for idx, coeff in g.terms.items():
            if len(idx) > 2:
                violations.append((e, f"degree-{len(idx)} term {idx} survives restriction"))
            elif len(idx) == 2:
                if idx not in path_edges:
                    violations.append((e, f"quadratic term {idx} is not a path edge"))
                elif coeff != half:
                    violations.append((e, f"path edge {idx} has coefficient {coeff}, expected {half}"))
                else:
                    seen_edges.add(idx)
            elif len(idx) == 1:
                if idx[0] not in allowed_linear:
                    violations.append((e, f"linear term on x{idx[0]} is not allowed"))
        for missing in sorted(path_edges - seen_edges):
            violations.append((e, f"path edge {missing} is missing"))

    return PathFormReport(
        passed=not violations,
        gamma1=path[0],
        gamma2=path[-1],
        path=path,
        violations=tuple(violations),
    )


def format_gbf_text(f: GeneralizedBooleanFunction) -> str:
    """Render in the text format: header line then one term per line,
    index sets ascending.  Round-trips bit-exactly through parse."""
    lines = [f"q={f.q} m={f.m}"]
    for idx in sorted(f.terms, key=lambda t: (len(t), t)):
        coeff = f.terms[idx]
        if idx:
            lines.append(f"{coeff} * " + "*".join(f"x{i}" for i in idx))
        else:
            lines.append(f"{coeff}")
    return "\n".join(lines) + "\n"


def parse_gbf_text(text: str) -> GeneralizedBooleanFunction:
    """Parse the text format produced by :func:`format_gbf_text`."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty GBF text")
    header = lines[0].split()
    try:
        fields = dict(part.split("=", 1) for part in header)
        q = int(fields["q"])
        m = int(fields["m"])
    except (ValueError, KeyError) as exc:
        raise ValueError(f"malformed GBF header {lines[0]!r}") from exc
    terms: dict[tuple[int, ...], int] = {}
    for ln in lines[1:]:
        if "*" in ln:
            coeff_part, _, vars_part = ln.partition("*")
            try:
                coeff = int(coeff_part.strip())
                idx = tuple(
                    int(tok.strip()[1:]) for tok in vars_part.split("*") if tok.strip()
                )
                if any(not tok.strip().startswith("x") for tok in vars_part.split("*")):
                    raise ValueError
            except ValueError as exc:
                raise ValueError(f"malformed GBF term {ln!r}") from exc
        else:
            try:
                coeff = int(ln)
            except ValueError as exc:
                raise ValueError(f"malformed GBF term {ln!r}") from exc
            idx = ()
        key = tuple(sorted(idx))
        if key in terms:
            raise ValueError(f"duplicate term {key} in GBF text")
        terms[key] = coeff
    return GeneralizedBooleanFunction(q, m, terms)
