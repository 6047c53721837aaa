"""Direct construction of multiple ZCZ sequence families from quadratic
generalized Boolean functions.

The machinery has three layers:

* a base function ``f`` over m variables whose restrictions onto the J
  variables collapse to one fixed path (checked by
  :func:`zczseq.gbf.validate_restricted_path_form`);
* complementary-code families: for family index t1 and code index t2 the
  code rows are psi(f + (q/2) * (row-dependent linear terms)), giving 2^s
  mutually orthogonal collections whose cross-family code correlations
  vanish inside a zone;
* a seed function ``h`` over k+2 extra variables that welds the code rows
  into 2^s sequence sets of length 2^{m+k+2}: sequence (t1, t2) is built
  from f + h + (q/2) * (coupling terms), and its chunk c of length 2^m
  equals row (c mod 2^{k+1}) of code (t1, t2) phased by omega^{h_c}.

Sequence/row orderings are pinned: t2 = sum b_beta 2^beta over the code
bits, t1 over the family bits, and row nu = d * 2^k + sum d_beta 2^beta.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import correlation
from .gbf import (
    GeneralizedBooleanFunction,
    UnimodularSequence,
    psi,
    validate_restricted_path_form,
)

__all__ = [
    "HCoeffs",
    "seed_polynomial",
    "build_seed_function",
    "CancellationReport",
    "check_seed_cancellation",
    "ConstructionParams",
    "default_params",
    "example1_params",
    "path_gbf",
    "ComplementaryCode",
    "build_ccc_family",
    "ZczSequenceSet",
    "MultipleZczFamily",
    "build_multiple_zcz",
    "union_family",
    "ChunkDecompositionReport",
    "check_chunk_decomposition",
    "export_family",
    "load_family",
    "LoadedFamily",
]


@dataclass(frozen=True)
class HCoeffs:
    """Binary coefficients of the seed function for a given k.

    c[r-1] is the coefficient of x_{m+r} x_m for r = 1..k+1 (the last one
    must be 1), ``d_pairs`` lists the (mu, nu) with 1 <= mu < nu <= k whose
    cross term x_{m+mu} x_{m+nu} is present, e[alpha] is the linear
    coefficient of x_{m+alpha} for alpha = 0..k+1, and ``e_prime`` is the
    constant term.
    """

    c: tuple[int, ...]
    d_pairs: tuple[tuple[int, int], ...] = ()
    e: tuple[int, ...] = ()
    e_prime: int = 0

    def __post_init__(self):
        if not self.c:
            raise ValueError("c must hold at least one coefficient")
        k = len(self.c) - 1
        if any(b not in (0, 1) for b in self.c):
            raise ValueError(f"c must be binary, got {self.c}")
        if self.c[-1] != 1:
            raise ValueError("the top coupling coefficient c_{k+1} must be 1")
        pairs = tuple(sorted((int(a), int(b)) for a, b in self.d_pairs))
        if len(set(pairs)) != len(pairs):
            raise ValueError(f"duplicate cross-term pairs in {pairs}")
        for mu, nu in pairs:
            if not 1 <= mu < nu <= k:
                raise ValueError(f"cross-term pair ({mu},{nu}) outside 1 <= mu < nu <= {k}")
        object.__setattr__(self, "d_pairs", pairs)
        e = tuple(int(b) for b in self.e) if self.e else (0,) * (k + 2)
        if len(e) != k + 2 or any(b not in (0, 1) for b in e):
            raise ValueError(f"e must hold {k + 2} bits, got {self.e}")
        object.__setattr__(self, "e", e)
        if self.e_prime not in (0, 1):
            raise ValueError(f"e_prime must be binary, got {self.e_prime}")

    @property
    def k(self) -> int:
        return len(self.c) - 1

    @classmethod
    def default(cls, k: int) -> "HCoeffs":
        if k < 0:
            raise ValueError(f"k must be nonnegative, got {k}")
        return cls(c=(0,) * k + (1,))

    def to_json_dict(self) -> dict:
        return {
            "c": list(self.c),
            "d_pairs": [list(p) for p in self.d_pairs],
            "e": list(self.e),
            "e_prime": self.e_prime,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "HCoeffs":
        return cls(
            c=tuple(data["c"]),
            d_pairs=tuple(tuple(p) for p in data.get("d_pairs", [])),
            e=tuple(data.get("e", [])),
            e_prime=int(data.get("e_prime", 0)),
        )


def seed_polynomial(coeffs: HCoeffs) -> GeneralizedBooleanFunction:
    """The seed function as a binary GBF over its own k+2 variables."""
    k = coeffs.k
    terms: dict[tuple[int, ...], int] = {}
    for r in range(1, k + 2):
        if coeffs.c[r - 1]:
            terms[(0, r)] = 1
    for mu, nu in coeffs.d_pairs:
        terms[(mu, nu)] = 1
    for alpha, bit in enumerate(coeffs.e):
        if bit:
            terms[(alpha,)] = 1
    if coeffs.e_prime:
        terms[()] = 1
    return GeneralizedBooleanFunction(2, k + 2, terms)


def build_seed_function(coeffs: HCoeffs, m: int, q: int) -> GeneralizedBooleanFunction:
    """Seed function lifted onto variables x_m .. x_{m+k+1} of the full
    m+k+2 variable space, scaled by q/2 so its values act as sign flips."""
    k = coeffs.k
    half = q // 2
    low = seed_polynomial(coeffs)
    terms = {tuple(i + m for i in idx): half * coeff for idx, coeff in low.terms.items()}
    return GeneralizedBooleanFunction(q, m + k + 2, terms)


@dataclass(frozen=True)
class CancellationReport:
    """Half-shift sign cancellation of a seed function's value vector.

    For every tau in [0, 2^{k+1}) the check requires

        (-1)^{h_tau + h_{tau+1}} + (-1)^{h_{tau+2^{k+1}} + h_{tau+1+2^{k+1}}} = 0

    with subscripts mod 2^{k+2}.  ``failures`` lists (tau, sum) pairs.
    """

    k: int
    passed: bool
    failures: tuple[tuple[int, int], ...]


def check_seed_cancellation(h: GeneralizedBooleanFunction) -> CancellationReport:
    """Exhaustively test the cancellation identity for a binary seed
    function over k+2 variables."""
    if h.q != 2:
        raise ValueError(f"seed cancellation is a binary identity, got q={h.q}")
    if h.m < 2:
        raise ValueError(f"seed function needs at least 2 variables, got {h.m}")
    k = h.m - 2
    hv = h.truth_table()
    n = 1 << (k + 2)
    half = 1 << (k + 1)
    failures = []
    signs = 1 - 2 * hv
    for tau in range(half):
        total = int(
            signs[tau] * signs[(tau + 1) % n]
            + signs[(tau + half) % n] * signs[(tau + 1 + half) % n]
        )
        if total != 0:
            failures.append((tau, total))
    return CancellationReport(k=k, passed=not failures, failures=tuple(failures))


def path_gbf(q: int, m: int, k: int, s: int, J, pi) -> GeneralizedBooleanFunction:
    """Minimal valid base function: q/2 times the path on the free
    vertices in the order given by ``pi``."""
    free = tuple(sorted(set(range(m - s)) - set(J)))
    path = tuple(free[p] for p in pi)
    half = q // 2
    terms = {
        tuple(sorted((path[b], path[b + 1]))): half for b in range(len(path) - 1)
    }
    return GeneralizedBooleanFunction(q, m, terms)


@dataclass(frozen=True)
class ConstructionParams:
    """Validated inputs of the family construction.

    J is the ordered list of removable vertices (a (k-s)-subset of
    [0, m-s)), pi orders the path on the remaining free vertices, f is the
    base function and h the seed coefficients.  Construction raises with
    an actionable message whenever a constraint fails, including when some
    restriction of f does not collapse to the required path form.
    """

    q: int
    m: int
    k: int
    s: int
    J: tuple[int, ...]
    pi: tuple[int, ...]
    f: GeneralizedBooleanFunction
    h: HCoeffs

    def __post_init__(self):
        if self.q < 2 or self.q % 2:
            raise ValueError(f"q must be even and >= 2, got {self.q}")
        if not 0 <= self.s <= self.k <= self.m - 2:
            raise ValueError(
                f"need 0 <= s <= k <= m-2, got s={self.s}, k={self.k}, m={self.m}"
            )
        object.__setattr__(self, "J", tuple(self.J))
        object.__setattr__(self, "pi", tuple(self.pi))
        if self.h.k != self.k:
            raise ValueError(f"seed coefficients are for k={self.h.k}, expected {self.k}")
        if self.f.q != self.q or self.f.m != self.m:
            raise ValueError(
                f"f must be over Z_{self.q} in {self.m} variables, got q={self.f.q}, m={self.f.m}"
            )
        report = validate_restricted_path_form(self.f, self.k, self.s, self.J, self.pi)
        if not report.passed:
            e, reason = report.violations[0]
            raise ValueError(
                f"f does not restrict to the required path form: at e={e}: {reason}"
            )

    # -- derived quantities -------------------------------------------------

    @property
    def isolated(self) -> tuple[int, ...]:
        return tuple(range(self.m - self.s, self.m))

    @property
    def free_vertices(self) -> tuple[int, ...]:
        return tuple(sorted(set(range(self.m - self.s)) - set(self.J)))

    @property
    def j_order(self) -> tuple[int, ...]:
        """The k coupling targets: J first, then the isolated vertices."""
        return self.J + self.isolated

    @property
    def path(self) -> tuple[int, ...]:
        free = self.free_vertices
        return tuple(free[p] for p in self.pi)

    @property
    def gamma1(self) -> int:
        return self.path[0]

    @property
    def gamma2(self) -> int:
        return self.path[-1]

    @property
    def n_vars(self) -> int:
        return self.m + self.k + 2

    @property
    def seq_length(self) -> int:
        return 1 << self.n_vars

    @property
    def set_size(self) -> int:
        return 1 << (self.k + 1)

    @property
    def num_sets(self) -> int:
        return 1 << self.s

    @property
    def zcz_width(self) -> int:
        return 1 << self.m

    @property
    def inter_zccz_width(self) -> int:
        return (1 << (self.m - self.s)) - 1

    @property
    def union_size(self) -> int:
        return 1 << (self.k + self.s + 1)

    def to_json_dict(self) -> dict:
        return {
            "q": self.q,
            "m": self.m,
            "k": self.k,
            "s": self.s,
            "J": list(self.J),
            "pi": list(self.pi),
            "f_terms": [
                [list(idx), coeff]
                for idx, coeff in sorted(self.f.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))
            ],
            "h": self.h.to_json_dict(),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "ConstructionParams":
        f = GeneralizedBooleanFunction(
            data["q"], data["m"], {tuple(idx): coeff for idx, coeff in data["f_terms"]}
        )
        return cls(
            q=data["q"],
            m=data["m"],
            k=data["k"],
            s=data["s"],
            J=tuple(data["J"]),
            pi=tuple(data["pi"]),
            f=f,
            h=HCoeffs.from_json_dict(data["h"]),
        )


def default_params(
    q: int, m: int, k: int, s: int, J=None, pi=None, f=None, h=None
) -> ConstructionParams:
    """Fill the free choices with deterministic defaults: J is the first
    k-s indices, pi the identity, f the bare path, h the minimal seed."""
    if not 0 <= s <= k <= m - 2:
        raise ValueError(f"need 0 <= s <= k <= m-2, got s={s}, k={k}, m={m}")
    J = tuple(J) if J is not None else tuple(range(k - s))
    pi = tuple(pi) if pi is not None else tuple(range(m - k))
    f = f if f is not None else path_gbf(q, m, k, s, J, pi)
    h = h if h is not None else HCoeffs.default(k)
    return ConstructionParams(q=q, m=m, k=k, s=s, J=J, pi=pi, f=f, h=h)


def example1_params() -> ConstructionParams:
    """The bundled worked example: q=2, m=4, k=2, s=1, J={0}, with
    f = x0x1 + x0x2 + x0x3 + x1x2 + x1 + x2 and seed
    h = x4x5 + x4x6 + x4x7 + x4.  The path order (1, 0) puts gamma1 = x2
    and gamma2 = x1; golden tests pin the resulting sequence ordering."""
    f = GeneralizedBooleanFunction(
        2,
        4,
        {(0, 1): 1, (0, 2): 1, (0, 3): 1, (1, 2): 1, (1,): 1, (2,): 1},
    )
    h = HCoeffs(c=(1, 1, 1), e=(1, 0, 0, 0))
    return ConstructionParams(q=2, m=4, k=2, s=1, J=(0,), pi=(1, 0), f=f, h=h)


def _bits(value: int, count: int) -> tuple[int, ...]:
    return tuple((value >> b) & 1 for b in range(count))


@dataclass(frozen=True)
class ComplementaryCode:
    """One Golay-type code: a stack of rows whose aperiodic correlations
    are meant to cancel in the row sum."""

    rows: tuple[UnimodularSequence, ...]
    t1: int | None = None
    t2: int | None = None

    @property
    def M(self) -> int:
        return len(self.rows)

    @property
    def L(self) -> int:
        return len(self.rows[0])


def _row_delta(params: ConstructionParams, b: tuple[int, ...], d_bits, d):
    """Linear + constant offset shared by the code-row and sequence forms."""
    q, half = params.q, params.q // 2
    k, s = params.k, params.s
    j_order = params.j_order
    terms: dict[tuple[int, ...], int] = {}

    def add(idx, coeff):
        key = tuple(sorted(idx))
        terms[key] = (terms.get(key, 0) + coeff) % q

    for beta in range(k):
        add((j_order[beta],), half * (d_bits[beta] + b[beta]))
    add((params.gamma1,), half * d)
    add((params.gamma2,), half * b[k])
    const = sum(d_bits[beta] * b[s + 1 + beta] for beta in range(k - s, k))
    add((), half * const)
    return terms


def build_ccc_family(params: ConstructionParams):
    """All 2^s code families; family t1 holds 2^{k+1} codes of 2^{k+1}
    rows of length 2^m.  Row nu encodes d = bit k of nu and
    d_beta = bit beta of nu."""
    k, s = params.k, params.s
    n_codes = 1 << (k + 1)
    families = []
    for t1 in range(1 << s):
        codes = []
        for t2 in range(n_codes):
            b = _bits(t2, k + 1) + _bits(t1, s)
            rows = []
            for nu in range(n_codes):
                d_bits = _bits(nu, k)
                d = (nu >> k) & 1
                delta = GeneralizedBooleanFunction(
                    params.q, params.m, _row_delta(params, b, d_bits, d)
                )
                rows.append(psi(params.f + delta))
            codes.append(ComplementaryCode(rows=tuple(rows), t1=t1, t2=t2))
        families.append(tuple(codes))
    return tuple(families)


@dataclass(frozen=True)
class ZczSequenceSet:
    """K sequences with a declared (K, Z, L) zone claim."""

    sequences: tuple[UnimodularSequence, ...]
    K: int
    Z: int
    L: int
    label: int | None = None

    def __post_init__(self):
        if len(self.sequences) != self.K:
            raise ValueError(f"declared K={self.K} but {len(self.sequences)} sequences")
        if any(len(z) != self.L for z in self.sequences):
            raise ValueError(f"all sequences must have length {self.L}")


@dataclass(frozen=True)
class MultipleZczFamily:
    """2^s zone sets with a declared inter-set zero cross-correlation zone."""

    params: ConstructionParams | None
    sets: tuple[ZczSequenceSet, ...]
    Z: int
    Zc: int

    @property
    def q(self) -> int:
        return self.sets[0].sequences[0].q

    @property
    def L(self) -> int:
        return self.sets[0].L


def build_multiple_zcz(params: ConstructionParams) -> MultipleZczFamily:
    """Assemble the full family of 2^s sets of 2^{k+1} sequences of
    length 2^{m+k+2}.

    Sequence (t1, t2) is psi of

        f + h + (q/2) * ( sum_beta x_{m+beta} x_{j_beta}
                          + sum_{beta=k-s}^{k-1} x_{m+beta} b_{s+1+beta}
                          + sum_beta b_beta x_{j_beta}
                          + x_{m+k} x_{gamma1} + b_k x_{gamma2} )

    where b are the bits of (t2, t1) and j runs over J then the isolated
    vertices.
    """
    q, m, k, s = params.q, params.m, params.k, params.s
    half = q // 2
    n = params.n_vars

    static_terms: dict[tuple[int, ...], int] = {}
    for beta in range(k):
        static_terms[tuple(sorted((m + beta, params.j_order[beta])))] = half
    static_terms[tuple(sorted((m + k, params.gamma1)))] = half
    static = (
        params.f.with_variables(n)
        + build_seed_function(params.h, m, q)
        + GeneralizedBooleanFunction(q, n, static_terms)
    )

    sets = []
    for t1 in range(1 << s):
        seqs = []
        for t2 in range(1 << (k + 1)):
            b = _bits(t2, k + 1) + _bits(t1, s)
            terms: dict[tuple[int, ...], int] = {}
            for beta in range(k - s, k):
                if b[s + 1 + beta]:
                    terms[(m + beta,)] = half
            for beta in range(k):
                if b[beta]:
                    terms[(params.j_order[beta],)] = (
                        terms.get((params.j_order[beta],), 0) + half
                    ) % q
            if b[k]:
                terms[(params.gamma2,)] = (terms.get((params.gamma2,), 0) + half) % q
            z = static + GeneralizedBooleanFunction(q, n, terms)
            seqs.append(psi(z))
        sets.append(
            ZczSequenceSet(
                sequences=tuple(seqs),
                K=params.set_size,
                Z=params.zcz_width,
                L=params.seq_length,
                label=t1,
            )
        )
    return MultipleZczFamily(
        params=params, sets=tuple(sets), Z=params.zcz_width, Zc=params.inter_zccz_width
    )


def union_family(family: MultipleZczFamily) -> ZczSequenceSet:
    """All sequences of the family as one set; the declared zone shrinks
    to the inter-set zone width."""
    seqs = tuple(z for st in family.sets for z in st.sequences)
    return ZczSequenceSet(
        sequences=seqs, K=len(seqs), Z=family.Zc, L=family.L, label=None
    )


@dataclass(frozen=True)
class ChunkDecompositionReport:
    """Direct periodic correlation versus its chunk-level assembly."""

    t1: int
    t1_other: int
    i: int
    j: int
    tau: int
    lhs: correlation.CorrelationValue
    rhs: correlation.CorrelationValue
    passed: bool


def check_chunk_decomposition(
    family: MultipleZczFamily,
    t1: int,
    t1_other: int,
    i: int,
    j: int,
    tau: int,
    codes=None,
) -> ChunkDecompositionReport:
    """Recompute one periodic correlation of the family from code-row
    correlations and seed-sign weights, and compare with the direct value.

    The right-hand side sums row-aligned aperiodic terms at shift tau plus
    boundary terms at shift L_chunk - tau weighted by
    (-1)^{h_c + h_{c+1}} sign pairs; chunk subscripts wrap mod 2^{k+2} and
    row subscripts mod 2^{k+1}.  Valid for 0 <= tau <= 2^m.
    """
    params = family.params
    if params is None:
        raise ValueError("family carries no construction parameters")
    if not 0 <= tau <= (1 << params.m):
        raise ValueError(f"tau must lie in [0, {1 << params.m}], got {tau}")
    l = 1 << (params.k + 1)
    n_chunks = 1 << (params.k + 2)
    chunk_len = 1 << params.m

    if codes is None:
        codes = build_ccc_family(params)
    rows_a = codes[t1][i].rows
    rows_b = codes[t1_other][j].rows
    hv = seed_polynomial(params.h).truth_table()
    sign = 1 - 2 * hv

    za = family.sets[t1].sequences[i]
    zb = family.sets[t1_other].sequences[j]
    lhs = correlation.pccf(za, zb, tau)

    rhs = correlation.CorrelationValue(0, 0, True)
    for nu in range(l):
        rhs = rhs + correlation.accf(rows_a[nu], rows_b[nu], tau).scaled(2)
    for nu in range(l):
        weight = int(
            sign[nu] * sign[(nu + 1) % n_chunks]
            + sign[(nu + l) % n_chunks] * sign[(nu + 1 + l) % n_chunks]
        )
        if weight:
            cross = correlation.accf(rows_b[(nu + 1) % l], rows_a[nu], chunk_len - tau)
            rhs = rhs + cross.conjugate().scaled(weight)
    return ChunkDecompositionReport(
        t1=t1,
        t1_other=t1_other,
        i=i,
        j=j,
        tau=tau,
        lhs=lhs,
        rhs=rhs,
        passed=lhs.matches(rhs),
    )


# ---------------------------------------------------------------------------
# on-disk family format: family/<t1>/<t2>.seq plus manifest.json

_HEADER_KEYS = ("q", "L", "Z", "Zc")


def _format_sequence_file(seq: UnimodularSequence, Z: int, Zc: int) -> str:
    lines = [f"q={seq.q}", f"L={len(seq)}", f"Z={Z}", f"Zc={Zc}"]
    lines.extend(str(int(e)) for e in seq.exponents)
    return "\n".join(lines) + "\n"


def _parse_sequence_file(text: str, path) -> tuple[UnimodularSequence, dict]:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if len(lines) < 4:
        raise ValueError(f"{path}: truncated sequence file")
    header = {}
    for key, ln in zip(_HEADER_KEYS, lines[:4]):
        name, _, value = ln.partition("=")
        if name != key:
            raise ValueError(f"{path}: expected header '{key}=', got {ln!r}")
        header[key] = int(value)
    exps = np.array([int(ln) for ln in lines[4:]], dtype=np.int64)
    if exps.size != header["L"]:
        raise ValueError(f"{path}: header says L={header['L']} but {exps.size} entries")
    return UnimodularSequence(header["q"], exps), header


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def export_family(
    family: MultipleZczFamily,
    directory,
    certificates: dict | None = None,
    command: str | None = None,
    extra: dict | None = None,
) -> dict:
    """Write the family directory and its manifest; returns the manifest."""
    root = Path(directory)
    root.mkdir(parents=True, exist_ok=True)
    digests = {}
    for t1, st in enumerate(family.sets):
        sub = root / str(t1)
        sub.mkdir(exist_ok=True)
        for t2, seq in enumerate(st.sequences):
            payload = _format_sequence_file(seq, family.Z, family.Zc).encode()
            (sub / f"{t2}.seq").write_bytes(payload)
            digests[f"{t1}/{t2}.seq"] = _sha256(payload)
    manifest = {
        "tool": "zczseq",
        "version": _tool_version(),
        "command": command,
        "declared": {
            "num_sets": len(family.sets),
            "set_size": family.sets[0].K,
            "length": family.L,
            "zcz": family.Z,
            "inter_zccz": family.Zc,
            "union_size": sum(st.K for st in family.sets),
        },
        "params": family.params.to_json_dict() if family.params else None,
        "files": digests,
        "certificates": certificates,
    }
    if extra:
        manifest.update(extra)
    (root / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return manifest


def _tool_version() -> str:
    from . import __version__

    return __version__


@dataclass(frozen=True)
class LoadedFamily:
    """A family read back from disk; params present when the manifest
    carried them."""

    sets: tuple[tuple[UnimodularSequence, ...], ...]
    q: int
    L: int
    Z: int
    Zc: int
    params: ConstructionParams | None
    manifest: dict | None

    def as_family(self) -> MultipleZczFamily:
        return MultipleZczFamily(
            params=self.params,
            sets=tuple(
                ZczSequenceSet(
                    sequences=st, K=len(st), Z=self.Z, L=self.L, label=t1
                )
                for t1, st in enumerate(self.sets)
            ),
            Z=self.Z,
            Zc=self.Zc,
        )


def load_family(directory) -> LoadedFamily:
    """Read a family directory written by :func:`export_family`."""
    root = Path(directory)
    if not root.is_dir():
        raise FileNotFoundError(f"{root} is not a directory")
    set_dirs = sorted(
        (p for p in root.iterdir() if p.is_dir() and p.name.isdigit()),
        key=lambda p: int(p.name),
    )
    if not set_dirs:
        raise ValueError(f"{root} holds no sequence-set subdirectories")
    sets = []
    header = None
    for sub in set_dirs:
        files = sorted(
            (p for p in sub.glob("*.seq") if p.stem.isdigit()),
            key=lambda p: int(p.stem),
        )
        if not files:
            raise ValueError(f"{sub} holds no .seq files")
        seqs = []
        for path in files:
            seq, hdr = _parse_sequence_file(path.read_text(), path)
            if header is None:
                header = hdr
            elif hdr != header:
                raise ValueError(f"{path}: header disagrees with the rest of the family")
            seqs.append(seq)
        sets.append(tuple(seqs))
    manifest = None
    params = None
    manifest_path = root / "manifest.json"
    if manifest_path.exists():
        manifest = json.loads(manifest_path.read_text())
        if manifest.get("params"):
            params = ConstructionParams.from_json_dict(manifest["params"])
    return LoadedFamily(
        sets=tuple(sets),
        q=header["q"],
        L=header["L"],
        Z=header["Z"],
        Zc=header["Zc"],
        params=params,
        manifest=manifest,
    )
