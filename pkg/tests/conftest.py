"""Shared oracles and generators for the test suite.

The correlation oracles here are deliberately primitive pure-Python
double loops over independently converted complex entries, so they never
share code paths with the library's vectorized implementations.
"""

import cmath

from zczseq import ConstructionParams, HCoeffs, verify_inter_zccz, verify_zcz
from zczseq.gbf import GeneralizedBooleanFunction, UnimodularSequence


def seq_values_list(seq: UnimodularSequence) -> list[complex]:
    vals = []
    for idx in range(len(seq)):
        if seq.zero_mask is not None and seq.zero_mask[idx]:
            vals.append(0j)
            continue
        e = int(seq.exponents[idx])
        if seq.q == 1:
            vals.append(1 + 0j)
        elif seq.q == 2:
            vals.append(complex(1 - 2 * e))
        elif seq.q == 4:
            vals.append((1 + 0j, 1j, -1 + 0j, -1j)[e])
        else:
            vals.append(cmath.exp(2j * cmath.pi * e / seq.q))
    return vals


def naive_accf(a: UnimodularSequence, b: UnimodularSequence, u: int) -> complex:
    va, vb = seq_values_list(a), seq_values_list(b)
    L = len(va)
    if u >= 0:
        return sum((va[i] * vb[i + u].conjugate() for i in range(L - u)), 0j)
    return sum((va[i - u] * vb[i].conjugate() for i in range(L + u)), 0j)


def naive_circular(a: UnimodularSequence, b: UnimodularSequence, u: int) -> complex:
    va, vb = seq_values_list(a), seq_values_list(b)
    L = len(va)
    return sum((va[i] * vb[(i + u) % L].conjugate() for i in range(L)), 0j)


def random_sequence(rng, q: int, L: int, masked: bool = False) -> UnimodularSequence:
    exps = rng.integers(0, q, size=L)
    mask = None
    if masked:
        mask = rng.integers(0, 2, size=L).astype(bool)
        if mask.all():
            mask[0] = False
    return UnimodularSequence(q, exps, zero_mask=mask)


def random_gbf(rng, q: int, m: int, n_terms: int = 6) -> GeneralizedBooleanFunction:
    terms = {}
    for _ in range(n_terms):
        size = int(rng.integers(0, min(m, 3) + 1))
        idx = tuple(sorted(rng.choice(m, size=size, replace=False))) if size else ()
        terms[idx] = int(rng.integers(q))
    return GeneralizedBooleanFunction(q, m, terms)


def random_valid_params(
    rng, q: int, m: int, k: int, s: int, randomize_structure: bool = False
) -> ConstructionParams:
    """A construction input with randomized free coefficients: the base
    function keeps its mandatory path but gains random removable-vertex
    quadratics, linear terms, and a constant; the seed coefficients are
    random apart from the mandatory top coupling bit."""
    if randomize_structure:
        J = tuple(int(x) for x in rng.permutation(m - s)[: k - s])
        pi = tuple(int(x) for x in rng.permutation(m - k))
    else:
        J = tuple(range(k - s))
        pi = tuple(range(m - k))
    half = q // 2
    free = sorted(set(range(m - s)) - set(J))
    path = [free[p] for p in pi]
    terms: dict[tuple, int] = {}

    def add(key, coeff):
        coeff = (terms.get(key, 0) + coeff) % q
        if coeff:
            terms[key] = coeff
        else:
            terms.pop(key, None)

    for b in range(len(path) - 1):
        add(tuple(sorted((path[b], path[b + 1]))), half)
    for j in J:
        for w in range(m):
            if w != j and rng.integers(2):
                add(tuple(sorted((j, w))), int(rng.integers(1, q)))
    for v in range(m):
        add((v,), int(rng.integers(q)))
    add((), int(rng.integers(q)))
    f = GeneralizedBooleanFunction(q, m, terms)

    c = tuple(int(rng.integers(2)) for _ in range(k)) + (1,)
    d_pairs = tuple(
        (mu, nu)
        for mu in range(1, k + 1)
        for nu in range(mu + 1, k + 1)
        if rng.integers(2)
    )
    e = tuple(int(rng.integers(2)) for _ in range(k + 2))
    h = HCoeffs(c=c, d_pairs=d_pairs, e=e, e_prime=int(rng.integers(2)))
    return ConstructionParams(q=q, m=m, k=k, s=s, J=J, pi=pi, f=f, h=h)


def certify_family(family) -> tuple[bool, int]:
    """Run every per-set and inter-set certificate; returns (all passed,
    total violation count)."""
    ok = True
    violations = 0
    for st in family.sets:
        cert = verify_zcz(st.sequences, family.Z)
        ok &= cert.passed
        violations += len(cert.violations)
    n = len(family.sets)
    for a in range(n):
        for b in range(a + 1, n):
            rep = verify_inter_zccz(
                family.sets[a].sequences, family.sets[b].sequences, family.Zc
            )
            ok &= rep.passed
            violations += len(rep.violations)
    return ok, violations
