"""Acceptance suites.

Each criterion is a function returning a ``CriterionResult``; ``run_suite``
is what ``extlim verify`` and the acceptance tests call.  All comparisons
are exact integer equalities.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable

from . import dlim, fextcat, fgab, koszul, polyfunctors, samples, torlab
from .fgab import is_isomorphic, parse_group
from .presentation import FreePresentation, canonical_presentation, stabilize
from .zmat import IntMatrix, determinant, hnf, snf

SEED = 20240611


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    seconds: float
    limit: float
    failures: list[str] = field(default_factory=list)
    checks: int = 0

    @property
    def ok(self) -> bool:
        return self.passed and self.seconds < self.limit

    def line(self, timing: bool = False) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = f"; first failure: {self.failures[0]}" if self.failures else ""
        slow = "" if self.seconds < self.limit else f"; over the {self.limit:.0f} s limit"
        t = f", {self.seconds:.2f} s" if timing else ""
        return f"[{status}] criterion {self.number}: {self.name} ({self.checks} checks{t}){extra}{slow}"


class _Checker:
    def __init__(self):
        self.failures: list[str] = []
        self.count = 0

    def check(self, cond: bool, label: str) -> None:
        self.count += 1
        if not cond:
            self.failures.append(label)


def _run(number: int, name: str, limit: float, body: Callable[[_Checker], None]) -> CriterionResult:
    chk = _Checker()
    t0 = time.perf_counter()
    try:
        body(chk)
    except Exception as e:  # an exception is a failed criterion, reported as such
        chk.failures.append(f"{type(e).__name__}: {e}")
    dt = time.perf_counter() - t0
    return CriterionResult(number, name, not chk.failures, dt, limit, chk.failures, chk.count)


# ---------------------------------------------------------------------------
# 1. normal forms


def is_hermite(basis: IntMatrix, pivots) -> bool:
    cols = basis.to_columns()
    if len(cols) != len(pivots) or list(pivots) != sorted(set(pivots)):
        return False
    for j, (c, p) in enumerate(zip(cols, pivots)):
        if any(c[:p]) or c[p] <= 0:
            return False
        for k in range(j):
            if not 0 <= cols[k][p] < c[p]:
                return False
    return True


def is_smith_diagonal(D: IntMatrix) -> bool:
    diag = [D[i, i] for i in range(min(D.rows, D.cols))]
    for i in range(D.rows):
        for j in range(D.cols):
            if i != j and D[i, j]:
                return False
    if any(d < 0 for d in diag):
        return False
    nz = [d for d in diag if d]
    k = len(nz)
    if any(diag[i] == 0 for i in range(k)):
        return False  # zeros must trail
    return all(nz[i + 1] % nz[i] == 0 for i in range(k - 1))


def criterion_1(seed: int = SEED) -> CriterionResult:
    def body(c: _Checker):
        rng = random.Random(seed)
        for t in range(200):
            m, n = rng.randint(1, 6), rng.randint(1, 6)
            M = samples.random_matrix(rng, m, n, 10)
            dec = snf(M)
            c.check(abs(determinant(dec.U)) == 1, f"#{t}: U not unimodular")
            c.check(abs(determinant(dec.V)) == 1, f"#{t}: V not unimodular")
            c.check(dec.U @ M @ dec.V == dec.D, f"#{t}: D != U M V")
            c.check(is_smith_diagonal(dec.D), f"#{t}: divisibility chain broken")
            W = samples.random_unimodular(rng, n)
            W2 = samples.random_unimodular(rng, m)
            c.check(snf(W2 @ M @ W).diagonal() == dec.diagonal(), f"#{t}: Smith diagonal not invariant")
            h = hnf(M)
            c.check(is_hermite(h.basis, h.pivots), f"#{t}: not in Hermite form")
            c.check(hnf(M @ W).basis == h.basis, f"#{t}: Hermite basis not canonical")
            c.check(h.contains_lattice(M), f"#{t}: a column of M left the lattice")
            c.check(hnf(h.basis).basis == h.basis, f"#{t}: Hermite form not idempotent")
            c.check(sum(1 for d in dec.diagonal() if d) == h.rank, f"#{t}: ranks disagree")
    return _run(1, "normal-form core", 5.0, body)


# ---------------------------------------------------------------------------
# 2. Tor four ways


def criterion_2() -> CriterionResult:
    def body(c: _Checker):
        for expr, n in samples.tor_sample_set():
            A = parse_group(expr)
            p = canonical_presentation(A)
            results = {m: torlab.tor_bracket_by(m, A, n, p) for m in torlab.METHODS}
            ref = results["resolution"]
            for m, G in results.items():
                c.check(is_isomorphic(G, ref), f"{expr}, n={n}: {m} gives {G} vs {ref}")
            num = torlab.bracket_numerator(p, n)
            pre = torlab.equalizer_preimage(p, n)
            c.check(num.basis == pre.basis, f"{expr}, n={n}: equalizer preimage != numerator")
        c.check(fgab.format_group(torlab.tor_bracket(parse_group("Z/2"), 3)) == "Z/2",
                "Tor^[3](Z/2) != Z/2")
    return _run(2, "Tor four-way agreement", 60.0, body)


# ---------------------------------------------------------------------------
# 3. Koszul validity


def koszul_lattices(seed: int = SEED) -> list[FreePresentation]:
    """Presentations ``H ⊆ Z^N`` with ``N <= 4`` and corank ``<= 2``."""
    from .presentation import presentation_of_subgroup
    rng = random.Random(seed)
    out = []
    for N in range(1, 5):
        for corank in range(0, min(2, N) + 1):
            h = N - corank
            for _ in range(3):
                while True:
                    B = samples.random_matrix(rng, N, h, 3)
                    if hnf(B).rank == h:
                        break
                out.append(presentation_of_subgroup(N, B))
    return out


def criterion_3() -> CriterionResult:
    def body(c: _Checker):
        for p in koszul_lattices():
            for n in (1, 2, 3):
                for which, C in (("sp", koszul.koszul_sp(p, n)), ("lambda", koszul.koszul_lambda(p, n))):
                    c.check(C.is_complex(), f"N={p.rank}, H={p.inclusion.to_rows()}, n={n}: {which} d^2 != 0")
        for N in range(1, 5):
            for n in (1, 2, 3):
                for which in ("sp", "lambda"):
                    C = koszul.identity_koszul(N, n, which)
                    for i in range(n + 1):
                        c.check(fgab.homology_at(C, i).is_trivial(),
                                f"H = F, N={N}, n={n}: {which} homology in degree {i}")
    return _run(3, "Koszul validity", 30.0, body)


# ---------------------------------------------------------------------------
# 4. top-degree kernel formulas


def criterion_4() -> CriterionResult:
    def body(c: _Checker):
        seen = set()
        for expr, _ in samples.tor_sample_set():
            if expr in seen:
                continue
            seen.add(expr)
            p = canonical_presentation(parse_group(expr))
            for n in (2, 3):
                top_sp = koszul.derived_sp(p, n, n - 1)
                top_l = koszul.derived_lambda(p, n, n - 1)
                c.check(is_isomorphic(top_sp, koszul.top_derived_sp_via_kernel(p, n)),
                        f"{expr}, n={n}: SP kernel formula")
                c.check(is_isomorphic(top_l, koszul.top_derived_lambda_via_kernel(p, n)),
                        f"{expr}, n={n}: Λ kernel formula")
        p = canonical_presentation(parse_group("Z/2"))
        c.check(fgab.format_group(koszul.derived_lambda(p, 2, 1)) == "Z/2", "L1 Λ^2(Z/2) != Z/2")
        c.check(fgab.format_group(koszul.derived_sp(p, 2, 1)) == "0", "L1 SP^2(Z/2) != 0")
    return _run(4, "top-degree Koszul homology equals kernel formulas", 60.0, body)


# ---------------------------------------------------------------------------
# 5. presentation independence


def criterion_5() -> CriterionResult:
    def body(c: _Checker):
        for expr, n in samples.tor_sample_set():
            A = parse_group(expr)
            p = canonical_presentation(A)
            ref = torlab.tor_bracket(A, n)
            for k in (1, 2):
                q = stabilize(p, k)
                G, num = torlab.tor_bracket_intersection(q, n)
                c.check(is_isomorphic(G, ref), f"{expr}, n={n}, stabilize {k}: intersection")
                E, incl = torlab.equalizer_realization(q, n)
                c.check(is_isomorphic(E, ref), f"{expr}, n={n}, stabilize {k}: equalizer")
                c.check(num.basis == fgab.image_lattice(incl).basis,
                        f"{expr}, n={n}, stabilize {k}: preimage != numerator")
            if n > 3:
                continue
            for k in (1, 2):
                q = stabilize(p, k)
                for i in range(n + 1):
                    c.check(is_isomorphic(koszul.derived_sp(p, n, i), koszul.derived_sp(q, n, i)),
                            f"{expr}: L{i} SP^{n} changes under stabilize {k}")
                    c.check(is_isomorphic(koszul.derived_lambda(p, n, i), koszul.derived_lambda(q, n, i)),
                            f"{expr}: L{i} Λ^{n} changes under stabilize {k}")
    return _run(5, "presentation independence", 120.0, body)


# ---------------------------------------------------------------------------
# 6. derived limits


def parallel_pair_fixture() -> dlim.AbDiagram:
    C = dlim.fincat_build(["a", "b"], [("f", "a", "b"), ("g", "a", "b")])
    Z = fgab.free_group(1)
    return dlim.AbDiagram(C, {"a": Z, "b": Z}, {
        "f": fgab.identity(Z),
        "g": fgab.AbHom(Z, Z, IntMatrix.from_rows([[-1]])),
    })


def criterion_6(seed: int = SEED) -> CriterionResult:
    def body(c: _Checker):
        rng = random.Random(seed)
        zoo = [s for s in samples.category_zoo() if len(s.build()) <= 8]
        for t in range(30):
            spec = zoo[t % len(zoo)]
            D = samples.random_diagram(rng, spec)
            data = dlim.cochain_data(D, 2)
            _, incl = fgab.kernel(data.coboundaries[0])
            c.check(fgab.image_lattice(incl).basis == dlim.compatible_families_lattice(D).basis,
                    f"#{t} ({spec.name}): lim^0 != compatible families")
            for m in range(2):
                prod = data.coboundaries[m + 1].matrix @ data.coboundaries[m].matrix
                c.check(prod.is_zero(), f"#{t} ({spec.name}): δδ != 0 in degree {m}")
            for n in (0, 1, 2):
                c.check(is_isomorphic(dlim.lim_n(D, n), dlim.lim_n(D, n, normalized=False)),
                        f"#{t} ({spec.name}): normalized and full lim^{n} differ")
        for t in range(50):
            s = samples.random_ses(rng)
            rep = dlim.six_term_check(s.D1, s.D2, s.D3, s.eta, s.eps)
            c.check(rep.ok, f"six-term #{t} ({s.kind}) not exact at {rep.exact}")
        for t, D in enumerate(samples.coequalizer_instances(rng, 20)):
            c.check(dlim.coequalizer_vanishing_check(D), f"coequalizer instance #{t}: hypothesis check failed")
            c.check(dlim.lim_n(D, 1).is_trivial(), f"coequalizer instance #{t}: lim^1 != 0")
        D = parallel_pair_fixture()
        c.check(fgab.format_group(dlim.lim_n(D, 1)) == "Z/2", "parallel pair lim^1 != Z/2")
        c.check(fgab.format_group(dlim.lim_n(D, 0)) == "0", "parallel pair lim^0 != 0")
    return _run(6, "derived-limit machinery", 120.0, body)


# ---------------------------------------------------------------------------
# 7. extension-category shadows


def criterion_7() -> CriterionResult:
    def body(c: _Checker):
        for expr in samples.TOR_SAMPLES:
            A = parse_group(expr)
            p = canonical_presentation(A)
            q = stabilize(p, 1)
            for k in (0, 1, 2):
                tag = fextcat.FunctorTag("tensor_with_free", k, A)
                for (x, y) in ((p, p), (p, q), (q, q)):
                    mono = fextcat.coproduct_monomorphism(tag, x, y)
                    c.check(mono == (k >= 1), f"{expr}, k={k}, ranks {x.rank},{y.rank}: monomorphism={mono}")
                rep = fextcat.coproduct_vanishing_probe(
                    A, tag, {"objects": ["canonical", "coproduct(0,0)"], "morphisms": ["iota1", "iota2"]})
                want = "vanishes" if k >= 1 else "not applicable"
                c.check(rep.status == want, f"{expr}, k={k}: probe says {rep.status}")
        recipe = {"objects": ["canonical", "double(0)"], "morphisms": ["f1(0)", "f2(0)"]}
        for expr, n in samples.tor_sample_set():
            A = parse_group(expr)
            D = fextcat.truncated_diagram(A, fextcat.FunctorTag("tensor_quot", n), recipe)
            L, proj = dlim.lim(D)
            c.check(is_isomorphic(L, torlab.tor_bracket(A, n)), f"{expr}, n={n}: lim != Tor^[n]")
            num = torlab.bracket_numerator(canonical_presentation(A), n)
            c.check(fgab.image_lattice(proj["o0"]).basis == num.basis,
                    f"{expr}, n={n}: lim image != numerator lattice")
    return _run(7, "extension-category shadows", 60.0, body)


# ---------------------------------------------------------------------------
# 8. obstruction cocycle


def criterion_8(seed: int = SEED) -> CriterionResult:
    def body(c: _Checker):
        rng = random.Random(seed)
        for a, b in samples.witness_samples():
            A, B = samples.parse_pair(a, b)
            w = samples.tor_witness(A, B)
            r = dlim.obstruction_cocycle(*w.args())
            c.check(all(r.is_cocycle), f"Tor witness {a}, {b}: δ²a² != 0")
            if w.H2.ngens == 0:
                c.check(all(not any(v) for v in r.cocycles), f"{a}, {b}: H2 = 0 but cocycle nonzero")
            shift = lambda x, w=w: [1] + [0] * (w.F1.objects[x].ngens - 1) if w.F1.objects[x].ngens else []
            r2 = dlim.obstruction_cocycle(*w.args(), s_shift=shift)
            for u, v in zip(r.cocycles, r2.cocycles):
                diff = [x - y for x, y in zip(u, v)]
                c.check(dlim.is_coboundary(r.data, diff), f"{a}, {b}: class depends on sections")
            for H1 in ("Z/2", "Z+Z/4"):
                ws = samples.split_witness(A, B, parse_group(H1), rng)
                rs = dlim.obstruction_cocycle(*ws.args())
                c.check(all(rs.is_cocycle), f"split {a}, {b}, {H1}: δ²a² != 0")
                c.check(all(rs.class_is_zero), f"split {a}, {b}, {H1}: class is nonzero")
    return _run(8, "obstruction cocycle", 30.0, body)


# ---------------------------------------------------------------------------
# 9. Γ/SP duality and invariants


def criterion_9(seed: int = SEED) -> CriterionResult:
    def body(c: _Checker):
        rng = random.Random(seed)
        for t in range(40):
            M = samples.random_matrix(rng, rng.randint(1, 4), rng.randint(1, 4), 4)
            for n in (1, 2, 3):
                lhs = polyfunctors.gamma_map(M, n)
                rhs = polyfunctors.sp_map(M.transpose(), n).transpose()
                c.check(lhs == rhs, f"#{t}, n={n}: Γ map != transpose of SP map")
        for r in range(1, 5):
            for n in (1, 2, 3):
                g = hnf(polyfunctors.gamma_to_invariants(r, n))
                c.check(g.basis == polyfunctors.invariants_subgroup(r, n).basis,
                        f"r={r}, n={n}: Γ image != invariants")
    return _run(9, "Γ/SP duality and Γ = invariants", 10.0, body)


CRITERIA: dict[int, Callable[[], CriterionResult]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9,
}

SUITES = {
    "all": list(CRITERIA),
    "zmat": [1],
    "tor": [2, 5],
    "koszul": [3, 4, 9],
    "dlim": [6, 8],
    "fextcat": [7],
}


def run_suite(name: str = "all") -> list[CriterionResult]:
    if name in SUITES:
        nums = SUITES[name]
    elif name.isdigit() and int(name) in CRITERIA:
        nums = [int(name)]
    else:
        raise KeyError(name)
    return [CRITERIA[k]() for k in nums]
