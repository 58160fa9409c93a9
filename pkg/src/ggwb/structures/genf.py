"""Generalized F structures, the CRF integrability criterion, and CRFK."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

import sympy as sp

from ..calculus import EndoTM, frame
from ..courant import BigEndo, BigSection, big_frame, courant_bracket, nijenhuis_big
from ..errors import StructureError
from ..numeric import kernel_basis_at, rank_at
from ..symexpr import DEFAULT_POLICY, ScalarExpr, ZeroPolicy, is_zero_all, random_poly
from ..verdict import CheckResult, Verdict
from .genmetric import GenMetric


@dataclass
class GenF:
    """A g-skew endomorphism with Fcal^3 + Fcal = 0, optionally metric.

    When built from a quadruple (gamma, psi, F_plus, F_minus) the classical
    halves are kept so CRFK-type criteria can reach them.
    """

    Fcal: BigEndo
    G: Optional[GenMetric] = None
    F_plus: Optional[EndoTM] = None
    F_minus: Optional[EndoTM] = None

    @property
    def chart(self):
        return self.Fcal.chart

    @property
    def has_quadruple(self) -> bool:
        return self.G is not None and self.F_plus is not None and self.F_minus is not None


def _metric_F_defect(F: EndoTM, gamma) -> list[ScalarExpr]:
    """(Fmetric): gamma(FX, Y) + gamma(X, FY) = 0 and F^3 + F = 0."""
    chart = F.chart
    f = sp.Matrix([[e.expr for e in row] for row in F.matrix])
    g = sp.Matrix([[e.expr for e in row] for row in gamma.matrix])
    out = [ScalarExpr(e, chart) for e in f.T * g + g * f]
    out += [ScalarExpr(e, chart) for e in f * f * f + f]
    return out


def build_genF_from_quadruple(
    G: GenMetric,
    F_plus: EndoTM,
    F_minus: EndoTM,
    policy: ZeroPolicy = DEFAULT_POLICY,
) -> GenF:
    """Assemble Fcal acting as F_pm through the V_pm isomorphisms (the
    J_pm transfer formula with F_pm in place of J_pm)."""
    for name, F in (("F_plus", F_plus), ("F_minus", F_minus)):
        v = is_zero_all(_metric_F_defect(F, G.gamma), policy, f"(Fmetric) {name}")
        if not v.ok:
            raise StructureError(
                f"{name} is not a classical metric F structure for gamma",
                [(f"(Fmetric) {name}", v)],
            )
    fp = sp.Matrix([[e.expr for e in row] for row in F_plus.matrix])
    fm = sp.Matrix([[e.expr for e in row] for row in F_minus.matrix])
    c = G._frame_matrix
    m = c * sp.diag(fp, fm) * c.inv(method="LU")
    from ..calculus import tidy_trig

    m = m.applyfunc(lambda e: tidy_trig(G.chart, sp.cancel(e)).expr)
    return GenF(BigEndo(G.chart, m.tolist()), G, F_plus, F_minus)


def second_genF(genf: GenF) -> GenF:
    """The companion structure Fcal' = Gcal o Fcal <-> (gamma, psi, F_+, -F_-)."""
    if not genf.has_quadruple:
        raise StructureError("second structure needs the metric quadruple")
    return GenF(genf.G.Gcal @ genf.Fcal, genf.G, genf.F_plus, -genf.F_minus)


def check_gen_F(genf: GenF, policy: ZeroPolicy = DEFAULT_POLICY) -> CheckResult:
    """Algebraic axioms: g-skewness, Fcal^3 + Fcal = 0, and in the metric
    case (G-F) plus the transfer identity (eqJrond)."""
    out = CheckResult("gen_F")
    chart = genf.chart
    out.add("g-skewness of Fcal", is_zero_all(genf.Fcal.skew_defect(), policy))
    m = genf.Fcal._sym()
    out.add("Fcal^3 + Fcal = 0", is_zero_all(
        (ScalarExpr(e, chart) for e in m * m * m + m), policy))
    if genf.G is not None:
        gram = genf.G._gram
        out.add("(G-F) G(Fcal X, Y) + G(X, Fcal Y) = 0", is_zero_all(
            (ScalarExpr(e, chart) for e in m.T * gram + gram * m), policy))
    if genf.has_quadruple:
        exprs = []
        for sign, F in ((1, genf.F_plus), (-1, genf.F_minus)):
            for e in frame(chart):
                d = genf.Fcal(genf.G.section(e, sign)) - genf.G.section(F(e), sign)
                exprs.extend(d.components())
        out.add("(eqJrond) Fcal(X, flat X) = (F_pm X, flat F_pm X)", is_zero_all(exprs, policy))
    return out


def corank_and_negative_index(
    genf: GenF, policy: ZeroPolicy = DEFAULT_POLICY, n_points: int = 3
) -> tuple[int, int]:
    """Rank data of S = ker Fcal certified at sample points.

    corank = 2n - max rank of Fcal over the points; the negative index is the
    number of negative eigenvalues of the pairing restricted to the numeric
    kernel basis at the base point.
    """
    chart = genf.chart
    grid = genf.Fcal.matrix
    rng = policy.rng()
    points = [chart.base_point()] + [chart.sample_point(rng) for _ in range(n_points)]
    rank = max(rank_at(grid, pt, policy.tol) for pt in points)
    corank = 2 * chart.dim - rank
    base = chart.base_point()
    kernel = kernel_basis_at(grid, base, policy.tol)
    if kernel.shape[1] == 0:
        return corank, 0
    from ..courant import pairing_gram
    import numpy as np

    g0 = np.array(pairing_gram(chart).tolist(), dtype=float)
    gram = kernel.conj().T @ g0 @ kernel
    if np.abs(gram.imag).max() > policy.tol:
        raise StructureError("kernel pairing Gram is not real at the base point")
    eigs = np.linalg.eigvalsh(gram.real)
    neg = int((eigs < -policy.tol).sum())
    return corank, neg


def _spanning_L(genf: GenF) -> list[BigSection]:
    return [genf.Fcal(e) for e in big_frame(genf.chart)]


def check_gen_CRF(genf: GenF, policy: ZeroPolicy = DEFAULT_POLICY) -> CheckResult:
    """Integrability: N_Fcal(X, Y) = pr_S [X, Y] on a spanning set of
    L = im Fcal, with a scalar-invariance revalidation."""
    out = CheckResult("gen_CRF")
    chart = genf.chart
    m = genf.Fcal._sym()
    pr_s = BigEndo(chart, (sp.eye(2 * chart.dim) + m * m).tolist())
    span = _spanning_L(genf)
    exprs = []
    for i in range(len(span)):
        for j in range(i + 1, len(span)):
            d = nijenhuis_big(genf.Fcal, span[i], span[j]) - pr_s(
                courant_bracket(span[i], span[j])
            )
            exprs.extend(d.components())
    out.add("N_Fcal(X,Y) = pr_S [X,Y] on L", is_zero_all(exprs, policy))
    rng = random.Random(policy.seed + 211)
    f = random_poly(chart, rng)
    X = span[0]
    Y = next((s for s in span[1:] if any(not c.is_syntactic_zero for c in s.components())), span[-1])
    base = nijenhuis_big(genf.Fcal, X, Y) - pr_s(courant_bracket(X, Y))
    scaled = nijenhuis_big(genf.Fcal, X * f, Y) - pr_s(courant_bracket(X * f, Y))
    d = scaled - base * f
    out.add("scalar-invariance under X -> fX", is_zero_all(d.components(), policy))
    return out


def check_CRFK(genf: GenF, policy: ZeroPolicy = DEFAULT_POLICY) -> CheckResult:
    """CRFK criterion for a metric quadruple: both classical halves are CRF
    and the (CRFK6) identity holds on all frame triples."""
    from .classical import check_crf_endo

    if not genf.has_quadruple:
        raise StructureError("check_CRFK needs a quadruple-built structure")
    out = CheckResult("CRFK")
    for name, F in (("F_plus", genf.F_plus), ("F_minus", genf.F_minus)):
        sub = check_crf_endo(F, policy)
        out.add(f"classical CRF of {name}", sub.verdict)
    out.add("(CRFK6) identity", _crfk6(genf, policy))
    return out


def _crfk6(genf: GenF, policy: ZeroPolicy) -> Verdict:
    chart = genf.chart
    n = chart.dim
    syms_gamma = genf.G.gamma
    conn = syms_gamma.connection()
    dpsi = genf.G.dpsi
    dp = [
        [[dpsi.components[i][j][k].expr for k in range(n)] for j in range(n)]
        for i in range(n)
    ]
    g = [[e.expr for e in row] for row in syms_gamma.matrix]
    fr = frame(chart)
    exprs = []
    for sign, F in ((1, genf.F_plus), (-1, genf.F_minus)):
        f = [[e.expr for e in row] for row in F.matrix]
        f2 = (sp.Matrix(f) * sp.Matrix(f)).tolist()
        for i in range(n):
            nf = conn.nabla(fr[i], F)
            fnf = [[e.expr for e in row] for row in (F @ nf).matrix]
            for j in range(n):
                for k in range(n):
                    lhs = sum(g[l][k] * fnf[l][j] for l in range(n))
                    t1 = sum(dp[i][j][b] * f2[b][k] for b in range(n))
                    t2 = sum(
                        dp[i][a][b] * f[a][j] * f[b][k] for a in range(n) for b in range(n)
                    )
                    exprs.append(ScalarExpr(lhs - sp.Rational(sign, 2) * (t1 + t2), chart))
    return is_zero_all(exprs, policy, "(CRFK6)")
