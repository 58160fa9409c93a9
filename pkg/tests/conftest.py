from __future__ import annotations

from fractions import Fraction

import pytest

from ggwb.calculus import (
    ChartManifold,
    EndoTM,
    MetricField,
    OneForm,
    TwoForm,
    VectorField,
    euclidean_metric,
    zero_twoform,
)
from ggwb.hypersurface import Embedding, second_fundamental_form
from ggwb.structures import AlmostContact, classical_lift
from ggwb.symexpr import ZeroPolicy


@pytest.fixture(scope="session")
def pol():
    """Light policy for unit tests; acceptance uses the spec defaults."""
    return ZeroPolicy(samples=16, seed=0)


@pytest.fixture(scope="session")
def R3():
    return ChartManifold("R3", ["x", "y", "z"])


@pytest.fixture(scope="session")
def s1(R3):
    return AlmostContact(
        EndoTM(R3, [[0, -1, 0], [1, 0, 0], [0, 0, 0]]),
        VectorField(R3, [0, 0, 1]),
        OneForm(R3, [0, 0, 1]),
        euclidean_metric(R3),
        name="S1",
    )


@pytest.fixture(scope="session")
def s2(R3):
    return AlmostContact(
        EndoTM(R3, [["0", "1", "0"], ["-1", "0", "0"], ["0", "y", "0"]]),
        VectorField(R3, [0, 0, 1]),
        OneForm(R3, ["-y", "0", "1"]),
        MetricField(R3, [["1+y^2", "0", "-y"], ["0", "1", "0"], ["-y", "0", "1"]]),
        name="S2",
    )


@pytest.fixture(scope="session")
def s3(R3):
    return AlmostContact(
        EndoTM(R3, [["0", "-exp(-z)", "0"], ["exp(z)", "0", "0"], ["0", "0", "0"]]),
        VectorField(R3, [0, 0, 1]),
        OneForm(R3, [0, 0, 1]),
        MetricField(R3, [["exp(z)", "0", "0"], ["0", "exp(-z)", "0"], ["0", "0", "1"]]),
        name="S3",
    )


@pytest.fixture(scope="session")
def t21_s1(s1, pol):
    return classical_lift(s1, None, pol, name="S1-lift")


@pytest.fixture(scope="session")
def t21_s2(s2, pol):
    return classical_lift(s2, None, pol, name="S2-lift")


@pytest.fixture(scope="session")
def t21_s3(s3, pol):
    return classical_lift(s3, None, pol, name="S3-lift")


# -- flat C^2 ambient data ---------------------------------------------------


@pytest.fixture(scope="session")
def C2():
    return ChartManifold("C2", ["x1", "y1", "x2", "y2"])


@pytest.fixture(scope="session")
def flat_c2(C2):
    gamma = euclidean_metric(C2)
    J = EndoTM(C2, [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])
    return {"chart": C2, "gamma": gamma, "J": J, "psi": zero_twoform(C2)}


@pytest.fixture(scope="session")
def hyperplane(flat_c2):
    domain = ChartManifold("N3", ["u1", "u2", "u3"])
    emb = Embedding(domain, flat_c2["chart"], ["u1", "u2", "u3", "0"], orientation=1)
    geo = second_fundamental_form(emb, flat_c2["gamma"], flat_c2["psi"])
    return {"embedding": emb, "geo": geo, **flat_c2}


@pytest.fixture(scope="session")
def sphere(flat_c2):
    domain = ChartManifold(
        "S3",
        ["a", "b", "c"],
        ranges={
            "a": (Fraction(1, 8), Fraction(3)),
            "b": (Fraction(1, 8), Fraction(3)),
            "c": (Fraction(1, 8), Fraction(6)),
        },
        base_point={"a": Fraction(5, 8), "b": Fraction(7, 8), "c": Fraction(9, 8)},
    )
    emb = Embedding(
        domain,
        flat_c2["chart"],
        ["cos(a)", "sin(a)*cos(b)", "sin(a)*sin(b)*cos(c)", "sin(a)*sin(b)*sin(c)"],
        orientation=1,
    )
    geo = second_fundamental_form(emb, flat_c2["gamma"], flat_c2["psi"])
    return {"embedding": emb, "geo": geo, **flat_c2}


@pytest.fixture(scope="session")
def s5_ctx(pol):
    from ggwb.workbench import load_builtin
    from ggwb.workbench.checks import ScenarioContext

    scenario = load_builtin("S5")
    scenario.policy = pol
    ctx = ScenarioContext(scenario)
    return ctx


@pytest.fixture(scope="session")
def s5_t21(s5_ctx):
    return s5_ctx.build(s5_ctx.scenario.structure("t21"))
