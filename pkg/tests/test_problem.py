import random

import pytest
from hypothesis import given, settings, strategies as st

from quiverbf.problem import ProblemError, ProblemFile, load, parse, render
from quiverbf.quiver import convert_weight

from _support import PROBLEMS, random_tree


def test_all_shipped_problems_parse():
    files = sorted(PROBLEMS.glob("*.txt"))
    assert len(files) >= 10
    for f in files:
        pf = load(f)
        assert parse(render(pf)) == pf


def test_comments_and_weight_kinds():
    pf = parse("""# D4
vertices 4
arrow a1: 1 -> 4   # first leg
arrow a2: 2 -> 4
arrow a3: 3 -> 4
beta 1 1 2 2
sigma 1 1 1 -2
""")
    assert pf.alphas() == [(1, 1, 1, 1)]
    assert pf.exponents() == (1,)


@pytest.mark.parametrize("text,line,needle", [
    ("vertices 2\nbogus 1\n", 2, "unknown keyword"),
    ("vertices 2\narrow a1 1 -> 2\nbeta 1 1\n", 2, "expected 'arrow"),
    ("vertices 2\narrow a1: 1 -> 2\nbeta 1\n", 3, "beta has 1 entries"),
    ("vertices 2\narrow a1: 1 -> 2\nbeta 1 1\nbeta 1 1\n", 4, "beta given twice"),
    ("vertices 2\narrow a1: 1 -> 2\nbeta 1 2\nalpha 1 0\n", 4, "sigma(beta) = -1"),
    ("vertices 2\narrow a1: 1 -> 2\nbeta 1 1\nalpha 1 0\nm 1 2\n", 5, "m has 2 entries"),
    ("vertices 2\narrow a1: 1 -> 2\nbeta x 1\n", 3, "expected an integer"),
    ("vertices 2\narrow a1: 1 -> 2\narrow a2: 2 -> 1\nbeta 1 1\n", 2, "cycle"),
])
def test_errors_carry_positions(text, line, needle):
    with pytest.raises(ProblemError) as exc:
        parse(text)
    assert exc.value.line == line
    assert needle in str(exc.value)


def test_missing_sections():
    with pytest.raises(ProblemError, match="missing 'vertices'"):
        parse("# empty\n")
    with pytest.raises(ProblemError, match="missing 'beta'"):
        parse("vertices 1\n")


@given(seed=st.integers(0, 10**6), n=st.integers(1, 6), kind=st.sampled_from(["alpha", "sigma", "alphastar"]))
@settings(max_examples=60, deadline=None)
def test_render_parse_round_trip(seed, n, kind):
    rng = random.Random(seed)
    Q = random_tree(n, rng)
    beta = tuple(rng.randint(0, 5) for _ in range(n))
    # a weight orthogonal to beta: sigma supported on two vertices, or zero
    sigma = [0] * n
    if n > 1:
        i, j = rng.sample(range(n), 2)
        sigma[i], sigma[j] = beta[j], -beta[i]
    w = convert_weight(Q, sigma=sigma)
    vec = {"alpha": w.alpha, "sigma": w.sigma, "alphastar": w.alphastar}[kind]
    m = (rng.randint(1, 3),) if rng.random() < 0.5 else None
    pf = ProblemFile(Q, beta, [(kind, vec)], m)
    again = parse(render(pf))
    assert again == pf
    assert again.sigmas() == [w.sigma]
