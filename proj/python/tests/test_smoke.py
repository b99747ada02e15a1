import math

import pytest

import orthowalk

FLAGSHIP = [
    ((1, 0, 0), 1),
    ((0, 1, 0), 1),
    ((0, 0, 1), 1),
    ((-1, 0, 0), 2),
    ((0, -1, 0), 2),
    ((0, 0, -1), 2),
]


def test_analyze_flagship():
    doc = orthowalk.analyze(FLAGSHIP)
    assert doc["projection"]["branch"] == "generic"
    assert doc["integer_projection"]["coefficients"] == [1, 1, 1]
    assert doc["analysis_1d"]["rho"] == pytest.approx(1 / (6 * math.sqrt(2)), abs=1e-12)
    assert doc["evaluation"]["values"]["D"] == pytest.approx(2.0, abs=1e-6)


def test_sample_is_reproducible():
    a = orthowalk.sample(FLAGSHIP, 20, 40, count=5, seed=3)
    b = orthowalk.sample(FLAGSHIP, 20, 40, count=5, seed=3)
    assert a["walks"] == b["walks"]
    assert a["counters"]["accepted"] == 5
    for walk in a["walks"]:
        assert 20 <= len(walk) <= 40
        pos = [0, 0, 0]
        for step in walk:
            pos = [p + s for p, s in zip(pos, step)]
            assert min(pos) >= 0


def test_naive_and_counts():
    assert orthowalk.count_orthant_walks(FLAGSHIP, 2) == [1, 3, 15]
    walks = orthowalk.naive(FLAGSHIP, 4, count=3, seed=1)["walks"]
    assert len(walks) == 3 and all(len(w) == 4 for w in walks)


def test_meander_counts_are_big_integers():
    counts = orthowalk.count_meanders([(1, 3), (-1, 6)], 40)
    assert counts[:4] == [1, 3, 27, 135]
    assert counts[40] > 2**64
    assert orthowalk.count_meanders([(1, 1), (-1, 1)], 6, excursions=True) == [1, 0, 1, 0, 2, 0, 5]


def test_verify_and_hull():
    report = orthowalk.verify(FLAGSHIP, 4, 500, seed=2)
    assert report["p_value"] > 0.001
    vertices, faces = orthowalk.convex_hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (0.1, 0.1, 0.1)])
    assert len(vertices) == 4 and len(faces) == 4


def test_errors_carry_codes():
    with pytest.raises(orthowalk.OrthowalkError, match="SpanViolation"):
        orthowalk.analyze([((1, 0, 0), 1), ((0, 1, 0), 1), ((0, 0, 1), 1)])
    with pytest.raises(orthowalk.OrthowalkError, match="AttemptsExhausted"):
        orthowalk.sample(FLAGSHIP, 95, 105, count=10, seed=1, max_attempts=1000)
