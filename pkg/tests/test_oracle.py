import math

import pytest

from jacoscope import corpus
from jacoscope.oracle import exact_residual, grid_collision, refine_collision, search
from jacoscope.parser import parse_map

SQUARE = corpus.get("invalid-hypothesis").load()


def test_square_candidates_near_mirror_pair():
    cands = grid_collision(SQUARE, box=2.0, resolution=101)
    assert len(cands) > 0
    # the map identifies (a, b) with (-a, b); the best candidates are mirror images
    for p, q in cands.pairs[:20]:
        assert p[0] == pytest.approx(-q[0], abs=1e-12)
        assert p[1] == pytest.approx(q[1], abs=1e-12)


def test_identity_has_no_candidates():
    assert len(grid_collision(corpus.get("identity").load(), box=3.0, resolution=101)) == 0


def test_example_has_no_candidates():
    cands = grid_collision(corpus.get("example-1.1").load(), box=3.0, resolution=201)
    assert len(cands) == 0


def test_refine_square_witness():
    w = refine_collision(SQUARE, (1.01, 0.0), (-0.99, 0.0))
    assert w is not None
    assert w.image_residual < 1e-12
    assert w.separation >= 1e-4
    assert w.p[0] == pytest.approx(1.0, abs=1e-3) and w.q[0] == pytest.approx(-1.0, abs=1e-3)
    assert exact_residual(SQUARE, w.p, w.q) == w.image_residual


def test_refine_rejects_injective_pairs():
    F = corpus.get("example-1.1").load()
    assert refine_collision(F, (1.0, 0.5), (-1.0, 0.5)) is None
    assert refine_collision(F, (0.3, 0.0), (0.30001, 0.0)) is None


def test_search_square():
    rep = search(SQUARE, box=2.0, resolution=101)
    assert rep.witnesses
    for w in rep.witnesses:
        assert w.image_residual <= 1e-10
        assert math.dist(w.p, w.q) >= 1e-4
    d = rep.to_dict()["witnesses"][0]
    assert set(d) == {"p", "q", "residual", "separation"}


def test_search_silence_for_identity():
    rep = search(corpus.get("identity").load(), box=3.0, resolution=101)
    assert rep.witnesses == [] and rep.candidates == 0


def test_deterministic_candidates():
    a = grid_collision(SQUARE, box=2.0, resolution=61, bucket_size=0.01)
    b = grid_collision(SQUARE, box=2.0, resolution=61, bucket_size=0.01)
    assert a.pairs == b.pairs


def test_coarsening_warning():
    cands = grid_collision(SQUARE, box=2.0, resolution=201, max_points=2500)
    assert cands.resolution == 50
    assert cands.warnings


def test_three_variable_map():
    F = parse_map("f1 = x1^2; f2 = x2; f3 = x3")
    rep = search(F, box=1.5, resolution=21)
    assert rep.witnesses


def test_bad_resolution():
    with pytest.raises(ValueError):
        grid_collision(SQUARE, resolution=1)
