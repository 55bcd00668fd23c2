"""End-to-end acceptance checks, one test per criterion.

Each test records a ``[PASS]``/``[FAIL]`` line with its runtime; the lines are
printed in the terminal summary of ``pytest -v``.  Run this file directly to
print them without pytest.
"""

import json
import math
import time
from contextlib import contextmanager
from fractions import Fraction

import numpy as np

from conftest import ACCEPTANCE_LINES, random_poly
from jacoscope import cli, corpus
from jacoscope.compactify import (PlanarField, bendixson, bendixson_hamiltonian, compare_fields,
                                  hamiltonian, hamiltonian_field, infinite_singular_free, inverted_criterion)
from jacoscope.criteria import inverted_maxima, scaling_sandwich
from jacoscope.criteria.algebraic import rational_unit_vector
from jacoscope.criteria.properness import circle_minima
from jacoscope.dynamics import Circle, index_record, integrate, monodromy_probe
from jacoscope.dynamics.index import polyline_from_trace
from jacoscope.oracle import search
from jacoscope.parser import parse_map, print_poly
from jacoscope.polycore import Poly

x, y = Poly.variables(2)
F11 = corpus.get("example-1.1").load()
TRIANGULAR = corpus.get("triangular").load()


@contextmanager
def criterion(number: int, title: str, limit: float | None = None):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        within = limit is None or elapsed < limit
        budget = f" limit {limit:g}s" if limit is not None else ""
        tag = "PASS" if ok and within else "FAIL"
        line = f"[{tag}] AC{number:02d} {title} ({elapsed:.2f}s{budget})"
        ACCEPTANCE_LINES.append(line)
        print(line)
    assert within, f"AC{number} took {elapsed:.2f}s, limit {limit}s"


def angles_after_inversion(X: PlanarField, points: np.ndarray) -> np.ndarray:
    B = bendixson(X)
    P, Q = X.p.compile(), X.q.compile()
    BU, BV = B.p.compile(), B.q.compile()
    zx, zy = points[:, 0], points[:, 1]
    r2 = zx * zx + zy * zy
    a = (zy * zy - zx * zx) / r2**2
    b = -2 * zx * zy / r2**2
    px, py = P(zx, zy), Q(zx, zy)
    wx, wy = a * px + b * py, b * px - a * py
    bx, by = BU(zx / r2, zy / r2), BV(zx / r2, zy / r2)
    return np.abs(np.arctan2(wx * by - wy * bx, wx * bx + wy * by))


def relative_spread(values: np.ndarray) -> float:
    return float(np.ptp(values) / np.max(np.abs(values)))


def test_ac01_worked_example_end_to_end(capsys):
    with criterion(1, "worked example reproduced by check", 10.0):
        code = cli.main(["check", "corpus:example-1.1"])
        report = json.loads(capsys.readouterr().out)
        chain = {c["name"]: c for c in report["chain"]}
        assert code == 0
        det = chain["jacobian"]["certificate"]["det"]
        assert det == "-3*y^4 - 4*y^2 - 1"
        assert parse_map(f"d = {det}; e = y")[0] == -(1 + y**2) * (1 + 3 * y**2)
        H = hamiltonian_field(F11)
        assert H.q == x + 2 * x * y**2 + x * y**4
        assert H.p == -(y + 2 * y * (x**2 + 2 * y**2) + y**3 * (2 * x**2 + 3 * y**2))
        props = chain["properness"]
        assert props["certificate"]["tier1"]["I"] == print_poly((x**2 + y**2) * (1 + y**2) ** 2)
        assert chain["braun"]["status"] == "fails"
        assert chain["braun"]["certificate"]["witness_direction"] == ["1", "0"]
        cima = chain["cima"]
        assert cima["status"] == "fails" and len(cima["certificate"]["tried"]) == 23
        assert all(t["F_s"] == ["y^3", "x*y^2"] for t in cima["certificate"]["tried"])
        assert (props["status"], props["exactness"]) == ("holds", "numeric")
        assert props["certificate"]["tier2"]["verdict"] == "holds"
        assert report["verdict"]["outcome"] == "Injective"


def test_ac02_pushforward_parallelism():
    with criterion(2, "inverted field parallel to pushforward", 5.0):
        rng = np.random.default_rng(20240611)
        fields = [hamiltonian_field(F11)]
        while len(fields) < 6:
            d = int(rng.integers(1, 5))
            f = PlanarField(random_poly(rng, d), random_poly(rng, d))
            if f.degree >= 1:
                fields.append(f)
        for X in fields:
            r = rng.uniform(0.1, 10.0, 400)
            th = rng.uniform(0, 2 * np.pi, 400)
            pts = np.stack([r * np.cos(th), r * np.sin(th)], axis=1)
            P, Q = X.p.compile(), X.q.compile()
            norms = np.hypot(P(pts[:, 0], pts[:, 1]), Q(pts[:, 0], pts[:, 1]))
            pts = pts[norms > 1e-6 * norms.max()][:200]
            assert len(pts) == 200
            assert angles_after_inversion(X, pts).max() < 1e-9


def test_ac03_closed_form_equals_composition():
    with criterion(3, "closed form equals inversion of the Hamiltonian field"):
        for name in corpus.MAP_NAMES:
            F = corpus.get(name).load()
            assert compare_fields(bendixson(hamiltonian_field(F)), bendixson_hamiltonian(F)).equal_after_normalization


def test_ac04_no_singular_points_at_infinity():
    with criterion(4, "no singular points at infinity"):
        names = corpus.nonsingular_maps()
        assert "example-1.1" in names and "identity" in names
        for name in names:
            cert = infinite_singular_free(corpus.get(name).load())
            assert cert.free and cert.roots_U == 0 and cert.roots_V == 0
        ru = infinite_singular_free(F11).restriction_U
        lead = ru[-1]
        assert lead > 0
        assert Poly.from_univariate(ru, 0, 2) == lead * (1 + x**2) ** 6


def test_ac05_conservation():
    with criterion(5, "first integrals conserved along orbits", 30.0):
        rng = np.random.default_rng(7)
        X = hamiltonian_field(F11)
        H = hamiltonian(F11).compile()
        for _ in range(10):
            p0 = rng.uniform(-1.5, 1.5, 2)
            tr = integrate(X, p0, 10.0, tol=1e-12, detect_closure=False)
            assert relative_spread(H(tr.points[:, 0], tr.points[:, 1])) <= 1e-6
        B = bendixson_hamiltonian(F11)
        num, den = (p.compile() for p in inverted_criterion(F11))
        for _ in range(10):
            r, th = rng.uniform(0.3, 1.5), rng.uniform(0, 2 * np.pi)
            tr = integrate(B, (r * math.cos(th), r * math.sin(th)), 10.0, tol=1e-12, detect_closure=False)
            u, v = tr.points[:, 0], tr.points[:, 1]
            assert relative_spread(num(u, v) / den(u, v)) <= 1e-6


def test_ac06_monodromy_agrees_with_criteria():
    with criterion(6, "monodromy probes agree with the verdicts", 60.0):
        for name in ("example-1.1", "identity", "triangular"):
            rep = monodromy_probe(bendixson_hamiltonian(corpus.get(name).load()))
            assert rep.verdict == "Monodromic", name
        assert monodromy_probe(corpus.get("saddle-field").field()).verdict == "NotMonodromic"


def test_ac07_index_suite():
    with criterion(7, "index suite"):
        unit = Circle((0.0, 0.0), 1.0)
        cases = [(PlanarField(-y, x), 1), (PlanarField(x, -y), -1), (PlanarField(x**2 - y**2, 2 * x * y), 2)]
        for X, k in cases:
            rec = index_record(X, unit)
            assert rec.index == k
            assert abs(rec.total_angle - 2 * math.pi * k) < 1e-3
        X = PlanarField(x**2 - 1, y)
        parts = [index_record(X, Circle((c, 0.0), 0.5)).index for c in (-1.0, 1.0)]
        assert index_record(X, Circle((0.0, 0.0), 3.0)).index == sum(parts)
        X = hamiltonian_field(F11)
        tr = integrate(X, (0.6, 0.0), 100.0, tol=1e-11)
        assert tr.termination == "closed"
        rec = index_record(X, polyline_from_trace(tr.points))
        assert rec.index == 1 and abs(rec.total_angle - 2 * math.pi) < 1e-3


def test_ac08_inverted_and_direct_views_agree():
    with criterion(8, "inverted maxima and direct minima agree"):
        ks = list(range(1, 13))
        for F in (F11, TRIANGULAR):
            maxima = inverted_maxima(F, ks)
            minima, _ = circle_minima(F, [2.0**k for k in ks])
            small = [m < 1e-6 for m in maxima]
            large = [m > 1e6 for m in minima]
            assert small == large
        # the worked example crosses the threshold inside the range
        assert any(m < 1e-6 for m in inverted_maxima(F11, ks))


def test_ac09_collision_oracle():
    with criterion(9, "collision oracle", 20.0):
        rep = search(parse_map("f = x^2; g = y"), box=2.0, resolution=201)
        assert rep.witnesses and rep.witnesses[0].image_residual < 1e-12
        for name in ("example-1.1", "identity"):
            assert search(corpus.get(name).load(), resolution=201).witnesses == []


def test_ac10_scaling_sandwich_exact():
    with criterion(10, "weighted scaling sandwich (exact)"):
        rng = np.random.default_rng(11)
        for _ in range(100):
            n = int(rng.integers(2, 6))
            s = [int(v) for v in rng.integers(1, 9, n)]
            yv = rational_unit_vector(n, rng)
            for k in range(1, 21):
                lower_ok, upper_ok, total = scaling_sandwich(s, yv, Fraction(1, 2**k))
                assert lower_ok and upper_ok and isinstance(total, Fraction)


if __name__ == "__main__":
    import io
    import sys
    from contextlib import redirect_stdout

    class _Capsys:
        def __init__(self):
            self.buf = io.StringIO()

        def readouterr(self):
            out = self.buf.getvalue()
            self.buf = io.StringIO()
            return type("R", (), {"out": out, "err": ""})()

    failed = 0
    for name, fn in sorted((k, v) for k, v in dict(globals()).items() if k.startswith("test_ac")):
        try:
            if "capsys" in fn.__code__.co_varnames[:fn.__code__.co_argcount]:
                cap = _Capsys()
                with redirect_stdout(cap.buf):
                    fn(cap)
                print(ACCEPTANCE_LINES[-1])
            else:
                fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
