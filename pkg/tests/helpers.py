"""Shared instance builders for the test suite."""
import random
from pathlib import Path

from kinets.io import POLYNOMIAL, RATIONAL, STATIC, GenSpec, gen_instance, read_instance
from kinets.poly import Poly

DATA = Path(__file__).parent / "data"

# the seven points used by several worked examples; (0,0), (1,1), (4,4) are collinear
SEVEN = [(0, 0), (4, 4), (4, 0), (0, 4), (1, 1), (4, 1), (1, 4)]


def figure1():
    return read_instance(DATA / "figure1.json").moving_1d()


def planar(n, seed, spread=1000):
    """Seeded general-position planar point set."""
    return gen_instance(GenSpec(2, n, STATIC, 0, seed, spread=spread)).point_set()


def corpus_1d(count=200, seed=0):
    """Seeded 1D instances with n <= 6 and beta <= 2, mixing polynomial and rational motion.

    Small coefficient ranges make coincidences inside [0, oo) common.
    """
    rng = random.Random(seed)
    out = []
    for k in range(count):
        n = rng.randint(1, 6)
        beta = rng.randint(1, 2)
        mode = POLYNOMIAL if k % 2 == 0 else RATIONAL
        spec = GenSpec(1, n, mode, beta, seed * 100_000 + k, coef_range=5, spread=6)
        out.append(gen_instance(spec).moving_1d())
    return out


def random_poly(rng, deg, c=5):
    while True:
        p = Poly([rng.randint(-c, c) for _ in range(deg + 1)])
        if not p.is_zero():
            return p


# acceptance results: criterion number -> list of (ok, detail); printed by conftest
RESULTS = {}


def record(criterion, ok, detail=""):
    RESULTS.setdefault(criterion, []).append((bool(ok), detail))
    print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} {detail}")
    return ok
