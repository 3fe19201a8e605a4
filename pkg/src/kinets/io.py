"""Instance and report files, and the seeded instance generator.

Every number in a file is a decimal string: integers as "-12", rationals as
"3/4".  Reports are written with sorted keys so that reruns with the same
inputs and seed are byte-identical.
"""
from __future__ import annotations

import hashlib
import json
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import IdenticalPoints, ParseError, ResampleLimit, SpecInvalid
from .geometry import PointSet, static_general_position
from .kinetic import MovingScalarSet, check_identical
from .poly import Poly, RationalFunction

STATIC = "STATIC"
POLYNOMIAL = "POLYNOMIAL"
RATIONAL = "RATIONAL"
MODES = (STATIC, POLYNOMIAL, RATIONAL)
RESAMPLE_TRIES = 1000

_INT = re.compile(r"-?\d+\Z")
_RAT = re.compile(r"-?\d+(/\d+)?\Z")


# ---------------------------------------------------------------------------
# numbers


def num_str(x) -> str:
    """Decimal string of an int or Fraction ("p/q" when not integral)."""
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    return str(Fraction(x))


def parse_int(s, where: str) -> int:
    if not isinstance(s, str) or not _INT.match(s):
        raise ParseError(f"{where}: expected a decimal integer string, got {s!r}", at=where)
    return int(s)


def parse_rational(s, where: str) -> Fraction:
    if not isinstance(s, str) or not _RAT.match(s):
        raise ParseError(f"{where}: expected a decimal rational string, got {s!r}", at=where)
    return Fraction(s)


def poly_json(p: Poly) -> list:
    return [str(c) for c in (p.coeffs or (0,))]


def ratfun_json(f: RationalFunction) -> dict:
    return {"num": poly_json(f.num), "den": poly_json(f.den)}


# ---------------------------------------------------------------------------
# instances


@dataclass
class InstanceFile:
    d: int
    mode: str
    points: list  # (id, [RationalFunction] * d)
    beta: int = 0
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.mode not in MODES:
            raise SpecInvalid(f"unknown mode {self.mode!r}")
        self.beta = max((f.beta() for _, fs in self.points for f in fs), default=0)

    @property
    def ids(self) -> list:
        return [pid for pid, _ in self.points]

    def to_json(self) -> dict:
        out = {
            "format": "kinets-instance",
            "d": str(self.d),
            "mode": self.mode,
            "beta": str(self.beta),
            "points": [{"id": pid, "coords": [ratfun_json(f) for f in fs]} for pid, fs in self.points],
        }
        if self.provenance:
            out["provenance"] = {k: str(v) for k, v in sorted(self.provenance.items())}
        return out

    def dumps(self) -> str:
        return dumps(self.to_json())

    # -- views
    def point_set(self) -> PointSet:
        """Static coordinates as a PointSet (the instance must be static)."""
        if self.mode != STATIC:
            raise SpecInvalid("a static command needs a STATIC instance")
        pts = []
        for pid, fs in self.points:
            pts.append(tuple(Fraction(f.num.coeffs[0] if f.num.coeffs else 0, f.den.coeffs[0]) for f in fs))
        return PointSet(self.d, pts, ids=self.ids)

    def moving_1d(self) -> MovingScalarSet:
        if self.d != 1:
            raise SpecInvalid(f"expected a 1-dimensional instance, got d={self.d}")
        return MovingScalarSet([(pid, fs[0]) for pid, fs in self.points])

    def moving_2d(self):
        from .weaknet import MovingPointSet2D

        if self.d != 2:
            raise SpecInvalid(f"expected a 2-dimensional instance, got d={self.d}")
        if self.mode == RATIONAL and not all(f.is_polynomial() for _, fs in self.points for f in fs):
            raise SpecInvalid("the weak-net construction needs polynomial motion")
        return MovingPointSet2D([(pid, (fs[0].as_poly(), fs[1].as_poly())) for pid, fs in self.points])


def _parse_poly(v, where: str) -> Poly:
    if not isinstance(v, list) or not v:
        raise ParseError(f"{where}: expected a nonempty coefficient list", at=where)
    return Poly(parse_int(c, f"{where}[{k}]") for k, c in enumerate(v))


def instance_from_json(data) -> InstanceFile:
    if not isinstance(data, dict):
        raise ParseError("instance: expected an object", at="$")
    for key in ("d", "mode", "points"):
        if key not in data:
            raise ParseError(f"instance: missing field {key!r}", at=key)
    d = parse_int(data["d"], "d")
    if d < 1:
        raise ParseError("d: must be at least 1", at="d")
    mode = data["mode"]
    if mode not in MODES:
        raise ParseError(f"mode: expected one of {MODES}, got {mode!r}", at="mode")
    if not isinstance(data["points"], list):
        raise ParseError("points: expected a list", at="points")
    pts = []
    seen = set()
    for k, p in enumerate(data["points"]):
        where = f"points[{k}]"
        if not isinstance(p, dict) or "id" not in p or "coords" not in p:
            raise ParseError(f"{where}: expected an object with id and coords", at=where)
        pid = p["id"]
        if not isinstance(pid, str) or pid in seen:
            raise ParseError(f"{where}.id: ids must be unique strings", at=f"{where}.id")
        seen.add(pid)
        coords = p["coords"]
        if not isinstance(coords, list) or len(coords) != d:
            raise ParseError(f"{where}.coords: expected {d} coordinates", at=f"{where}.coords")
        fs = []
        for c, f in enumerate(coords):
            cw = f"{where}.coords[{c}]"
            if not isinstance(f, dict) or "num" not in f:
                raise ParseError(f"{cw}: expected an object with num (and den)", at=cw)
            num = _parse_poly(f["num"], cw + ".num")
            den = _parse_poly(f.get("den", ["1"]), cw + ".den")
            if den.is_zero():
                raise ParseError(f"{cw}.den: zero denominator", at=cw + ".den")
            if mode == STATIC and (num.degree() > 0 or den.degree() > 0):
                raise ParseError(f"{cw}: STATIC coordinates must be constants", at=cw)
            if mode == POLYNOMIAL and den.degree() > 0:
                raise ParseError(f"{cw}.den: POLYNOMIAL coordinates need den = [1]", at=cw + ".den")
            fs.append(RationalFunction(num, den))
        pts.append((pid, fs))
    prov = data.get("provenance", {})
    return InstanceFile(d, mode, pts, provenance=dict(prov))


def loads_instance(text: str) -> InstanceFile:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"line {e.lineno} column {e.colno}: {e.msg}", line=e.lineno, column=e.colno) from None
    return instance_from_json(data)


def read_instance(path) -> InstanceFile:
    with open(path, encoding="utf-8") as fh:
        return loads_instance(fh.read())


def write_text(path, text: str):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# reports


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def jsonable(x):
    """Numbers to decimal strings; tuples, sets and frozensets to lists."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, (int, Fraction)):
        return num_str(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (set, frozenset)):
        return sorted(jsonable(v) for v in x)
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, Poly):
        return poly_json(x)
    if isinstance(x, RationalFunction):
        return ratfun_json(x)
    if hasattr(x, "item"):  # numpy scalars
        return jsonable(x.item())
    raise TypeError(f"cannot serialize {type(x).__name__}")


@dataclass
class ReportFile:
    command: str
    inputs: dict
    outputs: dict
    metrics: dict
    verdicts: dict  # name -> bool
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    def to_json(self) -> dict:
        return {
            "format": "kinets-report",
            "command": self.command,
            "inputs": jsonable(self.inputs),
            "outputs": jsonable(self.outputs),
            "metrics": jsonable(self.metrics),
            "verdicts": {k: bool(v) for k, v in self.verdicts.items()},
            "passed": self.passed,
            "failures": jsonable(self.failures),
        }

    def dumps(self) -> str:
        return dumps(self.to_json())


def report_from_json(data) -> ReportFile:
    for key in ("command", "inputs", "outputs", "metrics", "verdicts"):
        if key not in data:
            raise ParseError(f"report: missing field {key!r}", at=key)
    return ReportFile(data["command"], data["inputs"], data["outputs"], data["metrics"],
                      dict(data["verdicts"]), list(data.get("failures", [])))


def digest(text: str) -> str:
    return "sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest()


# ---------------------------------------------------------------------------
# generator


@dataclass
class GenSpec:
    d: int
    n: int
    mode: str = STATIC
    beta: int = 0
    seed: int = 0
    coef_range: int = 20  # motion coefficients are drawn from [-coef_range, coef_range]
    spread: int = 1000  # constant terms are drawn from [-spread, spread]

    def validate(self):
        if self.mode not in MODES:
            raise SpecInvalid(f"unknown mode {self.mode!r}")
        if self.d < 1 or self.n < 1:
            raise SpecInvalid("d and n must be at least 1")
        if self.beta < 0 or self.coef_range < 1 or self.spread < 1:
            raise SpecInvalid("beta must be >= 0 and ranges >= 1")
        if self.mode == STATIC and self.beta != 0:
            raise SpecInvalid("STATIC instances have beta = 0")
        if self.mode != STATIC and self.beta < 1:
            raise SpecInvalid("moving instances need beta >= 1")
        if self.mode != STATIC and self.d > 2:
            raise SpecInvalid("moving instances are supported for d = 1 and d = 2")
        if self.mode == RATIONAL and self.d == 2:
            raise SpecInvalid("2-dimensional motion must be POLYNOMIAL")


def _random_poly(rng, beta, C, spread) -> Poly:
    return Poly([rng.randint(-spread, spread)] + [rng.randint(-C, C) for _ in range(beta)])


def _random_den(rng, beta, C) -> Poly:
    # a nonzero constant term keeps t = 0 defined
    c0 = rng.randint(1, C)
    return Poly([c0] + [rng.randint(-C, C) for _ in range(beta)])


def _draw(spec: GenSpec, rng) -> list:
    pts = []
    for k in range(spec.n):
        fs = []
        for _ in range(spec.d):
            if spec.mode == STATIC:
                fs.append(RationalFunction(Poly([rng.randint(-spec.spread, spec.spread)])))
            elif spec.mode == POLYNOMIAL:
                fs.append(RationalFunction(_random_poly(rng, spec.beta, spec.coef_range, spec.spread)))
            else:
                num = _random_poly(rng, spec.beta, spec.coef_range, spec.spread)
                fs.append(RationalFunction(num, _random_den(rng, spec.beta, spec.coef_range)))
        pts.append((f"p{k + 1}", fs))
    return pts


def _acceptable(spec: GenSpec, inst: InstanceFile) -> bool:
    if spec.mode == STATIC:
        P = inst.point_set()
        if len(set(P.points)) != len(P.points):
            return False
        return static_general_position(P)
    if spec.d == 1:
        try:
            check_identical(inst.moving_1d())
        except IdenticalPoints:
            return False
        return True
    from .weaknet import kinetic_general_position

    ok, _ = kinetic_general_position(inst.moving_2d())
    return ok


def gen_instance(spec: GenSpec, tries: int = RESAMPLE_TRIES) -> InstanceFile:
    """Seeded random instance, resampled until it passes the validators."""
    spec.validate()
    rng = random.Random(spec.seed)
    for attempt in range(tries):
        inst = InstanceFile(spec.d, spec.mode, _draw(spec, rng))
        if _acceptable(spec, inst):
            inst.provenance = {
                "seed": spec.seed,
                "attempts": attempt + 1,
                "coef_range": spec.coef_range,
                "spread": spec.spread,
                "requested_beta": spec.beta,
            }
            return inst
    raise ResampleLimit(f"no valid instance after {tries} draws", tries=tries)


def instance_from_points(points, ids: Optional[list] = None) -> InstanceFile:
    """STATIC instance from rational coordinate tuples."""
    ids = ids or [f"p{k + 1}" for k in range(len(points))]
    d = len(points[0])
    pts = [(pid, [RationalFunction(Poly([Fraction(c).numerator]), Poly([Fraction(c).denominator])) for c in p])
           for pid, p in zip(ids, points)]
    return InstanceFile(d, STATIC, pts)


def instance_from_functions(funcs, ids: Optional[list] = None) -> InstanceFile:
    """Moving instance from per-point coordinate lists of rational functions (or polynomials)."""
    ids = ids or [f"p{k + 1}" for k in range(len(funcs))]
    rows = [[f if isinstance(f, RationalFunction) else RationalFunction(f) for f in fs] for fs in funcs]
    d = len(rows[0])
    mode = POLYNOMIAL if all(f.is_polynomial() for fs in rows for f in fs) else RATIONAL
    if all(f.num.degree() <= 0 and f.den.degree() <= 0 for fs in rows for f in fs):
        mode = STATIC
    return InstanceFile(d, mode, list(zip(ids, rows)))
