"""Scenario files: a flat key-value format with an optional [expectations]
block.  Unknown keys are rejected and parse errors cite line numbers."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .action import FamilyError, InitialData
from .polyalg import Polynomial

PRODUCTS = (
    "caustic",
    "levels",
    "maxwell",
    "premaxwell",
    "hotcool",
    "perestroika",
    "doublepoints",
    "zeta",
    "eta",
    "stats",
)

_KNOWN_KEYS = {
    "name",
    "dimension",
    "s0",
    "noise_direction",
    "epsilon",
    "seed",
    "t",
    "products",
    "levels_c",
    "lam_grid",
    "a_window",
    "eta_window",
    "t_range",
    "doublepoint_times",
    "h",
    "horizon",
    "n_paths",
    "zeta_a",
    "zeta_c",
    "stats_horizons",
    "lam_window",
    "value_tol",
}

_EXPECTATION_KEYS = {
    "perestroika_t",
    "eta_zero_t",
    "hotcool_point",
    "doublepoint_count",
    "cusp_count",
    "maxwell_b",
}


class ScenarioError(ValueError):
    def __init__(self, msg, line: int | None = None):
        super().__init__(f"line {line}: {msg}" if line is not None else msg)
        self.line = line


@dataclass
class Expectation:
    kind: str
    values: tuple
    tolerance: float
    raw: str
    line: int


@dataclass
class Scenario:
    name: str
    initial_data: InitialData
    seed: int = 0
    t: Fraction = Fraction(1)
    products: tuple = ()
    levels_c: tuple = (Fraction(0),)
    lam_grid: tuple = (Fraction(-2), Fraction(2), 81)
    lam_window: tuple = (Fraction(-100), Fraction(100))
    a_window: tuple = (Fraction(-5), Fraction(5))
    eta_window: tuple = (Fraction(1, 10**6), Fraction(5))
    t_range: tuple = (Fraction(1, 100), Fraction(10))
    doublepoint_times: tuple = ()
    h: Fraction = Fraction(1, 1000)
    horizon: Fraction = Fraction(100)
    n_paths: int = 1000
    zeta_a: Fraction = Fraction(0)
    zeta_c: Fraction = Fraction(0)
    stats_horizons: tuple = (Fraction(10), Fraction(50), Fraction(100))
    value_tol: float = 1e-10
    expectations: list = field(default_factory=list)

    def tolerances(self) -> dict:
        return {
            "value_tol": self.value_tol,
            "caustic_residual": 1e-8,
            "tangent_kernel_sin": 1e-8,
            "real_root_width": 1e-12,
            "complex_pair_width": 1e-10,
        }


def _fractions(text: str, line: int, n: int | None = None) -> tuple:
    parts = text.split()
    try:
        vals = tuple(Fraction(p) for p in parts)
    except ValueError as e:
        raise ScenarioError(f"expected rational numbers, got {text!r} ({e})", line)
    if n is not None and len(vals) != n:
        raise ScenarioError(f"expected {n} values, got {len(vals)} in {text!r}", line)
    return vals


def parse_scenario(text: str, source: str = "<scenario>") -> Scenario:
    fields: dict = {}
    expectations: list = []
    section = None
    lines_seen: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if line == "[expectations]":
                section = "expectations"
                continue
            raise ScenarioError(f"unknown section {line!r}", lineno)
        if "=" not in line:
            raise ScenarioError(f"expected 'key = value', got {line!r}", lineno)
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if section == "expectations":
            if key not in _EXPECTATION_KEYS:
                raise ScenarioError(f"unknown expectation {key!r}", lineno)
            expectations.append(_parse_expectation(key, value, lineno))
            continue
        if key not in _KNOWN_KEYS:
            raise ScenarioError(f"unknown key {key!r}", lineno)
        if key in lines_seen:
            raise ScenarioError(f"duplicate key {key!r} (first on line {lines_seen[key]})", lineno)
        lines_seen[key] = lineno
        fields[key] = (value, lineno)
    return _build(fields, expectations)


def _parse_expectation(key: str, value: str, lineno: int) -> Expectation:
    parts = value.split()
    try:
        if key in ("perestroika_t", "eta_zero_t"):
            vals, tol = (float(Fraction(parts[0])),), float(Fraction(parts[1]))
        elif key == "hotcool_point":
            vals = (float(Fraction(parts[0])), float(Fraction(parts[1])))
            tol = float(Fraction(parts[2]))
        elif key in ("doublepoint_count", "cusp_count"):
            # e.g. doublepoint_count = 2.4 5
            vals, tol = (float(Fraction(parts[0])), int(parts[1])), 0.0
        elif key == "maxwell_b":
            vals, tol = (value,), 0.0
        else:  # pragma: no cover
            raise ScenarioError(f"unhandled expectation {key}", lineno)
    except (IndexError, ValueError) as e:
        raise ScenarioError(f"malformed expectation {key!r}: {value!r} ({e})", lineno)
    return Expectation(kind=key, values=vals, tolerance=tol, raw=value, line=lineno)


def _build(fields: dict, expectations: list) -> Scenario:
    def take(key, default=None):
        if key in fields:
            return fields.pop(key)
        return (default, None)

    name, _ = take("name", "scenario")
    dim_txt, dim_line = take("dimension")
    if dim_txt is None:
        raise ScenarioError("missing required key 'dimension'")
    s0_txt, s0_line = take("s0")
    if s0_txt is None:
        raise ScenarioError("missing required key 's0'")
    try:
        dimension = int(dim_txt)
    except ValueError:
        raise ScenarioError(f"dimension must be an integer, got {dim_txt!r}", dim_line)
    try:
        s0 = Polynomial.from_text(s0_txt)
    except ValueError as e:
        raise ScenarioError(f"cannot parse S0: {e}", s0_line)
    nd_txt, nd_line = take("noise_direction", " ".join(["0"] * dimension))
    eps_txt, eps_line = take("epsilon", "0")
    try:
        data = InitialData(
            dimension=dimension,
            s0=s0,
            noise_direction=_fractions(nd_txt, nd_line, dimension),
            epsilon=Fraction(eps_txt),
        )
    except FamilyError as e:
        raise ScenarioError(f"invalid initial data: {e}", s0_line)
    except ValueError as e:
        raise ScenarioError(f"invalid epsilon {eps_txt!r}: {e}", eps_line)
    scn = Scenario(name=name, initial_data=data, expectations=expectations)
    simple = {
        "seed": ("seed", int),
        "n_paths": ("n_paths", int),
        "value_tol": ("value_tol", float),
    }
    for key, (attr, conv) in simple.items():
        txt, line = take(key)
        if txt is not None:
            try:
                setattr(scn, attr, conv(txt))
            except ValueError as e:
                raise ScenarioError(f"bad value for {key}: {txt!r} ({e})", line)
    rationals = {
        "t": "t",
        "h": "h",
        "horizon": "horizon",
        "epsilon": None,
        "zeta_a": "zeta_a",
        "zeta_c": "zeta_c",
    }
    for key, attr in rationals.items():
        if attr is None:
            continue
        txt, line = take(key)
        if txt is not None:
            (val,) = _fractions(txt, line, 1)
            setattr(scn, attr, val)
    tuples = {
        "levels_c": ("levels_c", None),
        "lam_grid": ("lam_grid", 3),
        "lam_window": ("lam_window", 2),
        "a_window": ("a_window", 2),
        "eta_window": ("eta_window", 2),
        "t_range": ("t_range", 2),
        "doublepoint_times": ("doublepoint_times", None),
        "stats_horizons": ("stats_horizons", None),
    }
    for key, (attr, n) in tuples.items():
        txt, line = take(key)
        if txt is not None:
            vals = _fractions(txt, line, n)
            if key == "lam_grid":
                vals = (vals[0], vals[1], int(vals[2]))
            setattr(scn, attr, vals)
    prod_txt, prod_line = take("products", "")
    products = tuple(prod_txt.split())
    for p in products:
        if p not in PRODUCTS:
            raise ScenarioError(
                f"unknown product {p!r}; known: {', '.join(PRODUCTS)}", prod_line
            )
    scn.products = products
    if fields:  # pragma: no cover
        leftover = ", ".join(sorted(fields))
        raise ScenarioError(f"unconsumed keys: {leftover}")
    return scn


def load_scenario(path) -> Scenario:
    with open(path, "r", encoding="utf-8") as f:
        return parse_scenario(f.read(), source=str(path))
