"""Scenario configuration: schema-versioned JSON in, validated objects out.

A configuration file fixes the arithmetic inputs (prime, dimension,
matrices, precision, zero threshold), the verification grid, the growth
scenario, and the run seed.  Every value echoed into reports passes
through here so outputs are reproducible byte for byte.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

from .growth import GrowthScenario, ModulePresentation, PolyFactor, TaggedFactor
from .iwasawa import IwasawaPoly
from .logmatrix import DieudonneInput, det_mod

SCHEMA_VERSION = 1
DEFAULT_PRECISION = 64


class ConfigError(ValueError):
    """Configuration could not be parsed or validated; carries diagnostics."""

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


def _require(d, key, typ, problems, where):
    if key not in d:
        problems.append("%s: missing required key %r" % (where, key))
        return None
    v = d[key]
    if typ is int and isinstance(v, bool):
        problems.append("%s.%s: expected integer, got boolean" % (where, key))
        return None
    if not isinstance(v, typ):
        problems.append(
            "%s.%s: expected %s, got %s" % (where, key, typ.__name__, type(v).__name__)
        )
        return None
    return v


def _int_matrix(v, size, problems, where):
    if not isinstance(v, list) or len(v) != size:
        problems.append("%s: expected %d rows" % (where, size))
        return None
    out = []
    for i, row in enumerate(v):
        if not isinstance(row, list) or len(row) != size:
            problems.append("%s[%d]: expected %d integer entries" % (where, i, size))
            return None
        for x in row:
            if not isinstance(x, int) or isinstance(x, bool):
                problems.append("%s[%d]: entries must be integers" % (where, i))
                return None
        out.append(tuple(row))
    return tuple(out)


@dataclass(frozen=True)
class GridSpec:
    r_max: int = 3
    s_max: int = 3
    n_max: int = 4


@dataclass(frozen=True)
class ScenarioConfig:
    prime: int
    g: int
    precision: int
    tau: int
    seed: int
    out_dir: str
    c_p: tuple
    c_pc: tuple
    grid: GridSpec
    scenario: dict = None
    xi_mode: str = "classes"
    source: str = "<memory>"

    def dieudonne(self) -> DieudonneInput:
        return DieudonneInput(self.prime, self.g, self.c_p, self.c_pc, self.precision)

    def has_scenario(self) -> bool:
        return self.scenario is not None

    def growth_scenario(self) -> GrowthScenario:
        if self.scenario is None:
            raise ConfigError("config has no 'scenario' section")
        s = self.scenario
        fine = None
        if s.get("fine") is not None:
            fine = build_presentation(s["fine"], self.prime, self.precision)
        return GrowthScenario(
            self.prime,
            self.g,
            {k: tuple(v) for k, v in s.get("coleman", {}).items()},
            tuple(tuple(c) for c in s.get("bad_set", [])),
            s.get("n0", 1),
            fine,
            s.get("block_mode", True),
            s.get("base_bound", 0),
            tuple(s["minor_model"]) if s.get("minor_model") is not None else None,
        )

    def echo(self) -> dict:
        """Canonical configuration echo for reports."""
        out = {
            "schema_version": SCHEMA_VERSION,
            "prime": self.prime,
            "g": self.g,
            "precision": self.precision,
            "tau": self.tau,
            "seed": self.seed,
            "out": self.out_dir,
            "matrices": {
                "c_p": [list(r) for r in self.c_p],
                "c_pc": [list(r) for r in self.c_pc],
            },
            "grid": {
                "r_max": self.grid.r_max,
                "s_max": self.grid.s_max,
                "n_max": self.grid.n_max,
            },
            "xi_mode": self.xi_mode,
        }
        if self.scenario is not None:
            out["scenario"] = self.scenario
        return out


def build_presentation(d: dict, p: int, precision: int) -> ModulePresentation:
    """Fine-module JSON: free_rank plus tagged or explicit factors."""
    problems = []
    if not isinstance(d, dict):
        raise ConfigError("scenario.fine: expected an object")
    free = d.get("free_rank", 0)
    if not isinstance(free, int) or free < 0:
        raise ConfigError("scenario.fine.free_rank: expected nonnegative integer")
    factors = []
    for i, f in enumerate(d.get("factors", [])):
        where = "scenario.fine.factors[%d]" % i
        if "poly" in f:
            terms = {}
            for entry in f["poly"]:
                if len(entry) != 3:
                    problems.append("%s.poly: entries are [i, j, coeff]" % where)
                    break
                a, b, c = entry
                terms[(a, b)] = terms.get((a, b), 0) + c
            else:
                factors.append(PolyFactor(IwasawaPoly(p, terms, precision)))
            continue
        var = f.get("var")
        atoms = f.get("atoms")
        if var not in ("X", "Y") or not atoms:
            problems.append("%s: tagged factor needs 'var' (X or Y) and 'atoms'" % where)
            continue
        try:
            factors.append(TaggedFactor(var, tuple((k, lvl) for k, lvl in atoms)))
        except (ValueError, TypeError) as e:
            problems.append("%s: %s" % (where, e))
    if problems:
        raise ConfigError(problems)
    return ModulePresentation(p, free, tuple(factors))


def load_config(path: str, seed=None, precision=None, out=None) -> ScenarioConfig:
    """Parse and validate a configuration file, applying CLI overrides."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as e:
        raise ConfigError("cannot read config %s: %s" % (path, e))
    except json.JSONDecodeError as e:
        raise ConfigError("config %s is not valid JSON: %s" % (path, e))
    return parse_config(raw, source=path, seed=seed, precision=precision, out=out)


def parse_config(raw: dict, source="<memory>", seed=None, precision=None, out=None):
    problems = []
    if not isinstance(raw, dict):
        raise ConfigError("top level: expected a JSON object")
    version = raw.get("schema_version")
    if version != SCHEMA_VERSION:
        problems.append(
            "schema_version: expected %d, got %r" % (SCHEMA_VERSION, version)
        )
    p = _require(raw, "prime", int, problems, "config")
    g = _require(raw, "g", int, problems, "config")
    if p is not None and (p < 3 or p % 2 == 0):
        problems.append("prime: must be an odd prime")
    if g is not None and g < 1:
        problems.append("g: must be a positive integer")
    n_prec = raw.get("precision", DEFAULT_PRECISION)
    if precision is not None:
        n_prec = precision
    if not isinstance(n_prec, int) or n_prec < 4:
        problems.append("precision: must be an integer >= 4")
        n_prec = DEFAULT_PRECISION
    tau = raw.get("tau", n_prec // 2)
    if not isinstance(tau, int) or not 0 < tau <= n_prec:
        problems.append("tau: must be an integer in (0, precision]")
        tau = n_prec // 2
    run_seed = raw.get("seed", 0)
    if seed is not None:
        run_seed = seed
    if not isinstance(run_seed, int):
        problems.append("seed: must be an integer")
        run_seed = 0
    out_dir = raw.get("out", "reports")
    if out is not None:
        out_dir = out
    if not isinstance(out_dir, str):
        problems.append("out: must be a path string")
        out_dir = "reports"

    c_p = c_pc = None
    mats = raw.get("matrices")
    if not isinstance(mats, dict):
        problems.append("matrices: missing object with c_p and c_pc")
    elif p is not None and g is not None:
        if "c_p" in mats:
            c_p = _int_matrix(mats["c_p"], 2 * g, problems, "matrices.c_p")
        else:
            problems.append("matrices.c_p: missing")
        if "c_pc" in mats:
            c_pc = _int_matrix(mats["c_pc"], 2 * g, problems, "matrices.c_pc")
        else:
            problems.append("matrices.c_pc: missing")

    grid_raw = raw.get("grid", {})
    grid = GridSpec()
    if isinstance(grid_raw, dict):
        r_max = grid_raw.get("r_max", 3)
        s_max = grid_raw.get("s_max", 3)
        n_max = grid_raw.get("n_max", 4)
        if not all(isinstance(v, int) and v >= 1 for v in (r_max, s_max, n_max)):
            problems.append("grid: bounds must be integers >= 1")
        else:
            grid = GridSpec(r_max, s_max, n_max)
    else:
        problems.append("grid: expected an object")

    xi_mode = raw.get("xi_mode", "classes")
    if xi_mode not in ("classes", "pairs"):
        problems.append("xi_mode: must be 'classes' or 'pairs'")

    scenario = raw.get("scenario")
    if scenario is not None and not isinstance(scenario, dict):
        problems.append("scenario: expected an object")

    if problems:
        raise ConfigError(problems)

    cfg = ScenarioConfig(
        p, g, n_prec, tau, run_seed, out_dir, c_p, c_pc, grid, scenario, xi_mode, source
    )
    # force early validation of the scenario section
    if scenario is not None:
        try:
            cfg.growth_scenario()
        except ConfigError:
            raise
        except ValueError as e:
            raise ConfigError("scenario: %s" % e)
    return cfg


def gen_test_matrices(p: int, g: int, seed: int, block_antidiag: bool = False):
    """Seeded unit-determinant matrix pair, optionally block anti-diagonal.

    Entries are drawn uniformly from [-p^2, p^2] and the draw is rejected
    until the determinant is a unit mod p; with the block flag the two
    diagonal g x g blocks are exactly zero.
    """
    rng = random.Random(seed)
    n = 2 * g

    def draw():
        while True:
            m = [[rng.randrange(-p * p, p * p + 1) for _ in range(n)] for _ in range(n)]
            if block_antidiag:
                for i in range(g):
                    for j in range(g):
                        m[i][j] = 0
                        m[g + i][g + j] = 0
            if det_mod(m, p) % p:
                return tuple(tuple(row) for row in m)

    first = draw()
    second = draw()
    return first, second
