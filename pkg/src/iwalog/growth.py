"""Character-class census and coinvariant rank growth bounds.

Characters of the two-variable deformation group at level n are pairs of
p-power roots of unity, identified up to simultaneous unit-power twist.
Classes are enumerated by exact order; ranks of finitely presented modules
are counted root-by-root over those classes; the growth of the resulting
bounds is compared against p^n to extract an integer certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .blockform import BlockData, delta_valuation, surviving_index
from .cyclotomic import phi
from .iwasawa import CharacterPoint, IwasawaPoly
from .padic import val_p


class ScenarioError(ValueError):
    """A scenario violates a precondition of the requested bound."""


# ---------------------------------------------------------------------------
# conjugacy classes of character pairs


def enumerate_classes(p: int, n: int, new_only: bool = False) -> list:
    """Conjugacy-class representatives of level-n character pairs.

    Returns (representative, class_size) tuples.  A pair (w1, w2) of
    p^n-th roots of unity is conjugate to any simultaneous a-th power,
    a a unit; normal forms fix the first unit coordinate to exponent 1.
    ``new_only`` keeps only classes of exact level n.
    """
    levels = [n] if new_only else list(range(n + 1))
    out = []
    for m in levels:
        if m == 0:
            out.append((CharacterPoint(p, 0, 0), 1))
            continue
        qm = p**m
        size = phi(p, m)
        # first coordinate a unit: rep (1, t) for every t mod p^m
        for t in range(qm):
            if t == 0:
                out.append((CharacterPoint(p, m, 0, 1, 0), size))
            else:
                v = val_p(t, p)
                s = m - v
                out.append((CharacterPoint(p, m, s, 1, (t // p**v) % p**s), size))
        # first coordinate a non-unit: rep (p*x, 1), second coordinate exact
        for x in range(qm // p):
            e = p * x
            if e == 0:
                out.append((CharacterPoint(p, 0, m, 0, 1), size))
            else:
                v = val_p(e, p)
                r = m - v
                out.append((CharacterPoint(p, r, m, (e // p**v) % p**r, 1), size))
    return out


def class_rank(w: CharacterPoint) -> int:
    """Z_p-rank contributed by one class: phi(p^level), 1 for trivial."""
    return phi(w.prime, w.level)


# ---------------------------------------------------------------------------
# module presentations and coinvariant ranks

_ATOM_KINDS = ("var", "cyclo", "omega")


@dataclass(frozen=True)
class TaggedFactor:
    """Torsion factor with exact root bookkeeping.

    Atoms are (kind, k) pairs in one variable: "var" is the variable
    itself (root: trivial coordinate), ("cyclo", k) the level-k
    cyclotomic polynomial of 1+var (roots: exact order p^k), and
    ("omega", k) the full level-k norm relation (roots: order <= p^k).
    """

    var: str
    atoms: tuple

    def __post_init__(self):
        if self.var not in ("X", "Y"):
            raise ValueError("factor variable must be X or Y")
        if not self.atoms:
            raise ValueError("factor needs at least one atom")
        for kind, k in self.atoms:
            if kind not in _ATOM_KINDS:
                raise ValueError("unknown atom kind %r" % (kind,))
            if kind == "cyclo" and k < 1:
                raise ValueError("cyclotomic atom needs level >= 1")
            if k < 0:
                raise ValueError("atom level must be nonnegative")

    def root_orders(self) -> set:
        """Exact orders (as exponents) of the coordinate killed by a root."""
        orders = set()
        for kind, k in self.atoms:
            if kind == "var":
                orders.add(0)
            elif kind == "cyclo":
                orders.add(k)
            else:
                orders.update(range(k + 1))
        return orders

    def root_count(self, p: int, n: int) -> int:
        """Number of level-n character pairs annihilating this factor."""
        total = sum(phi(p, o) for o in self.root_orders() if o <= n)
        return total * p**n


@dataclass(frozen=True)
class PolyFactor:
    """Torsion factor given by an explicit polynomial; roots are decided
    by evaluation at class representatives, so zero tests are only as
    strong as the working precision."""

    poly: IwasawaPoly

    def __post_init__(self):
        if not self.poly.terms:
            raise ValueError("torsion factor polynomial must be nonzero")


@dataclass(frozen=True)
class ModulePresentation:
    """free_rank copies of the full ring plus cyclic torsion factors."""

    prime: int
    free_rank: int = 0
    factors: tuple = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        for f in self.factors:
            if not isinstance(f, (TaggedFactor, PolyFactor)):
                raise ValueError("factors must be TaggedFactor or PolyFactor")

    def is_torsion(self) -> bool:
        return self.free_rank == 0


@dataclass(frozen=True)
class CoinvariantRank:
    value: int
    upper_bound_only: bool
    per_factor: tuple


def _structural_zero(poly: IwasawaPoly, rep: CharacterPoint) -> bool:
    """Certify f(rep) = 0 without precision loss where possible.

    At the trivial class the value is the stored constant term, which is
    exact in Z/p^N.  A polynomial in one variable vanishes at a class
    exactly when the minimal polynomial of that coordinate divides it.
    Mixed cases are left uncertified.
    """
    if rep.level == 0:
        return poly.terms.get((0, 0), 0) % poly.prime**poly.precision == 0
    for var, order in (("X", rep.r), ("Y", rep.s)):
        if poly.is_univariate(var):
            if order == 0:
                axis = 0 if var == "X" else 1
                return all(key[axis] > 0 for key in poly.terms)
            return poly.divisible_by_shifted_cyclo(order, var)
    return False


def coinvariant_rank(mod: ModulePresentation, n: int, tau=None) -> CoinvariantRank:
    """Z_p-rank of the level-n coinvariants.

    Free part contributes p^(2n) per copy; each torsion factor
    contributes the number of level-n classes killing it, counted with
    class size.  Precision-limited zero decisions on explicit
    polynomial factors mark the total as an upper bound only.
    """
    p = mod.prime
    total = mod.free_rank * p ** (2 * n)
    per_factor = []
    upper_only = False
    classes = None
    for f in mod.factors:
        if isinstance(f, TaggedFactor):
            c = f.root_count(p, n)
        else:
            if classes is None:
                classes = enumerate_classes(p, n)
            if tau is None:
                tau = Fraction(f.poly.precision, 2)
            c = 0
            for rep, size in classes:
                value = f.poly.evaluate(rep)
                if value.is_zero():
                    c += size
                    if not _structural_zero(f.poly, rep):
                        # evaluation cannot distinguish a true zero from a
                        # unit times p^precision
                        upper_only = True
                elif value.reported_zero(tau):
                    c += size
                    upper_only = True
        per_factor.append(c)
        total += c
    return CoinvariantRank(total, upper_only, tuple(per_factor))


@dataclass(frozen=True)
class GrowthFit:
    """Least-exponent fit rank_n = r * p^(2n) + residual_n."""

    prime: int
    ranks: tuple
    free_rank: int
    residuals: tuple
    constant: Fraction
    upper_bound_only: bool


def fit_coinvariant_growth(mod: ModulePresentation, n_max: int, tau=None) -> GrowthFit:
    """Fit the leading p^(2n) coefficient from computed coinvariant ranks.

    Requires n_max >= 2 so the leading term dominates; a negative
    residual means the input is not of the modelled shape and raises.
    """
    if n_max < 2:
        raise ValueError("need n_max >= 2 to separate the leading term")
    p = mod.prime
    results = [coinvariant_rank(mod, n, tau) for n in range(n_max + 1)]
    ranks = tuple(r.value for r in results)
    upper_only = any(r.upper_bound_only for r in results)
    r_fit = ranks[n_max] // p ** (2 * n_max)
    residuals = []
    constant = Fraction(0)
    for n, rank in enumerate(ranks):
        res = rank - r_fit * p ** (2 * n)
        if res < 0:
            raise ScenarioError(
                "negative residual at level %d: rank sequence is not of the"
                " form r*p^(2n) + O(p^n)" % n
            )
        residuals.append(res)
        constant = max(constant, Fraction(res, p**n))
    return GrowthFit(p, ranks, r_fit, tuple(residuals), constant, upper_only)


# ---------------------------------------------------------------------------
# scenarios: nonvanishing regions and growth certificates

_DISTINGUISHED = ("I0", "I1", "mix01", "mix10")


@dataclass(frozen=True)
class GrowthScenario:
    """Inputs for the large-difference nonvanishing scan and the growth bound.

    ``coleman`` maps each distinguished index label to model exponents
    (a, b, c): the interpolation factor at orders (r, s) is predicted to
    have valuation a + b/phi(p^r) + c/phi(p^s).  ``bad_set`` lists
    (r, s, class_count) cells where the full sum vanishes anyway.
    ``n0`` is the radius of the allowed band around the diagonal.
    """

    prime: int
    g: int
    coleman: dict
    bad_set: tuple = ()
    n0: int = 1
    fine: ModulePresentation = None
    block_mode: bool = True
    base_bound: int = 0
    minor_model: tuple = None

    def __post_init__(self):
        if self.prime < 3 or self.prime % 2 == 0:
            raise ValueError("prime must be odd")
        if self.g < 1:
            raise ValueError("g must be positive")
        for label in self.coleman:
            if label not in _DISTINGUISHED:
                raise ValueError("unknown distinguished index label %r" % (label,))
        for cell in self.bad_set:
            r, s, count = cell
            if r < 1 or s < 1 or count < 0:
                raise ValueError("bad cell must be (r>=1, s>=1, count>=0)")
        if self.n0 < 0:
            raise ValueError("n0 must be nonnegative")
        if self.fine is not None and self.fine.prime != self.prime:
            raise ValueError("fine module prime mismatch")

    def bad_count(self, r: int, s: int) -> int:
        return sum(c for (br, bs, c) in self.bad_set if (br, bs) == (r, s))

    def coleman_valuation(self, label: str, r: int, s: int) -> Fraction:
        if label not in self.coleman:
            raise ScenarioError("no interpolation model for index %s" % label)
        a, b, c = self.coleman[label]
        return (
            Fraction(a)
            + Fraction(b, phi(self.prime, r))
            + Fraction(c, phi(self.prime, s))
        )


@dataclass(frozen=True)
class CellVerdict:
    r: int
    s: int
    in_region: bool
    bad_count: int
    label: str
    minor_valuation: Fraction
    coleman_valuation: Fraction
    total_valuation: Fraction
    nonzero: bool


@dataclass(frozen=True)
class ScanReport:
    n0: int
    cells: tuple
    violations: tuple
    passed: bool


def h_large_scan(
    scenario: GrowthScenario, r_max: int, s_max: int, block: BlockData = None
) -> ScanReport:
    """Scan the order grid for vanishing outside the diagonal band.

    A cell with |r - s| > n0 must have a nonzero leading term; a
    declared bad cell there violates the large-difference hypothesis.
    In block mode the surviving minor valuation g*(delta_r + delta_s)
    is added to the Coleman model; otherwise the minor term comes from
    ``scenario.minor_model`` with the same (a, b, c) meaning.
    """
    p = scenario.prime
    g = block.g if block is not None else scenario.g
    cells = []
    violations = []
    for r in range(1, r_max + 1):
        for s in range(1, s_max + 1):
            in_region = abs(r - s) > scenario.n0
            bad = scenario.bad_count(r, s)
            if scenario.block_mode:
                idx = surviving_index(g, r, s)
                label = idx.label(g)
                minor_val = g * (delta_valuation(p, r) + delta_valuation(p, s))
                coleman = scenario.coleman_valuation(label, r, s)
                total = minor_val + coleman
            else:
                best = None
                for cand in _DISTINGUISHED:
                    if cand not in scenario.coleman:
                        continue
                    cv = scenario.coleman_valuation(cand, r, s)
                    if best is None or cv < best[1]:
                        best = (cand, cv)
                if best is None:
                    raise ScenarioError("no distinguished index model given")
                label, coleman = best
                if scenario.minor_model is not None:
                    a, b, c = scenario.minor_model
                    minor_val = (
                        Fraction(a)
                        + Fraction(b, phi(p, r))
                        + Fraction(c, phi(p, s))
                    )
                else:
                    minor_val = Fraction(0)
                total = minor_val + coleman
            nonzero = bad == 0
            cells.append(
                CellVerdict(r, s, in_region, bad, label, minor_val, coleman, total, nonzero)
            )
            if in_region and bad > 0:
                violations.append((r, s, bad))
    return ScanReport(scenario.n0, tuple(cells), tuple(violations), not violations)


def xi_count(scenario: GrowthScenario, n: int, mode: str = "classes") -> int:
    """Size of the level-n defect set.

    ``classes`` sums declared bad class counts over cells with
    max(r, s) = n; ``pairs`` counts the cells themselves.
    """
    if mode not in ("classes", "pairs"):
        raise ValueError("mode must be 'classes' or 'pairs'")
    hits = [(r, s, c) for (r, s, c) in scenario.bad_set if max(r, s) == n and c > 0]
    if mode == "classes":
        return sum(c for _, _, c in hits)
    return len({(r, s) for r, s, _ in hits})


def xi_growth_flag(scenario: GrowthScenario, n_max: int, mode: str = "classes") -> bool:
    """Heuristic unboundedness alarm: defect counts strictly increasing
    over the last three tested levels."""
    values = [xi_count(scenario, n, mode) for n in range(1, n_max + 1)]
    if len(values) < 3:
        return False
    tail = values[-3:]
    return tail[0] < tail[1] < tail[2]


@dataclass(frozen=True)
class GrowthRow:
    n: int
    new_classes: int
    c_n: int
    increment: int
    cumulative: int
    fine_rank: int
    total: int
    ratio: Fraction


@dataclass(frozen=True)
class GrowthReport:
    rows: tuple
    bound_certificate: int
    total_certificate: int
    bound_sup: Fraction
    total_sup: Fraction
    upper_bound_only: bool
    xi_flag: bool


def growth_bound_series(
    scenario: GrowthScenario, n_max: int, mode: str = "classes", tau=None
) -> GrowthReport:
    """Cumulative rank bound by level with p^n-normalised certificates.

    Level n adds 2g * C_n * phi(p^n) where C_n is the defect count; the
    fine column adds the coinvariant rank of the fine module when one
    is attached.  Certificates are the smallest integers dominating
    bound_n / p^n and total_n / p^n over the tested range.
    """
    p = scenario.prime
    g = scenario.g
    rows = []
    cumulative = scenario.base_bound
    upper_only = False
    bound_sup = Fraction(scenario.base_bound)
    total_sup = None
    for n in range(n_max + 1):
        if n == 0:
            new_classes = 1
            c_n = 0
            increment = 0
        else:
            new_classes = p ** (n - 1) * (p + 1)
            c_n = xi_count(scenario, n, mode)
            increment = 2 * g * c_n * phi(p, n)
            cumulative += increment
        if scenario.fine is not None:
            fr = coinvariant_rank(scenario.fine, n, tau)
            fine_rank = fr.value
            upper_only = upper_only or fr.upper_bound_only
        else:
            fine_rank = 0
        total = cumulative + fine_rank
        ratio = Fraction(total, p**n)
        rows.append(
            GrowthRow(n, new_classes, c_n, increment, cumulative, fine_rank, total, ratio)
        )
        bound_sup = max(bound_sup, Fraction(cumulative, p**n))
        total_sup = ratio if total_sup is None else max(total_sup, ratio)
    bound_cert = -(-bound_sup.numerator // bound_sup.denominator)
    total_cert = -(-total_sup.numerator // total_sup.denominator)
    return GrowthReport(
        tuple(rows),
        bound_cert,
        total_cert,
        bound_sup,
        total_sup,
        upper_only,
        xi_growth_flag(scenario, n_max, mode),
    )


def mordell_weil_bound(
    scenario: GrowthScenario,
    n_max: int,
    mode: str = "classes",
    tau=None,
    block: BlockData = None,
) -> GrowthReport:
    """Rank bound along the tower under the large-difference hypothesis.

    Preconditions: the scan over [1, n_max]^2 reports no violation and
    the fine module is torsion.  total_n then bounds the rank at level
    n and total_n / p^n is bounded by the integer certificate.
    """
    if scenario.fine is None:
        raise ScenarioError("mordell-weil bound needs a fine module")
    if not scenario.fine.is_torsion():
        raise ScenarioError(
            "fine module has positive free rank; the bound does not apply"
        )
    scan = h_large_scan(scenario, n_max, n_max, block)
    if not scan.passed:
        raise ScenarioError(
            "declared vanishing at %r violates the large-difference"
            " hypothesis" % (scan.violations,)
        )
    report = growth_bound_series(scenario, n_max, mode, tau)
    if report.xi_flag:
        raise ScenarioError(
            "defect counts grow over the last three levels; no finite"
            " certificate is justified"
        )
    return report
