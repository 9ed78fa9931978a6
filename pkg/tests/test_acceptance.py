"""Acceptance gate: ten headline checks with pinned values and runtimes.

Each check prints one ``ACCEPT-NN <name>: PASS|FAIL`` line (run pytest
with ``-s`` to see the lines as they happen).  Expected values are pinned
from independent closed forms and brute-force oracles elsewhere in the
test suite; runtime limits are asserted with a monotonic clock.
"""

import json
import random
import time
from fractions import Fraction

from iwalog.blockform import (
    BlockData,
    closed_form_h_epsilon,
    direct_h_epsilon,
    verify_vanishing_pattern,
)
from iwalog.cli import main
from iwalog.config import gen_test_matrices
from iwalog.cyclotomic import CycloElement, CycloPolynomial, phi, phi_value_at_root
from iwalog.growth import (
    ModulePresentation,
    PolyFactor,
    TaggedFactor,
    coinvariant_rank,
    enumerate_classes,
    fit_coinvariant_growth,
)
from iwalog.iwasawa import CharacterPoint, IwasawaPoly
from iwalog.logmatrix import DieudonneInput, enumerate_signed_indices, h_matrix_sequence
from iwalog.smith import coinvariant_rank_smith

CONFIG = "configs/elliptic_g1.json"


def report(num, name, ok, detail=""):
    line = "ACCEPT-%02d %s: %s" % (num, name, "PASS" if ok else "FAIL")
    if detail:
        line += " (%s)" % detail
    print(line)
    assert ok, line


def test_accept_01_index_set_cardinalities():
    start = time.monotonic()
    six = len(enumerate_signed_indices(1))
    seventy = len(enumerate_signed_indices(2))
    elapsed = time.monotonic() - start
    report(
        1,
        "index-set-cardinalities",
        six == 6 and seventy == 70 and elapsed < 1.0,
        "g=1: %d, g=2: %d, %.3fs" % (six, seventy, elapsed),
    )


def test_accept_02_closed_form_equivalence():
    start = time.monotonic()
    inputs = 0
    mismatches = 0
    for p in (3, 5):
        for g in (1, 2):
            for seed in range(6):
                cp, cpc = gen_test_matrices(p, g, 1000 * p + 10 * g + seed, True)
                d = DieudonneInput(p, g, cp, cpc, 64)
                b = BlockData.from_dieudonne(d)
                inputs += 1
                for q in ("p", "pc"):
                    seq = h_matrix_sequence(d, q, 5)
                    for k, h in enumerate(seq, start=1):
                        closed = closed_form_h_epsilon(b, q, k)
                        direct = direct_h_epsilon(h, k, q)
                        if closed != direct:
                            mismatches += 1
    elapsed = time.monotonic() - start
    report(
        2,
        "closed-form-oracle-equivalence",
        inputs >= 20 and mismatches == 0 and elapsed < 120.0,
        "%d block inputs, k <= 5, N = 64, %.1fs" % (inputs, elapsed),
    )


def test_accept_03_vanishing_pattern_completeness():
    start = time.monotonic()
    bad = 0
    cells = 0
    for seed in (11, 12):
        cp, cpc = gen_test_matrices(3, 2, seed, True)
        b = BlockData.from_dieudonne(DieudonneInput(3, 2, cp, cpc, 64))
        for r in range(1, 5):
            for s in range(1, 5):
                pat = verify_vanishing_pattern(b, r, s)
                cells += 1
                if not pat.passed or len(pat.verdicts) != 70:
                    bad += 1
                    continue
                for v in pat.verdicts:
                    if v.is_survivor:
                        if v.kind != "nonzero" or v.valuation is None:
                            bad += 1
                    elif v.kind != "symbolic-zero":
                        bad += 1
    elapsed = time.monotonic() - start
    report(
        3,
        "vanishing-pattern-completeness",
        bad == 0 and cells == 32 and elapsed < 300.0,
        "70 minors x %d cells, %.1fs" % (cells, elapsed),
    )


def test_accept_04_lower_half_vanishing():
    rng = random.Random(424242)
    cases = 0
    failures = 0
    while cases < 50:
        p = rng.choice((3, 5))
        g = rng.choice((1, 2))
        r = rng.choice((1, 2))
        cp, cpc = gen_test_matrices(p, g, rng.randrange(1 << 30), False)
        d = DieudonneInput(p, g, cp, cpc, 32)
        theta = CharacterPoint(p, r, r)
        for q in ("p", "pc"):
            values = h_matrix_sequence(d, q, r)[-1].eval_at(theta)
            for i in range(g, 2 * g):
                if not all(values[i][j].is_zero() for j in range(2 * g)):
                    failures += 1
        cases += 1
    report(
        4,
        "lower-half-vanishing",
        failures == 0,
        "%d seeded non-block inputs, both variables" % cases,
    )


def test_accept_05_coinvariant_rank_oracle():
    rng = random.Random(515151)
    p = 3
    agree = True
    for _ in range(10):
        terms = {}
        for _ in range(rng.randrange(3, 7)):
            i = rng.randrange(0, 5)
            j = rng.randrange(0, 5 - i)
            terms[(i, j)] = rng.randrange(-20, 21)
        f = IwasawaPoly(p, terms, 48)
        if not f.terms:
            f = IwasawaPoly.variable("X", p, 48)
        m = ModulePresentation(p, 0, (PolyFactor(f),))
        for n in range(3):
            direct = coinvariant_rank(m, n)
            brute = coinvariant_rank_smith(f, n)
            if direct.value != brute.rank:
                agree = False
    tag_x = coinvariant_rank(
        ModulePresentation(p, 0, (TaggedFactor("X", (("var", 0),)),)), 1
    ).value
    tag_c = coinvariant_rank(
        ModulePresentation(p, 0, (TaggedFactor("X", (("cyclo", 1),)),)), 1
    ).value
    report(
        5,
        "coinvariant-rank-oracle",
        agree and tag_x == 3 and tag_c == 6,
        "10 seeded f vs elimination at n <= 2; tagged 3 and 6",
    )


def test_accept_06_rank_growth_fit():
    var_x = TaggedFactor("X", (("var", 0),))
    var_y = TaggedFactor("Y", (("var", 0),))
    cyc = TaggedFactor("X", (("cyclo", 1),))
    cases = {
        0: ModulePresentation(3, 0, (var_x, var_y)),
        1: ModulePresentation(3, 1, (var_x,)),
        2: ModulePresentation(3, 2, (cyc,)),
    }
    ok = True
    for r, m in cases.items():
        fit = fit_coinvariant_growth(m, 4)
        if fit.free_rank != r:
            ok = False
        if any(Fraction(res, 3**n) > fit.constant for n, res in enumerate(fit.residuals)):
            ok = False
    pinned = fit_coinvariant_growth(cases[1], 4)
    exact = pinned.residuals == (1, 3, 9, 27, 81) and pinned.constant == 1
    report(
        6,
        "rank-growth-fit",
        ok and exact,
        "fitted r in {0,1,2}; residuals p^n with constant 1 for the pinned case",
    )


def test_accept_07_class_census():
    ok = True
    for p in (3, 5):
        for n in range(4):
            total = sum(size for _, size in enumerate_classes(p, n))
            if total != p ** (2 * n):
                ok = False
    five = enumerate_classes(3, 1)
    split = (
        len(five) == 5
        and sum(1 for _, size in five if size == 1) == 1
        and sum(1 for _, size in five if size == 2) == 4
    )
    report(
        7,
        "class-census",
        ok and split,
        "sum of class sizes is p^(2n); level one over p=3 splits 1+4",
    )


def test_accept_08_end_to_end_pipeline(tmp_path):
    start = time.monotonic()
    out = tmp_path / "mw"
    code = main(["mw-bound", "--config", CONFIG, "--out", str(out)])
    elapsed = time.monotonic() - start
    lines = (out / "mw-bound.csv").read_text(encoding="utf-8").splitlines()
    data = [l.split(",") for l in lines if not l.startswith("#")][1:]
    totals = [int(row[6]) for row in data]
    with open(out / "summary.json", "r", encoding="utf-8") as fh:
        cert = json.load(fh)["results"]["mw-bound"]["certificate"]
    report(
        8,
        "end-to-end-pipeline",
        code == 0
        and totals == [3 ** (n + 1) - 2 for n in range(7)]
        and cert == 3
        and elapsed < 30.0,
        "total_n = 3^(n+1)-2 for n <= 6, certificate 3, %.1fs" % elapsed,
    )


def test_accept_09_determinism(tmp_path):
    out = tmp_path / "rep"
    code1 = main(["all", "--config", CONFIG, "--out", str(out)])
    first = {p.name: p.read_bytes() for p in out.iterdir()}
    code2 = main(["all", "--config", CONFIG, "--out", str(out)])
    second = {p.name: p.read_bytes() for p in out.iterdir()}
    report(
        9,
        "determinism",
        code1 == 0 and code2 == 0 and first == second and len(first) == 11,
        "11 files byte-identical across reruns",
    )


def test_accept_10_valuation_engine():
    ok = True
    for p in (3, 5):
        for n in range(1, 5):
            eps = CycloElement.epsilon(p, n, 64)
            if eps.valuation().as_fraction() != Fraction(1, phi(p, n)):
                ok = False
            # norm oracle: the full product of conjugates has valuation 1
            if CycloPolynomial(p, n).value_at_one() != p:
                ok = False
            if eps.norm().valuation().as_fraction() != 1:
                ok = False
    shifted = phi_value_at_root(3, 1, 2, 1, 64).valuation().as_fraction()
    report(
        10,
        "valuation-engine",
        ok and shifted == Fraction(1, 3),
        "val eps_n = 1/phi(p^n) for n <= 4; one-level drop evaluates to 1/3",
    )
