from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modalconfirm.confidence import Rigged, WaldBinomial, WaldNormal, bits
from modalconfirm.hypothesis_space import (
    UNIT_INTERVAL,
    AmbientMismatchError,
    closed,
    complement,
    contains,
    member,
    point,
)
from modalconfirm.kripke import (
    And,
    Atom,
    BoxC,
    BoxE,
    DiamondC,
    DiamondE,
    FormulaSyntaxError,
    Frame,
    Not,
    Or,
    World,
    accessible_c,
    accessible_e,
    check,
    check_pep,
    frame_from_json,
    frame_to_json,
    parse_formula,
    satisfies,
    truth_table,
)

GRID = [i / 8 for i in range(9)]
SMALL = Frame(GRID, (0, 1), 3, WaldBinomial(0.1))
H = closed(0.25, 0.5, UNIT_INTERVAL)
ATOMS = [Atom(H, "H"), Atom(complement(H), "Hc"), Atom(point(0.5, UNIT_INTERVAL), "P")]


def formulas():
    leaves = st.sampled_from(ATOMS)
    return st.recursive(
        leaves,
        lambda sub: st.one_of(
            st.builds(Not, sub), st.builds(And, sub, sub), st.builds(Or, sub, sub),
            st.builds(BoxC, sub), st.builds(DiamondC, sub),
            st.builds(BoxE, sub), st.builds(DiamondE, sub)),
        max_leaves=6)


def naive(f, w, phi):
    """Satisfaction straight from the definitions, one world at a time."""
    if isinstance(phi, Atom):
        return member(phi.h, w.theta)
    if isinstance(phi, Not):
        return not naive(f, w, phi.phi)
    if isinstance(phi, And):
        return naive(f, w, phi.left) and naive(f, w, phi.right)
    if isinstance(phi, Or):
        return naive(f, w, phi.left) or naive(f, w, phi.right)
    rel = accessible_c if isinstance(phi, (BoxC, DiamondC)) else accessible_e
    vals = [naive(f, v, phi.phi) for v in rel(f, w)]
    return all(vals) if isinstance(phi, (BoxC, BoxE)) else any(vals)


@given(formulas(), st.sampled_from(GRID), st.integers(0, 14))
@settings(max_examples=60, deadline=None)
def test_truth_table_matches_definitions(phi, theta, idx):
    e = SMALL.universe[idx]
    w = World(theta, e)
    assert satisfies(SMALL, w, phi) == naive(SMALL, w, phi)


def test_c_successors_are_grid_points_in_region():
    f = Frame(GRID, (0, 1), 7, WaldBinomial(0.05))
    w = f.world(0.5, bits("1011000").observations)
    succ = accessible_c(f, w)
    region = f.rule.region(w.evidence)
    assert {v.theta for v in succ} == {t for t in GRID if member(region, t)}
    assert len(succ) == len({v.theta for v in succ}) * len(f.universe)


@pytest.mark.parametrize("length", [0, 1, 2, 3])
def test_extension_count(length):
    w = SMALL.world(0.0, (1,) * length)
    want = sum(2 ** j for j in range(SMALL.horizon - length + 1)) * len(GRID)
    assert len(accessible_e(SMALL, w)) == want


@given(st.sampled_from(ATOMS))
def test_box_c_is_grid_containment(atom):
    box = truth_table(SMALL, BoxC(atom))
    dia = truth_table(SMALL, DiamondC(atom))
    for j, r in enumerate(SMALL.regions):
        in_r = [t for t in GRID if member(r, t)]
        assert box[0, j] == all(member(atom.h, t) for t in in_r)
        assert dia[0, j] == any(member(atom.h, t) for t in in_r)


def test_box_c_equals_region_containment_on_coarse_frame():
    for atom in ATOMS:
        box = truth_table(SMALL, BoxC(atom))
        for j, r in enumerate(SMALL.regions):
            assert box[0, j] == contains(atom.h, r)


def test_pep_holds_at_root_of_fine_normal_frame():
    f = Frame([-1, -0.5, 0, 0.5, 1], (-1, 0, 1), 3, WaldNormal(0.05, 0.25))
    assert check_pep(f, radius=1, max_prefix_len=0) == []
    h = closed(-0.25, 0.25)
    phi = And(DiamondE(DiamondC(Atom(h))), DiamondE(DiamondC(Atom(complement(h)))))
    res = check(f, phi, max_len=0)
    assert res.worlds_satisfying == res.worlds_total == 5


def test_rigged_payload_breaks_pep():
    rule = Rigged(WaldBinomial(0.05), bits("1", 1), point(0.25, UNIT_INTERVAL))
    f = Frame([0.0, 0.25, 0.5, 0.75, 1.0], (0, 1), 1, rule)
    bad = check_pep(f, radius=1, max_prefix_len=1)
    assert any(c.evidence.observations == (1,) and c.theta == 0.75 for c in bad)


def test_check_reports_counterexamples():
    phi = BoxC(Atom(H, "H"))
    res = check(SMALL, phi, limit=3)
    assert res.worlds_total == len(SMALL)
    assert len(res.counterexamples) == 3
    for w in res.counterexamples:
        assert not satisfies(SMALL, w, phi)
    assert json.loads(json.dumps(res.to_json()))["worlds_total"] == len(SMALL)


def test_parse_round_trip():
    hyps = {"H": H, "Hc": complement(H)}
    text = "(and (diamondE (diamondC (atom H))) (diamondE (diamondC Hc)) (not (boxC H)))"
    phi = parse_formula(text, hyps)
    assert parse_formula(str(phi), hyps) == phi
    assert isinstance(phi, And) and isinstance(phi.right, And)


@pytest.mark.parametrize("text", ["(diamondE", "(frob H)", "(atom Z)", "H H", ")", "(and H)"])
def test_parse_errors(text):
    with pytest.raises(FormulaSyntaxError):
        parse_formula(text, {"H": H})


def test_atom_over_other_space_rejected():
    with pytest.raises(AmbientMismatchError):
        truth_table(SMALL, Atom(closed(0, 1), "R"))


def test_grid_must_lie_in_parameter_space():
    with pytest.raises(ValueError):
        Frame([0.0, 1.5], (0, 1), 2, WaldBinomial(0.05))


def test_frame_json_round_trip():
    doc = json.loads(json.dumps(frame_to_json(SMALL, {"H": H})))
    f, hyps = frame_from_json(doc)
    assert f.theta_grid == SMALL.theta_grid and f.horizon == 3 and f.rule == SMALL.rule
    assert hyps == {"H": H}
    g, _ = frame_from_json({"grid": "0:1:9", "horizon": 2, "rule": {"constructor": "wald_binomial",
                                                                  "alpha": 0.1}})
    assert g.theta_grid == tuple(GRID)
