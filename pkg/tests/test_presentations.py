"""Tests for component presentations of resolved collisions and the
local Tate-Shafarevich groups computed from them."""

import json
from fractions import Fraction

import pytest

from ellfib.errors import PresentationInconsistent
from ellfib.exact_linalg import DivisibleGroup
from ellfib.presentations import (
    BranchPresentation,
    CollisionPresentation,
    DivisorRecord,
    PresentationStore,
    ambient_chart,
    assemble,
    builtin_presentations,
    load_presentation_file,
    local_sha,
    local_sha_with_witnesses,
    presentation_from_dict,
)

REFERENCE_WITNESS = (
    Fraction(1, 2), Fraction(0), Fraction(1, 2), Fraction(1, 2),
    Fraction(0), Fraction(0), Fraction(0),
)


def _i2_i0star() -> CollisionPresentation:
    return builtin_presentations()[("I2", "I0*")]


# ---------------------------------------------------------------------------
# data validation


def test_divisor_record_validation():
    with pytest.raises(PresentationInconsistent):
        DivisorRecord(0, 1, (1,))
    with pytest.raises(PresentationInconsistent):
        DivisorRecord(1, 0, (1,))
    with pytest.raises(PresentationInconsistent):
        DivisorRecord(1, 1, (0, 0))
    with pytest.raises(PresentationInconsistent):
        DivisorRecord(1, 1, (1, -1))


def test_presentation_bookkeeping_identity():
    # each branch's divisors must sweep out exactly the central fibre
    with pytest.raises(PresentationInconsistent):
        CollisionPresentation(
            (1, 2),
            (BranchPresentation("I1", (DivisorRecord(1, 1, (1, 1)),)),),
        )
    with pytest.raises(PresentationInconsistent):
        CollisionPresentation((1, 1), ())
    with pytest.raises(PresentationInconsistent):
        CollisionPresentation((0, 1), (BranchPresentation("I1", (DivisorRecord(1, 1, (0, 1)),)),))
    with pytest.raises(PresentationInconsistent):
        # incidence length mismatch
        CollisionPresentation(
            (1,),
            (BranchPresentation("I1", (DivisorRecord(1, 1, (1, 0)),)),),
        )
    with pytest.raises(PresentationInconsistent):
        BranchPresentation("I1", ())


def test_tampered_multiplicity_is_rejected():
    data = _builtin_as_dict()
    data["branches"][1]["divisors"][2]["m"] = 1  # doubled component un-doubled
    with pytest.raises(PresentationInconsistent):
        presentation_from_dict(data)


# ---------------------------------------------------------------------------
# matrix assembly


def test_assemble_shapes_and_commutation():
    r, n, m0, sigma = assemble(_i2_i0star())
    assert (r.rows, r.cols) == (7, 2)
    assert (n.rows, n.cols) == (6, 7)
    assert (m0.rows, m0.cols) == (6, 1)
    assert (sigma.rows, sigma.cols) == (1, 2)
    assert n @ r == m0 @ sigma
    # R is block diagonal with the m * r weights of each branch
    assert r.to_rows() == [
        [1, 0], [1, 0],
        [0, 1], [0, 1], [0, 2], [0, 1], [0, 1],
    ]
    assert m0.to_rows() == [[1], [1], [2], [2], [1], [1]]


# ---------------------------------------------------------------------------
# the local group


def test_builtin_collision_group_and_witness():
    pres = _i2_i0star()
    assert local_sha(pres) == DivisibleGroup.cyclic(2)
    group, witnesses = local_sha_with_witnesses(pres)
    assert group == DivisibleGroup.cyclic(2)
    assert len(witnesses) == 1
    chart = ambient_chart(pres)
    zero = (Fraction(0),) * 7
    assert chart.same_class(witnesses[0], REFERENCE_WITNESS)
    assert not chart.same_class(witnesses[0], zero)
    # the witness is 2-torsion: doubling lands in the trivial class
    doubled = tuple(2 * x for x in witnesses[0])
    assert chart.same_class(doubled, zero)


def test_group_invariant_under_branch_and_divisor_order():
    pres = _i2_i0star()
    swapped_branches = CollisionPresentation(
        pres.central_multiplicities, tuple(reversed(pres.branches))
    )
    assert local_sha(swapped_branches) == DivisibleGroup.cyclic(2)
    b0, b1 = pres.branches
    permuted = CollisionPresentation(
        pres.central_multiplicities,
        (
            BranchPresentation(b0.fibre_type, tuple(reversed(b0.divisors))),
            BranchPresentation(b1.fibre_type, tuple(reversed(b1.divisors))),
        ),
    )
    assert local_sha(permuted) == DivisibleGroup.cyclic(2)


def test_single_branch_presentation():
    # one I2 branch alone: R = (1, 1)^T column-stacked, kernel of the
    # induced map on a single-branch square
    pres = CollisionPresentation(
        (1, 1),
        (BranchPresentation("I2", (DivisorRecord(1, 1, (1, 0)), DivisorRecord(1, 1, (0, 1)))),),
    )
    group = local_sha(pres)
    assert group.divisible_rank == 0 and group.order() == 1


# ---------------------------------------------------------------------------
# JSON interchange and the registry


def _builtin_as_dict() -> dict:
    pres = _i2_i0star()
    return {
        "pair": ["I2", "I0*"],
        "central_multiplicities": list(pres.central_multiplicities),
        "branches": [
            {
                "fibre_type": br.fibre_type,
                "divisors": [
                    {"m": dv.m, "r": dv.r, "incidence": list(dv.incidence)}
                    for dv in br.divisors
                ],
            }
            for br in pres.branches
        ],
    }


def test_presentation_from_dict_round_trip():
    pair, pres = presentation_from_dict(_builtin_as_dict())
    assert pair == ("I2", "I0*")
    assert pres == _i2_i0star()


def test_presentation_from_dict_rejects_malformed_data():
    with pytest.raises(PresentationInconsistent):
        presentation_from_dict({})
    data = _builtin_as_dict()
    data["pair"] = ["I2"]
    with pytest.raises(PresentationInconsistent):
        presentation_from_dict(data)
    data = _builtin_as_dict()
    data["pair"] = ["I2", "I1*"]  # does not match the branch types
    with pytest.raises(PresentationInconsistent):
        presentation_from_dict(data)
    data = _builtin_as_dict()
    del data["branches"][0]["divisors"][0]["incidence"]
    with pytest.raises(PresentationInconsistent):
        presentation_from_dict(data)


def test_load_presentation_file(tmp_path):
    path = tmp_path / "pres.json"
    path.write_text(json.dumps(_builtin_as_dict()), encoding="utf-8")
    pair, pres = load_presentation_file(path)
    assert pair == ("I2", "I0*")
    assert local_sha(pres) == DivisibleGroup.cyclic(2)
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2, 3]", encoding="utf-8")
    with pytest.raises(PresentationInconsistent):
        load_presentation_file(bad)


def test_store_lookup_is_order_insensitive(tmp_path):
    store = PresentationStore()
    found = store.lookup("I2", "I0*")
    assert found is not None and found == _i2_i0star()
    assert store.lookup("I0*", "I2") == found
    assert store.lookup("I1", "I1") is None
    # loading a directory registers every *.json file
    path = tmp_path / "custom.json"
    data = _builtin_as_dict()
    path.write_text(json.dumps(data), encoding="utf-8")
    fresh = PresentationStore()
    loaded = fresh.load_directory(tmp_path)
    assert loaded == [("I2", "I0*")]


def test_shipped_presentation_file_matches_builtin():
    import pathlib

    here = pathlib.Path(__file__).resolve().parent.parent
    shipped = here / "corpus" / "presentations" / "i2_i0star.json"
    pair, pres = load_presentation_file(shipped)
    assert set(pair) == {"I2", "I0*"}
    assert pres == _i2_i0star()
