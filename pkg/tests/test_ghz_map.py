"""Induced stabilizers on the remaining parties after measuring party A.

Dense projector checks live in qdistill.oracle ("ghz_residual" identities);
the tests here pin the structural layout those identities rely on.
"""

import numpy as np
import pytest

from qdistill.codes import get_code
from qdistill.ghz_map import (
    BSplit,
    induced_bc,
    induced_code,
    induced_multi,
    pair_zz_rows,
    party_label,
)
from qdistill.oracle import verify_identity
from qdistill.paulis import PauliOperator


def test_party_labels():
    assert [party_label(i) for i in range(4)] == ["A", "B", "C", "D"]


@pytest.mark.parametrize("label", ["+XZZXI", "+IXZZX", "+YYI", "+IYY"])
@pytest.mark.parametrize("outcome", [1, -1])
def test_three_party_identity_holds_densely(label, outcome):
    stab = PauliOperator.from_label(label)
    report = verify_identity("ghz_residual", stab=stab, outcome=outcome)
    assert report["pass"], report


def test_induced_bc_layout():
    stab = PauliOperator.from_label("+XZZXI")
    ind = induced_bc(stab, 1)
    labels = dict((lab, p.label()) for lab, p in ind.parts)
    assert ind.sign == 1
    assert labels["B"] == "+XZZXI"
    # Charlie's factor keeps only the X-support
    assert labels["C"] == "+XIIXI"
    assert induced_bc(stab, -1).sign == -1


def test_induced_bc_pure_z_leaves_charlie_untouched():
    stab = PauliOperator.from_label("+ZZIII")
    ind = induced_bc(stab, -1)
    labels = dict((lab, p.label()) for lab, p in ind.parts)
    assert labels["B"] == "+ZZIII"
    assert labels["C"] == "+IIIII"
    assert ind.sign == -1


def test_pair_zz_rows_connect_adjacent_parties():
    rows = pair_zz_rows(2, 3)
    assert [r.label() for r in rows] == ["+IIZIZI", "+IIIZIZ"]
    rows4 = pair_zz_rows(1, 4)
    assert [r.label() for r in rows4] == ["+IZZI", "+IIZZ"]


def test_default_split_puts_all_z_on_the_first_recipient():
    b = np.array([0, 1, 1, 0, 0], dtype=np.uint8)
    split = BSplit.default(b, 4)
    assert len(split.pieces) == 3
    assert np.array_equal(split.pieces[0], b)
    for piece in split.pieces[1:]:
        assert not np.any(piece)


def test_induced_multi_default_split_layout():
    stab = PauliOperator.from_label("+XZZXI")
    split = BSplit.default(stab.z_bits, 4)
    ind = induced_multi(stab, 1, 4, split)
    labels = [(lab, p.label()) for lab, p in ind.parts]
    assert labels == [("B", "+XZZXI"), ("C", "+XIIXI"), ("D", "+XIIXI")]
    emb = ind.embedded(4)
    assert emb.label() == "+" + "I" * 5 + "XZZXI" + "XIIXI" + "XIIXI"


@pytest.mark.parametrize("outcome", [1, -1])
def test_custom_split_still_satisfies_the_dense_identity(outcome):
    # move part of the Z-support from B onto C and re-verify the projector
    stab = PauliOperator.from_label("+XZZXI")
    b1 = np.array([0, 1, 0, 0, 0], dtype=np.uint8)
    b2 = stab.z_bits ^ b1
    split = BSplit([b1, b2])
    report = verify_identity("ghz_residual_multi", stab=stab, parties=3, split=split,
                             outcome=outcome)
    assert report["pass"], report


def test_single_qubit_identity_four_parties():
    report = verify_identity("ghz_residual_multi", stab=PauliOperator.from_label("+Y"),
                             parties=4)
    assert report["pass"], report


def test_induced_code_assembles_the_joint_code():
    code = get_code("five_qubit")
    joint = induced_code(code, [1, -1, 1, 1], 3)
    assert joint.n == 10
    assert joint.k == 1
    # 4 induced generators followed by 5 adjacent ZZ rows
    assert len(joint.generators) == 9
    assert joint.validate() == []
    assert joint.generators[1].phase_exp == 2  # the -1 outcome
    for row in joint.generators[4:]:
        assert not row.xw.any()


def test_induced_code_respects_custom_splits():
    code = get_code("five_qubit")
    g0 = code.generators[0]
    b1 = np.zeros(5, dtype=np.uint8)
    b1[1] = 1
    split = BSplit([b1, g0.z_bits ^ b1])
    joint = induced_code(code, [1, 1, 1, 1], 3, splits={0: split})
    assert joint.validate() == []
    # generator 0's C-factor now carries part of the Z-support (the default
    # split would have left it with none)
    c_half = joint.generators[0].z_bits[5:]
    assert c_half[1] == 0 and c_half.sum() >= 1
