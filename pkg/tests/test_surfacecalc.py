import itertools

import pytest
from hypothesis import given, settings, strategies as st

from alterfold.exactnum import SQRT2, ZERO, AlgMatrix, is_psd, parse, pow2_quarter
from alterfold.surfacecalc import (ConnectedType, closed_z, gram_matrix, gram_problem, kernel_relations, pair,
                                   quotient_dim, rp_check, set_partitions, type_label)

BELL = [1, 1, 2, 5, 15, 52]


def test_closed_surfaces():
    assert closed_z([2]) == SQRT2            # sphere
    assert closed_z([0]) == 2                # torus
    assert closed_z([-2]) == 2 * SQRT2       # genus two
    assert closed_z([2, 2]) == 2             # two spheres
    assert closed_z([]) == 1


def test_pair_examples():
    disk = ConnectedType.planar([(1,)])
    assert pair(disk, disk) == SQRT2
    annulus = ConnectedType.planar([(1, 2)])
    two_disks = ConnectedType.planar([(1,), (2,)])
    assert pair(annulus, annulus) == 2            # torus
    assert pair(annulus, two_disks) == SQRT2      # one sphere
    assert pair(two_disks, two_disks) == 2        # two spheres
    assert pair(disk.with_handle(0), disk) == 2
    with pytest.raises(ValueError):
        pair(disk, annulus)


def test_red_tubes_lower_euler():
    t = ConnectedType(1, ((1,),), (0,), (1,))
    assert t.euler_numbers() == [-1]
    assert pair(t, ConnectedType.planar([(1,)])) == closed_z([0])


def test_invalid_types():
    with pytest.raises(ValueError):
        ConnectedType(3, ((1, 2),))
    with pytest.raises(ValueError):
        ConnectedType(2, ((1,), (2,)), (0,))


@pytest.mark.parametrize("m", range(0, 6))
def test_set_partitions_bell(m):
    parts = list(set_partitions(m))
    assert len(parts) == BELL[m]
    assert len({tuple(sorted(p)) for p in parts}) == BELL[m]


def test_gram_small():
    assert gram_matrix(1).to_rows() == [[SQRT2]]
    assert gram_matrix(2).to_rows() == [[2, SQRT2], [SQRT2, 2]]


def test_basis_order_m3():
    assert [type_label(t) for t in gram_problem(3).basis] == ["(123)", "(1,23)", "(12,3)", "(13,2)", "(1,2,3)"]


@pytest.mark.parametrize("m,dim", [(1, 1), (2, 2), (3, 4), (4, 8)])
def test_quotient_dims(m, dim):
    assert quotient_dim(m) == dim


@pytest.mark.slow
def test_quotient_dim_five():
    assert quotient_dim(5) == 16


def test_kernel_m3():
    (vec,) = kernel_relations(3)
    scaled = [x / vec[1] for x in vec]
    assert scaled == [-SQRT2, 1, 1, 1, -SQRT2]
    assert all(x == ZERO for x in gram_matrix(3).apply(scaled))


def test_kernel_vector_from_text_rejects_minus_one():
    # the variant with -1 in the last slot is not annihilated by the (123) row
    v = [parse("-r2"), parse("1"), parse("1"), parse("1"), parse("-1")]
    assert gram_matrix(3).apply(v)[0] != ZERO


@pytest.mark.parametrize("m", range(1, 5))
def test_reflection_positivity(m):
    assert rp_check(m)


def test_negated_entry_breaks_positivity():
    rows = gram_matrix(2).to_rows()
    rows[0][1] = rows[1][0] = -pow2_quarter(8)
    assert not is_psd(AlgMatrix.from_rows(rows))


@pytest.mark.parametrize("m", range(1, 5))
def test_pair_symmetric_and_additive(m):
    basis = gram_problem(m).basis
    for a, b in itertools.product(basis, repeat=2):
        assert pair(a, b) == pair(b, a)
        # total Euler number is additive: sum of exponents fixed by the two pieces
        total = sum(a.euler_numbers()) + sum(b.euler_numbers())
        comps = len(a.blocks) + len(b.blocks)  # upper bound on components
        value = pair(a, b)
        assert any(value == pow2_quarter(4 * c - total) for c in range(1, comps + 1))


@settings(max_examples=60)
@given(st.integers(1, 4), st.data())
def test_handle_scales_by_sqrt2(m, data):
    basis = gram_problem(m).basis
    a = data.draw(st.sampled_from(basis))
    b = data.draw(st.sampled_from(basis))
    block = data.draw(st.integers(0, len(a.blocks) - 1))
    assert pair(a.with_handle(block), b) == SQRT2 * pair(a, b)
