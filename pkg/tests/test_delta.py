import pytest

from descent_sets.beta import build_residue_table
from descent_sets.combinat import is_essential, mask_elements, mask_from_elements, subsets_of
from descent_sets.delta import complex_census, is_face, reduced_euler_char_mod2, verify_euler_parity, vertices
from descent_sets.qsym import flag_f_mod_p


def brute_face_parity(n, s_mask):
    return sum(1 for t in subsets_of(s_mask) if is_face(n, t)) & 1


@pytest.mark.parametrize("n,elems,want", [(6, [2], True), (6, [1], False), (9, [], True), (7, [1, 3], True), (7, [3, 5], False)])
def test_is_face(n, elems, want):
    assert is_face(n, mask_from_elements(elems)) is want


def test_is_face_range():
    with pytest.raises(ValueError):
        is_face(4, 0b1000)


def test_euler_char_examples():
    assert reduced_euler_char_mod2(13, 0) == 1
    assert reduced_euler_char_mod2(6, 0b1) == 1


def test_contractible_three_digit_subcase():
    # n = 2^c + 2^b + 2^a; S meets {2^a, 2^b} in 2^a and {2^c+2^a, 2^c+2^b} in 2^c+2^a
    for a, b, c in [(0, 1, 2), (0, 2, 3), (1, 2, 4)]:
        n = 2**a + 2**b + 2**c
        s = mask_from_elements([2**a, 2**c + 2**a])
        assert reduced_euler_char_mod2(n, s) == 0


def test_chain_count_matches_subset_enumeration():
    for n in range(2, 17):
        for s_mask in range(0, 1 << (n - 1), max(1, (1 << (n - 1)) // 300)):
            assert reduced_euler_char_mod2(n, s_mask) == brute_face_parity(n, s_mask)


def test_vertices_are_essential():
    for n in range(2, 70):
        assert vertices(n) == [k for k in range(1, n) if is_essential(k, n, 2)]


@pytest.mark.parametrize("n", [6, 11, 12, 16, 20])
def test_parity_statement(n):
    report = verify_euler_parity(n)
    assert report.passed, report.counterexample
    assert report.checked == 1 << (n - 1)


def test_parity_direct_small():
    for n in range(1, 13):
        res = build_residue_table(n, 2)
        for s in range(1 << (n - 1)):
            assert reduced_euler_char_mod2(n, s) == int(res[s])


def test_census():
    assert complex_census(8).f_vector == []
    c2 = complex_census(10)
    assert c2.vertices == [2, 8] and c2.f_vector == [2]
    c3 = complex_census(11)
    assert c3.f_vector == [6, 6]
    assert complex_census(15).f_vector == [14, 36, 24]
    assert complex_census(31).f_vector == [30, 150, 240, 120]
    with pytest.raises(ValueError):
        complex_census(63)


def test_census_depends_only_on_digit_count():
    for group in ([3, 5, 6, 12, 40], [7, 11, 13, 14, 21, 56], [15, 23, 27, 29, 30]):
        vectors = {tuple(complex_census(n).f_vector) for n in group}
        assert len(vectors) == 1


def test_mod_two_support_is_face_set():
    for n in range(2, 14):
        support = set(flag_f_mod_p(n, 2))
        faces = {s for s in range(1 << (n - 1)) if is_face(n, s)}
        assert support == faces
