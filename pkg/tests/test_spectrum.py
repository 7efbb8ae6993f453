import pytest

from auternary.coset import normalize_lattice, normalize_polynomial
from auternary.errors import EnumerationBudgetExceeded, PreconditionViolated
from auternary.spectrum import (
    predicted_misses,
    represents_h,
    represents_h_counted,
    shell_vectors,
    spectrum,
)
from _oracles import h_values_oracle, represents_h_oracle


def fixtures():
    return [
        # (instance, spectrum bound, safe box radius for that bound)
        (normalize_polynomial((4, 0, 0, 4, 0, 4), (4, 4, 4)), 60, 13),
        (normalize_lattice((2, 0, 0, 2, 0, 18), (1, 1, 0)), 120, 13),
        (normalize_lattice((10, 8, 0, 10, 2, 10), (1, 1, 0)), 80, 10),
    ]


def spinor_example():
    return normalize_lattice((10, 8, 0, 10, 2, 10), (1, 1, 0))


def test_spectrum_matches_box_oracle():
    for inst, bound, radius in fixtures():
        spec = spectrum(inst, bound)
        values = h_values_oracle(inst, bound, radius)
        assert spec.exceptions == tuple(t for t in range(bound + 1) if t not in values)
        for t in range(bound + 1):
            assert spec.is_represented(t) == (t in values)


def test_exceptions_are_the_bitmap_complement():
    inst = normalize_lattice((2, 0, 0, 2, 0, 18), (1, 1, 0))
    spec = spectrum(inst, 200)
    assert list(spec.exceptions) == sorted(spec.exceptions)
    assert set(spec.exceptions) == {
        t for t in range(201) if not spec.is_represented(t)
    }
    with pytest.raises(ValueError):
        spec.is_represented(201)
    with pytest.raises(ValueError):
        spec.is_represented(-1)


def test_represents_h_vs_box_scan():
    for inst, _, _ in fixtures():
        assert represents_h(inst, 0)  # H(0) = 0
        for t in range(-3, 26):
            assert represents_h(inst, t) == represents_h_oracle(inst, t, 8), (
                inst.gram.entries,
                t,
            )


def test_represents_h_counted_reports_work():
    inst = spinor_example()
    hit, rows = represents_h_counted(inst, 209)
    assert not hit and rows > 0


def test_shell_vectors_are_negation_closed():
    inst = normalize_polynomial((4, 0, 0, 4, 0, 4), (4, 4, 4))
    for m in (3, 11, 19, 27):
        shell = shell_vectors(inst, m)
        pts = set(shell)
        assert len(pts) == len(shell)
        for v in pts:
            assert tuple(-c for c in v) in pts
            value = sum(
                inst.gram.entries[i][j] * v[i] * v[j]
                for i in range(3)
                for j in range(3)
            )
            assert value == m
            assert all((2 * c - wc) % 2 == 0 for c, wc in zip(v, inst.w))
    with pytest.raises(ValueError):
        shell_vectors(inst, 0)


def test_budgets_are_enforced():
    inst = normalize_lattice((2, 0, 0, 2, 0, 18), (1, 1, 0))
    with pytest.raises(EnumerationBudgetExceeded):
        spectrum(inst, 10_000, budget=0)
    with pytest.raises(EnumerationBudgetExceeded):
        represents_h(inst, 50, budget=0)
    with pytest.raises(ValueError):
        spectrum(inst, 0)


def test_spectra_at_different_bounds_agree():
    inst = spinor_example()
    small = spectrum(inst, 100)
    large = spectrum(inst, 250)
    assert tuple(t for t in large.exceptions if t <= 100) == small.exceptions
    for t in range(101):
        assert small.is_represented(t) == large.is_represented(t)


def test_predicted_misses_window_and_values():
    narrow = normalize_lattice((2, 0, 0, 2, 0, 18), (1, 1, 0))
    with pytest.raises(PreconditionViolated):
        predicted_misses(narrow, 50)

    inst = spinor_example()
    # radOdd = 5, epsilon = 9, shift = 2; q = 2 and q = 5 are excluded by
    # the coprimality rule (det = 320)
    assert predicted_misses(inst, 15) == [9, 59, 149, 209]
    # the progression only promises infinitely many true misses; 209 is one
    # (9, 59 and 149 happen to be represented)
    spec = spectrum(inst, 250)
    assert 209 in spec.exceptions
    assert not represents_h(inst, 209)
