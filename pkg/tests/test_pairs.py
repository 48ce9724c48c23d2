from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from expcarm.arith import DomainError
from expcarm.pairs import (
    ExponentPair,
    FractionalObjective,
    LinearConstraint,
    enumerate_pairs,
    from_word,
    kratzel_check,
    kratzel_exponent,
    kratzel_exponent_formula,
    mu_bound,
    optimize_fractional,
    process_A,
    process_B,
    seed_pair,
)

words = st.text(alphabet="AB", min_size=0, max_size=6)


def test_process_A_examples():
    triv = seed_pair("trivial")
    a = process_A(triv)
    assert (a.k, a.l) == (F(0), F(1))  # fixed point on the trivial pair
    mid = ExponentPair(F(1, 2), F(1, 2))
    a = process_A(mid)
    assert (a.k, a.l) == (F(1, 6), F(2, 3))


def test_process_B_examples():
    b = process_B(seed_pair("trivial"))
    assert (b.k, b.l) == (F(1, 2), F(1, 2))


def test_from_word_chain():
    p = from_word("ABA", "H2005")
    assert (p.k, p.l) == (F(269, 2434), F(1755, 2434))
    assert p.eps_carrying is True
    h = from_word("", "H2005")
    assert (h.k, h.l) == (F(32, 205), F(269, 410))
    assert h.eps_carrying is True
    b = from_word("B", "trivial")
    assert (b.k, b.l) == (F(1, 2), F(1, 2))
    assert b.eps_carrying is False
    with pytest.raises(DomainError):
        from_word("XYZ")


@given(words, st.sampled_from(["trivial", "H2005"]))
@settings(max_examples=120)
def test_B_is_an_involution(word, seed):
    p = from_word(word, seed)
    q = process_B(process_B(p))
    assert (q.k, q.l) == (p.k, p.l)


@given(words, st.sampled_from(["trivial", "H2005"]))
@settings(max_examples=120)
def test_A_preserves_validity(word, seed):
    p = from_word(word, seed)
    a = process_A(p)  # constructor enforces the region invariants
    assert F(0) <= a.k <= F(1, 2) <= a.l <= 1


def test_word_tree_valid_to_depth_six():
    count = 0
    for p in enumerate_pairs(6):
        assert F(0) <= p.k <= F(1, 2) <= p.l <= 1 and p.k <= p.l
        count += 1
    assert count == 2 * (2 ** 7 - 1)


def test_mu_bound_anchors():
    assert mu_bound(F(1, 2)).value == F(32, 205)
    for depth in range(3, 7):
        res = mu_bound(F(3, 5), depth)
        assert res.value == F(1409, 12170)
        assert res.pair.word == "ABA" and res.pair.seed == "H2005"
    triv = mu_bound(F(1), depth=2)
    assert triv.value == 0 and triv.pair.seed == "trivial"
    with pytest.raises(DomainError):
        mu_bound(F(1, 3))


def test_mu_bound_monotone_in_depth_and_nonnegative():
    for sigma in (F(1, 2), F(2, 3), F(4, 5)):
        values = [mu_bound(sigma, d).value for d in range(0, 7)]
        assert all(b <= a for a, b in zip(values, values[1:]))
        assert all(v >= 0 for v in values)


# ---------------------------------------------------------------------------
# optimizer
# ---------------------------------------------------------------------------

GOLDEN = [
    (FractionalObjective(F(1), F(1), F(-1, 2), F(0), F(0), F(2)),
     [LinearConstraint(F(-1), F(1), F(-1, 2))]),
    (FractionalObjective(F(1), F(1), F(-3, 5), F(0), F(0), F(2)),
     [LinearConstraint(F(-1), F(1), F(-3, 5))]),
    (FractionalObjective(F(2), F(-1), F(1), F(1), F(1), F(1)), []),
    (FractionalObjective(F(0), F(0), F(3), F(0), F(0), F(7)), []),
    (FractionalObjective(F(1), F(3), F(0), F(0), F(1), F(2)),
     [LinearConstraint(F(1), F(-1), F(1, 4))]),
]


def test_optimizer_examples():
    obj, cons = GOLDEN[0]
    res = optimize_fractional(obj, cons, depth=0, seeds=("H2005",))
    assert res.value == F(32, 205)
    obj, cons = GOLDEN[1]
    res = optimize_fractional(obj, cons, depth=3)
    assert res.value == F(1409, 12170) and res.pair.word == "ABA"
    res = optimize_fractional(GOLDEN[3][0], [], depth=2)
    assert res.value == F(3, 7)  # constant objective


def test_pruning_matches_enumeration():
    for obj, cons in GOLDEN:
        for depth in (3, 4, 5):
            pruned = optimize_fractional(obj, cons, depth, prune=True)
            plain = optimize_fractional(obj, cons, depth, prune=False)
            assert pruned.feasible == plain.feasible
            if pruned.feasible:
                assert pruned.value == plain.value
                assert pruned.pair.word == plain.pair.word
                assert pruned.pair.seed == plain.pair.seed


def test_optimizer_monotone_in_depth():
    obj, cons = GOLDEN[1]
    values = [optimize_fractional(obj, cons, d).value for d in range(0, 7)]
    assert all(b <= a for a, b in zip(values, values[1:]))


def test_optimizer_infeasible():
    res = optimize_fractional(GOLDEN[2][0],
                              [LinearConstraint(F(0), F(0), F(-1))], 3)
    assert not res.feasible


def test_objective_denominator_guard():
    with pytest.raises(DomainError):
        FractionalObjective(F(1), F(0), F(0), F(1), F(0), F(0))  # zero at k=0


# ---------------------------------------------------------------------------
# divisor error-term conditions
# ---------------------------------------------------------------------------

def test_kratzel_paper_instances():
    H = seed_pair("H2005")
    rep = kratzel_check((1, 3, 5, 5), H)
    assert rep.passes and rep.c32 and not rep.c31
    rep = kratzel_check((2, 3, 3, 4), H)
    assert rep.passes and rep.c32
    assert kratzel_exponent((1, 3, 5, 5), H) == F(1153, 6073)
    assert kratzel_exponent((2, 3, 3, 4), H) == F(1153, 5586)
    assert F(1, 6) < F(1153, 6073) < F(1, 5)
    assert F(1, 5) < F(1153, 5586) < F(1, 4)


def test_kratzel_literal_reading_fails_the_instances():
    H = seed_pair("H2005")
    assert not kratzel_check((1, 3, 5, 5), H, "literal").passes
    assert not kratzel_check((2, 3, 3, 4), H, "literal").passes


def test_kratzel_condition_one_violation():
    H = seed_pair("H2005")
    rep = kratzel_check((1, 1, 1, 100), H)
    assert not rep.c1 and not rep.passes
    with pytest.raises(DomainError):
        kratzel_exponent((1, 1, 1, 100), H)


def test_kratzel_trivial_pair_formula():
    triv = seed_pair("trivial")
    assert kratzel_exponent_formula((1, 3, 5, 5), triv) == F(1, 5)
    assert F(1, 5) >= F(1153, 6073)
    # the guarded operation refuses: condition 1 holds only with equality
    rep = kratzel_check((1, 3, 5, 5), triv)
    assert not rep.c1


def test_kratzel_input_validation():
    H = seed_pair("H2005")
    with pytest.raises(DomainError):
        kratzel_check((3, 2, 5, 5), H)  # not nondecreasing
    with pytest.raises(DomainError):
        kratzel_check((1, 3, 5), H)  # wrong arity
