from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from procfair.errors import (
    AmbiguousRateError,
    MissingCriterionError,
    MissingRateError,
    ProcedureSpecError,
)
from procfair.population import (
    AttributeEquals,
    CriterionEquals,
    ExplicitIdSet,
    Individual,
    Population,
    Singleton,
)
from procfair.procedure import (
    ACQUITTED,
    CONVICTED,
    DeterministicProcedure,
    apply_deterministic,
    as_probability,
    as_rational,
    empirical_rates,
    exact_rates,
    global_procedure,
    load_procedure,
    make_group_fair,
    per_group_procedure,
    simulate,
)


# --- probability parsing ---------------------------------------------------


@pytest.mark.parametrize(
    "raw,expected",
    [
        ("3/4", Fraction(3, 4)),
        ("0.75", Fraction(3, 4)),
        (0.75, Fraction(3, 4)),
        (0.1, Fraction(1, 10)),  # via decimal repr, not the float's binary expansion
        ("1e-3", Fraction(1, 1000)),
        (1, Fraction(1)),
        (Fraction(2, 5), Fraction(2, 5)),
    ],
)
def test_as_probability_parses(raw, expected):
    assert as_probability(raw) == expected


@pytest.mark.parametrize("raw", ["5/4", -0.1, 2, "1.01"])
def test_as_probability_rejects_out_of_range(raw):
    with pytest.raises(ValueError, match="out of range"):
        as_probability(raw)


@pytest.mark.parametrize("raw", ["abc", "1/0", None, True])
def test_as_rational_rejects_garbage(raw):
    with pytest.raises(ValueError):
        as_rational(raw)


# --- deterministic evaluation ----------------------------------------------


def test_apply_deterministic_is_identity_on_criterion():
    pop = Population([Individual("a", 1, criterion=1), Individual("b", 0, criterion=0)])
    out = apply_deterministic(DeterministicProcedure(), pop)
    assert dict(out) == {"a": 1, "b": 0}
    assert out.provenance.kind == "deterministic"


def test_apply_deterministic_missing_criterion_names_id():
    pop = Population([Individual("a", 1, criterion=1), Individual("nope", 0)])
    with pytest.raises(MissingCriterionError, match="'nope'"):
        apply_deterministic(DeterministicProcedure(), pop)


def test_apply_deterministic_empty_population():
    out = apply_deterministic(DeterministicProcedure(), Population([]))
    assert len(out) == 0


def test_exact_rates_deterministic_counts(four_member_pop):
    # by direct enumeration: both guilty convicted, one of two innocents convicted
    rates = exact_rates(DeterministicProcedure(), four_member_pop)
    assert rates.h == Fraction(1)
    assert rates.k == Fraction(1, 2)
    assert rates.support == (2, 2)


def test_exact_rates_empty_class_is_undefined():
    pop = Population([Individual("a", 1, criterion=0)])
    rates = exact_rates(DeterministicProcedure(), pop)
    assert rates.h is None  # no guilty members
    assert rates.k == Fraction(1)
    assert rates.support == (0, 1)


# --- randomized rates --------------------------------------------------------


def test_exact_rates_global_applies_to_any_group(demo_pop, demo_proc):
    expected = (Fraction(3, 4), Fraction(1, 10))
    for g in (None, AttributeEquals("sex", "M"), AttributeEquals("sex", "F")):
        rates = exact_rates(demo_proc, demo_pop, g)
        assert (rates.h, rates.k) == expected


def test_exact_rates_global_identical_for_singletons(demo_pop, demo_proc):
    some_guilty = next(i for i in demo_pop if i.merit == 0)
    rates = exact_rates(demo_proc, demo_pop, Singleton(some_guilty.id))
    assert rates.h == Fraction(3, 4)
    assert rates.k is None  # singleton has no innocent member


def test_exact_rates_heterogeneous_group_is_ambiguous():
    pop = Population(
        [
            Individual("a", 0, attributes={"sex": "M"}),
            Individual("b", 0, attributes={"sex": "F"}),
        ]
    )
    proc = per_group_procedure("sex", {"M": ("1/2", "1/2"), "F": ("1/4", "1/4")})
    with pytest.raises(AmbiguousRateError):
        exact_rates(proc, pop)
    # but a group within one rate class is fine
    rates = exact_rates(proc, pop, AttributeEquals("sex", "F"))
    assert rates.h == Fraction(1, 4)


def test_missing_rate_for_observed_value():
    pop = Population([Individual("a", 0, attributes={"sex": "M"})])
    proc = per_group_procedure("sex", {"F": ("1/2", "1/2")})
    with pytest.raises(MissingRateError, match="sex=.?M"):
        exact_rates(proc, pop)


def test_make_group_fair_assigns_identical_pairs():
    proc = make_group_fair("3/4", "1/10", "sex", {"M", "F"})
    assert proc.rates.table["M"] == proc.rates.table["F"] == (Fraction(3, 4), Fraction(1, 10))


def test_make_group_fair_rejects_empty_values():
    with pytest.raises(ValueError):
        make_group_fair("1/2", "1/2", "sex", [])


@given(st.fractions(min_value=0, max_value=1), st.fractions(min_value=0, max_value=1))
def test_acquittal_rates_complement_conviction_rates(h, k):
    pop = Population([Individual("a", 0), Individual("b", 1)])
    rates = exact_rates(global_procedure(h, k), pop)
    assert rates.acquittal_h == 1 - rates.h
    assert rates.acquittal_k == 1 - rates.k


# --- simulation --------------------------------------------------------------


def _tiny_pop():
    return Population(
        [Individual(f"g{i}", 0) for i in range(5)] + [Individual(f"i{i}", 1) for i in range(5)]
    )


def test_simulate_degenerate_all_convicted():
    for a in simulate(global_procedure(1, 1), _tiny_pop(), seed=3, trials=4):
        assert all(u == CONVICTED for u in a.values())


def test_simulate_degenerate_all_acquitted():
    for a in simulate(global_procedure(0, 0), _tiny_pop(), seed=3, trials=4):
        assert all(u == ACQUITTED for u in a.values())


def test_simulate_same_seed_bit_identical():
    pop = _tiny_pop()
    proc = global_procedure("1/3", "2/3")
    first = simulate(proc, pop, seed=99, trials=6)
    second = simulate(proc, pop, seed=99, trials=6)
    for a, b in zip(first, second):
        assert np.array_equal(a.values_array, b.values_array)
    third = simulate(proc, pop, seed=100, trials=6)
    assert any(
        not np.array_equal(a.values_array, c.values_array) for a, c in zip(first, third)
    )


def test_simulate_provenance_and_order():
    pop = _tiny_pop()
    runs = simulate(global_procedure("1/2", "1/2"), pop, seed=1, trials=3)
    assert [a.provenance.trial for a in runs] == [0, 1, 2]
    assert all(a.provenance.seed == 1 for a in runs)
    assert list(runs[0]) == list(pop.ids())


def test_simulate_rejects_zero_trials():
    with pytest.raises(ValueError):
        simulate(global_procedure(0, 0), _tiny_pop(), seed=1, trials=0)


def test_empirical_rates_near_configured():
    # binomial standard error bound: 3 sigma on 2000 draws per class
    pop = Population(
        [Individual(f"g{i}", 0) for i in range(20)] + [Individual(f"i{i}", 1) for i in range(20)]
    )
    proc = global_procedure("3/4", "1/10")
    rates = empirical_rates(pop, simulate(proc, pop, seed=11, trials=100))
    assert abs(float(rates.h) - 0.75) < 3 * (0.75 * 0.25 / 2000) ** 0.5
    assert abs(float(rates.k) - 0.10) < 3 * (0.10 * 0.90 / 2000) ** 0.5
    assert rates.support == (20, 20)


def test_empirical_rates_for_subgroup():
    pop = _tiny_pop()
    runs = simulate(global_procedure(1, 0), pop, seed=5, trials=7)
    only_guilty = empirical_rates(pop, runs, ExplicitIdSet({"g0", "g1"}))
    assert only_guilty.h == Fraction(1)
    assert only_guilty.k is None


# --- procedure description files ---------------------------------------------


def test_load_procedure_deterministic():
    assert load_procedure('{"type": "deterministic"}') == DeterministicProcedure()


def test_load_procedure_global_rates():
    proc = load_procedure('{"type": "randomized", "rates": {"global": ["3/4", 0.1]}}')
    assert (proc.rates.h, proc.rates.k) == (Fraction(3, 4), Fraction(1, 10))


def test_load_procedure_per_group():
    proc = load_procedure(
        '{"type": "randomized", "attribute": "sex",'
        ' "rates": {"M": ["3/4", "1/10"], "F": [0.75, "0.1"]}}'
    )
    assert proc.rates.attribute == "sex"
    assert proc.rates.table["M"] == proc.rates.table["F"]


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        '{"type": "magic"}',
        '{"type": "randomized"}',
        '{"type": "randomized", "rates": {"global": [2, 0]}}',
        '{"type": "randomized", "rates": {"M": [0.1, 0.2]}}',  # attribute missing
        '{"type": "randomized", "attribute": "sex", "rates": {"global": [0.1, 0.2]}}',
        '{"type": "randomized", "rates": {"global": [0.1]}}',
    ],
)
def test_load_procedure_rejects_malformed(text):
    with pytest.raises(ProcedureSpecError):
        load_procedure(text)


def test_criterion_groups_see_same_global_rates():
    pop = Population(
        [Individual("a", 0, criterion=0), Individual("b", 0, criterion=1), Individual("c", 1, criterion=1)]
    )
    proc = global_procedure("1/3", "1/3")
    by_x0 = exact_rates(proc, pop, CriterionEquals(0))
    by_x1 = exact_rates(proc, pop, CriterionEquals(1))
    assert by_x0.h == by_x1.h == Fraction(1, 3)
