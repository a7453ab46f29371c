from fractions import Fraction
import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from infinitesimals.errors import DivisionByZero, NotRepresentable, UndefinedTerm
from infinitesimals.ratfunc import Ordering, RatFunc, Sign
from infinitesimals.series import Series
from infinitesimals.ultrapower import (
    DefinableHyperreal,
    Interval,
    Membership,
    SequenceSpec,
    SetFamily,
    check_filter,
    check_ultrafilter,
    classify_sequence,
    definable_value,
    enumerate_ultrafilters,
    omega_arith,
    omega_compare,
    parse_sequence_spec,
    star_extend,
    star_set_membership,
)

omega = DefinableHyperreal.omega()
TRIPARTITE = "1 mod 3: -n; 2 mod 3: n; 0 mod 3: 1/n"


# -- filters -------------------------------------------------------------------

def brute_axioms(n, members):
    """Independent oracle over explicit frozensets."""
    universe = frozenset(range(1, n + 1))
    fam = {frozenset(s) for s in members}
    ax0 = frozenset() not in fam
    ax2 = all(t in fam for s in fam for t in map(frozenset, powerset(universe)) if s <= t)
    ax3 = all(s & t in fam for s in fam for t in fam)
    ax4 = all(s in fam or universe - s in fam for s in map(frozenset, powerset(universe)))
    return ax0, ax2, ax3, ax4


def powerset(u):
    u = sorted(u)
    return itertools.chain.from_iterable(itertools.combinations(u, k) for k in range(len(u) + 1))


def test_check_filter_examples():
    evens = SetFamily.principal(12, [2, 4, 6, 8, 10, 12])
    rep = check_filter(evens)
    assert rep.holds
    assert brute_axioms(12, evens.sets())[:3] == (True, True, True)
    rep = check_filter(SetFamily.from_sets(3, [[]]))
    assert not rep.verdict("0").holds
    broken = SetFamily.from_sets(3, [[1], [1, 2, 3]])
    rep = check_filter(broken)
    assert not rep.verdict("2").holds
    assert rep.verdict("2").witness[0] == (1,)


def test_threshold_axiom():
    fam = SetFamily.principal(5, [1])
    assert check_filter(fam, threshold=1).verdict("1").holds  # only the full set is forced
    rep = check_filter(fam, threshold=2)
    assert not rep.verdict("1").holds  # {2,3,4,5} has a one-element complement
    rep = check_filter(SetFamily.full(3) if hasattr(SetFamily, "full") and callable(SetFamily.full)
                       else SetFamily.from_sets(3, powerset(range(1, 4))), threshold=4)
    assert any("contradicts (0)" in n for n in rep.notes)


def test_check_ultrafilter_examples():
    rep = check_ultrafilter(SetFamily.principal(12, [7]))
    assert rep.holds and rep.principal and rep.generator == (7,)
    even = SetFamily.from_sets(4, [s for s in powerset(range(1, 5)) if len(s) % 2 == 0])
    rep = check_ultrafilter(even)
    assert not rep.verdict("4").holds
    (w,) = rep.verdict("4").witness
    assert len(w) % 2 == 1
    power = SetFamily.from_sets(3, powerset(range(1, 4)))
    assert not check_ultrafilter(power).verdict("0").holds
    assert any("(0)" in n for n in rep.notes)


def test_report_formats():
    rep = check_ultrafilter(SetFamily.principal(4, [2]))
    d = rep.to_dict()
    assert d["principal"] is True and d["generator"] == [2]
    assert "principal: yes" in rep.to_text()
    fam = SetFamily.from_json('{"universe": 12, "members": [[2, 4, 6]]}')
    assert fam.to_json() == {"universe": 12, "members": [[2, 4, 6]]}


def all_ultrafilters_brute(n):
    """Every family on {1..n} passing (0),(2),(3),(4), by looping over all 2^(2^n) families."""
    full = (1 << n) - 1
    subsets = range(full + 1)
    up = {s: [s | (1 << i) for i in range(n) if not s >> i & 1] for s in subsets}
    found = []
    for fam in range(1 << (full + 1)):
        if fam & 1:
            continue  # empty set present
        mem = [s for s in subsets if fam >> s & 1]
        if any(not (fam >> s & 1) and not (fam >> (full ^ s) & 1) for s in subsets):
            continue
        if any(not (fam >> t & 1) for s in mem for t in up[s]):
            continue
        if any(not (fam >> (s & t) & 1) for s in mem for t in mem):
            continue
        found.append(frozenset(mem))
    return found


@pytest.mark.parametrize("n", [3, 4])
def test_brute_force_all_families(n):
    found = all_ultrafilters_brute(n)
    assert sorted(found, key=sorted) == sorted((SetFamily.principal(n, [k]).members for k in range(1, n + 1)),
                                                key=sorted)
    for members in found:
        rep = check_ultrafilter(SetFamily(n, members))
        assert rep.holds and rep.principal


@pytest.mark.parametrize("n", range(3, 11))
def test_exhaustive_search_principal(n):
    fams = list(enumerate_ultrafilters(n))
    assert len(fams) == n
    gens = set()
    for fam in fams:
        rep = check_ultrafilter(fam)
        assert rep.holds and rep.principal
        gens.add(rep.generator)
    assert gens == {(k,) for k in range(1, n + 1)}


@given(st.integers(3, 7), st.data())
def test_checker_matches_brute_oracle(n, data):
    members = data.draw(st.sets(st.sampled_from(list(powerset(range(1, n + 1)))), max_size=12))
    fam = SetFamily.from_sets(n, members)
    rep = check_ultrafilter(fam)
    ax0, ax2, ax3, ax4 = brute_axioms(n, members)
    assert [rep.verdict(a).holds for a in "0234"] == [ax0, ax2, ax3, ax4]


# -- omega arithmetic ----------------------------------------------------------

def test_omega_examples():
    assert omega_compare(omega + 1, omega) is Ordering.GREATER
    for r in (Fraction(1, 10**6), Fraction(1), 10**6):
        assert omega_compare(1 / omega, r) is Ordering.LESS
    assert omega_compare(1 / omega**2, 1 / omega) is Ordering.LESS
    assert str(omega + 1) == "omega + 1"
    assert str(omega_arith(omega, omega, "mul")) == "omega^2"
    with pytest.raises(DivisionByZero):
        omega_arith(omega, DefinableHyperreal.coerce(0), "div")


def test_omega_term_sequence():
    h = omega + 1
    assert [h.term(n) for n in range(1, 5)] == [2, 3, 4, 5]
    assert all(h.term(n) > omega.term(n) for n in range(1, 100))


def random_rational_spec(rng):
    num = [rng.randint(-9, 9) for _ in range(rng.randint(1, 4))]
    den = [rng.randint(1, 9) for _ in range(rng.randint(1, 3))]  # positive for n >= 1
    src = "(" + " + ".join(f"({c})*n^{k}" for k, c in enumerate(num)) + ")/(" + \
        " + ".join(f"({c})*n^{k}" for k, c in enumerate(den)) + ")"

    def term(n):
        return Fraction(sum(c * n**k for k, c in enumerate(num)), sum(c * n**k for k, c in enumerate(den)))

    return SequenceSpec.rational(src), term


def test_omega_compare_coherence_300():
    rng = random.Random(99)
    for _ in range(300):
        (a, ta), (b, tb) = random_rational_spec(rng), random_rational_spec(rng)
        verdict = omega_compare(definable_value(a), definable_value(b))
        votes = {Ordering.LESS: 0, Ordering.EQUAL: 0, Ordering.GREATER: 0}
        for n in range(1000, 1501):
            d = ta(n) - tb(n)
            votes[Ordering.LESS if d < 0 else Ordering.GREATER if d > 0 else Ordering.EQUAL] += 1
        assert verdict is max(votes, key=votes.get)


@given(st.dictionaries(st.integers(1, 50), st.integers(-100, 100), max_size=6))
def test_equivalence_by_cofiniteness(over):
    base = SequenceSpec.rational("n^2 - 3*n")
    assert definable_value(base.with_overrides(over)) == definable_value(base)
    for n, v in over.items():
        assert base.with_overrides(over).term(n) == v


# -- classification ------------------------------------------------------------

def test_tripartite():
    rep = classify_sequence(parse_sequence_spec(TRIPARTITE), 100)
    assert rep.cases == {"i", "ii", "iii"}
    ds = {c: [str(p) for p in v] for c, v in rep.decision_sets.items()}
    assert ds == {"i": ["{1, 4, 7, ...}"], "ii": ["{2, 5, 8, ...}"], "iii": ["{3, 6, 9, ...}"]}
    assert rep.values["i"] == [-omega] and rep.values["ii"] == [omega]
    (b3,) = [b for b in rep.branches if b.case == "iii"]
    assert b3.value == 1 / omega and b3.limit == 0 and b3.infinitesimal_sign is Sign.POSITIVE
    assert any("choice" in n for n in rep.notes)


def test_classify_other_examples():
    rep = classify_sequence(SequenceSpec.rational("7/2"))
    assert rep.cases == {"iii"} and rep.values["iii"] == [DefinableHyperreal.coerce(Fraction(7, 2))]
    rep = classify_sequence(SequenceSpec.rational("n^2"))
    assert rep.cases == {"ii"} and rep.values["ii"] == [omega**2]
    # cross-check growth by sampling 10^4 terms
    seq = SequenceSpec.rational("n^2")
    terms = [seq.term(n) for n in range(1, 10001)]
    assert all(b > a for a, b in zip(terms, terms[1:]))
    with pytest.raises(UndefinedTerm):
        classify_sequence(SequenceSpec.rational("1/(n - 40)"))
    with pytest.raises(ValueError):
        classify_sequence(SequenceSpec.rational("n"), horizon=50)


def test_sampled_is_heuristic():
    vals = []
    for n in range(1, 301):
        vals.append(Fraction(n) if n % 3 == 1 else Fraction(1, n) if n % 3 == 2 else 2 + Fraction(1, n))
    rep = classify_sequence(SequenceSpec.sampled(vals), 300)
    assert rep.heuristic
    assert "ii" in rep.cases and "iii" in rep.cases
    limits = sorted(b.limit for b in rep.branches if b.case == "iii")
    assert limits == [0, 2]
    assert any("choice" in n for n in rep.notes)


@given(st.integers(2, 6), st.data())
def test_partition_soundness(modulus, data):
    exprs = data.draw(st.lists(st.sampled_from(["n", "-n", "1/n", "3", "n^2 - 5", "(n + 1)/n"]),
                               min_size=modulus, max_size=modulus))
    seq = SequenceSpec.interleaved([(r, modulus, e) for r, e in enumerate(exprs)])
    rep = classify_sequence(seq)
    sets = [b.decision_set for b in rep.branches]
    for n in range(1, 200):
        assert sum(n in s for s in sets) == 1


# -- star extensions -----------------------------------------------------------

def test_star_extend_examples():
    assert star_extend("1/x", omega) == 1 / omega
    assert star_extend("x^2", omega) == omega**2
    h = star_extend("x + 1", omega)
    assert h == omega + 1
    assert all(h.term(n) == omega.term(n) + 1 for n in range(1, 50))
    s = star_extend("exp(x)", 1 / omega)
    assert isinstance(s, Series) and s.coeff(0) == 1 and s.coeff(1) == 1
    with pytest.raises(NotRepresentable):
        star_extend("exp(x)", omega)


def test_star_set_membership_examples():
    assert star_set_membership(Interval.parse("(0, 1)"), 1 / omega) is Membership.IN
    assert star_set_membership(Interval.parse("(0, 1)"), omega) is Membership.OUT
    assert star_set_membership(Interval.parse("[0, inf)"), 1 / omega - 1 / omega**2) is Membership.IN
    assert star_set_membership("(0, 1)", parse_sequence_spec(TRIPARTITE)) is Membership.UNDECIDABLE
    assert star_set_membership("(-inf, 0)", -omega) is Membership.IN


def test_definable_value_needs_agreement():
    with pytest.raises(NotRepresentable):
        definable_value(parse_sequence_spec(TRIPARTITE))
    assert definable_value(parse_sequence_spec("1 mod 2: n; 0 mod 2: n")) == omega
    assert DefinableHyperreal(RatFunc.x()) == 1 / omega
