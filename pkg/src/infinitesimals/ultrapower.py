"""Filters, ultrafilters and the definable fragment of the hyperreals.

Two pieces live here.

* A checker for the filter axioms over a finite universe {1..n}. On a
  finite universe every set is finite, so "finite sets are not decisive"
  is read as "the empty set is not decisive", and "cofinite sets are
  decisive" becomes a threshold axiom: any set whose complement has fewer
  than ``t`` elements must be decisive. A literal reading (t > n) would make
  every set decisive, including the empty set.

* Hyperreals represented by sequences that are rational functions of the
  index n. Any two such sequences compare the same way for all but
  finitely many n, so their order is fixed without choosing an
  ultrafilter. With omega = [1, 2, 3, ...] this fragment is Q(x) under
  omega = 1/x, and arithmetic is delegated to :mod:`ratfunc`.

Indices are 1-based throughout.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import DivisionByZero, NotRepresentable, UndefinedTerm
from .expr import (
    Expr,
    RatFuncBackend,
    RealExact,
    SeriesBackend,
    evaluate,
    free_variables,
    is_rational_expr,
    parse,
    render,
)
from .poly import Poly
from .ratfunc import (
    Classification,
    Ordering,
    RatFunc,
    Sign,
    classify,
    compare,
    eval_at,
    low_order_sign,
    standard_part,
)
from .series import DEFAULT_DIGITS, DEFAULT_WINDOW, embed_ratfunc

CHOICE_NOTE = ("different decision sets give different values here: the answer depends "
               "on the choice of ultrafilter, so a field of hyperreals is not unique")


# -- set families ------------------------------------------------------------

def _mask(subset, n: int) -> int:
    m = 0
    for i in subset:
        if not 1 <= i <= n:
            raise ValueError(f"element {i} is outside the universe 1..{n}")
        m |= 1 << (i - 1)
    return m


def _unmask(m: int) -> tuple[int, ...]:
    return tuple(i + 1 for i in range(m.bit_length()) if m >> i & 1)


@dataclass(frozen=True)
class SetFamily:
    universe_size: int
    members: frozenset[int]  # bitmasks; bit i-1 stands for element i

    def __post_init__(self):
        if self.universe_size < 1:
            raise ValueError("universe size must be positive")
        full = (1 << self.universe_size) - 1
        if any(m & ~full for m in self.members):
            raise ValueError("family member outside the universe")

    @classmethod
    def from_sets(cls, n: int, sets) -> SetFamily:
        return cls(n, frozenset(_mask(s, n) for s in sets))

    @classmethod
    def from_json(cls, doc) -> SetFamily:
        if isinstance(doc, (str, bytes)):
            doc = json.loads(doc)
        return cls.from_sets(int(doc["universe"]), doc["members"])

    @classmethod
    def principal(cls, n: int, generator) -> SetFamily:
        """All supersets of ``generator``."""
        g = _mask(generator, n)
        comp = ((1 << n) - 1) ^ g
        return cls(n, frozenset(g | sub for sub in _submasks(comp)))

    @property
    def full(self) -> int:
        return (1 << self.universe_size) - 1

    def sets(self) -> list[tuple[int, ...]]:
        return sorted(_unmask(m) for m in self.members)

    def to_json(self) -> dict:
        return {"universe": self.universe_size, "members": [list(s) for s in self.sets()]}

    def __contains__(self, subset) -> bool:
        return _mask(subset, self.universe_size) in self.members

    def __len__(self):
        return len(self.members)


def _submasks(m: int) -> Iterator[int]:
    sub = m
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & m


@dataclass(frozen=True)
class AxiomVerdict:
    axiom: str
    holds: bool
    witness: tuple = ()
    note: str = ""

    def to_dict(self) -> dict:
        return {"axiom": self.axiom, "holds": self.holds,
                "witness": [list(w) for w in self.witness], "note": self.note}

    def __str__(self):
        line = f"({self.axiom}) {'pass' if self.holds else 'FAIL'}"
        if self.witness:
            line += " witness " + " ".join("{" + ", ".join(map(str, w)) + "}" for w in self.witness)
        if self.note:
            line += f"  [{self.note}]"
        return line


@dataclass
class FilterReport:
    kind: str
    universe_size: int
    verdicts: list[AxiomVerdict]
    notes: list[str] = field(default_factory=list)
    generator: tuple[int, ...] | None = None

    @property
    def holds(self) -> bool:
        return all(v.holds for v in self.verdicts)

    @property
    def principal(self) -> bool | None:
        if self.generator is None:
            return None
        return len(self.generator) == 1

    def verdict(self, axiom: str) -> AxiomVerdict:
        return next(v for v in self.verdicts if v.axiom == axiom)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "universe": self.universe_size,
            "holds": self.holds,
            "axioms": [v.to_dict() for v in self.verdicts],
            "generator": list(self.generator) if self.generator is not None else None,
            "principal": self.principal,
            "notes": list(self.notes),
        }

    def to_text(self) -> str:
        lines = [f"{self.kind} check on universe {{1..{self.universe_size}}}: "
                 f"{'holds' if self.holds else 'fails'}"]
        lines += [f"  {v}" for v in self.verdicts]
        if self.generator is not None:
            gen = "{" + ", ".join(map(str, self.generator)) + "}"
            lines.append(f"  minimal member {gen}; principal: {'yes' if self.principal else 'no'}")
        lines += [f"  note: {n}" for n in self.notes]
        return "\n".join(lines)


def _axiom0(fam: SetFamily) -> AxiomVerdict:
    ok = 0 not in fam.members
    return AxiomVerdict("0", ok, () if ok else ((),),
                        "finite universe: only the empty set counts as negligible")


def _axiom1(fam: SetFamily, threshold: int) -> AxiomVerdict:
    n, full = fam.universe_size, fam.full
    for m in range(full + 1):
        if n - bin(m).count("1") < threshold and m not in fam.members:
            return AxiomVerdict("1", False, (_unmask(m),),
                                f"complement smaller than {threshold} must be decisive")
    return AxiomVerdict("1", True, (), f"complement smaller than {threshold} must be decisive")


def _axiom2(fam: SetFamily) -> AxiomVerdict:
    n = fam.universe_size
    for s in sorted(fam.members):
        for i in range(n):
            t = s | (1 << i)
            if t not in fam.members:
                return AxiomVerdict("2", False, (_unmask(s), _unmask(t)))
    return AxiomVerdict("2", True)


def _axiom3(fam: SetFamily) -> AxiomVerdict:
    members = sorted(fam.members)
    for i, s in enumerate(members):
        for t in members[i + 1:]:
            if s & t not in fam.members:
                return AxiomVerdict("3", False, (_unmask(s), _unmask(t)))
    return AxiomVerdict("3", True)


def _axiom4(fam: SetFamily) -> AxiomVerdict:
    full = fam.full
    for m in range(full + 1):
        if m not in fam.members and full ^ m not in fam.members:
            return AxiomVerdict("4", False, (_unmask(m),))
    return AxiomVerdict("4", True)


def check_filter(fam: SetFamily, threshold: int | None = None) -> FilterReport:
    """Check axioms (0), (2), (3), and (1) with the given threshold if any."""
    verdicts = [_axiom0(fam)]
    notes = []
    if threshold is not None:
        if threshold < 1:
            raise ValueError("threshold must be at least 1")
        verdicts.append(_axiom1(fam, threshold))
        if threshold > fam.universe_size:
            notes.append("with this threshold (1) makes every subset decisive, the empty set "
                         "included, which contradicts (0); (0) and (1) coexist only on an "
                         "infinite universe")
    verdicts += [_axiom2(fam), _axiom3(fam)]
    return FilterReport("filter", fam.universe_size, verdicts, notes)


def check_ultrafilter(fam: SetFamily) -> FilterReport:
    verdicts = [_axiom0(fam), _axiom2(fam), _axiom3(fam), _axiom4(fam)]
    notes = ["(0) is verified on its own: deriving it from (1) and (4) also needs (3)"]
    generator = None
    if all(v.holds for v in verdicts[1:]) and fam.members:
        g = fam.full
        for m in fam.members:
            g &= m
        generator = _unmask(g)
        if len(generator) == 1:
            notes.append(f"principal: generated by {{{generator[0]}}}, as every ultrafilter "
                         "on a finite set must be")
    return FilterReport("ultrafilter", fam.universe_size, verdicts, notes, generator)


def _close(members: frozenset[int], new: int, full: int) -> frozenset[int] | None:
    """Smallest superset of members + {new} closed under (2) and (3); None if it holds the empty set."""
    out = set(members)
    work = [new]
    while work:
        s = work.pop()
        if s in out:
            continue
        if s == 0:
            return None
        out.add(s)
        comp = full ^ s
        work.extend(s | sub for sub in _submasks(comp) if sub)
        work.extend(s & t for t in list(out))
    return frozenset(out)


def enumerate_ultrafilters(n: int) -> Iterator[SetFamily]:
    """Every family on {1..n} satisfying (0), (2), (3), (4), by exhaustive search.

    Each complementary pair {S, U-S} is decided one way or the other, with
    the family closed under (2) and (3) after each decision; branches that
    force the empty set are pruned.
    """
    full = (1 << n) - 1
    size = lambda m: bin(m).count("1")  # noqa: E731
    pairs = sorted((m for m in range(1, full) if (size(m), m) < (size(full ^ m), full ^ m)),
                   key=lambda m: (size(m), m))

    start = _close(frozenset(), full, full)

    def search(members: frozenset[int]) -> Iterator[frozenset[int]]:
        for m in pairs:
            if m not in members and full ^ m not in members:
                for choice in (m, full ^ m):
                    closed = _close(members, choice, full)
                    if closed is not None:
                        yield from search(closed)
                return
        yield members

    for members in search(start):
        yield SetFamily(n, members)


# -- definable hyperreals ------------------------------------------------------

def _omega_poly_text(coeffs: Sequence[Fraction]) -> str:
    """Polynomial in omega, highest power first."""
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            mono = "omega" if i == 1 else f"omega^{i}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        parts.append(("-" if c < 0 else "") + body if not parts else
                     (" - " if c < 0 else " + ") + body)
    return "".join(parts) or "0"


class DefinableHyperreal:
    """Hyperreal [g(n)] for a rational function g, stored as g(1/x) in Q(x)."""

    __slots__ = ("value",)

    def __init__(self, value):
        object.__setattr__(self, "value", RatFunc.coerce(value))

    def __setattr__(self, key, value):
        raise AttributeError("DefinableHyperreal is immutable")

    @classmethod
    def omega(cls) -> DefinableHyperreal:
        return cls(RatFunc.x().reciprocal())

    @classmethod
    def coerce(cls, v) -> DefinableHyperreal:
        return v if isinstance(v, DefinableHyperreal) else cls(v)

    def term(self, n: int) -> Fraction:
        """n-th term of the representative sequence."""
        return eval_at(self.value, Fraction(1, n))

    def classify(self) -> Classification:
        return classify(self.value)

    def omega_polys(self) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
        """Numerator and monic denominator coefficients as polynomials in omega."""
        num, den = self.value.num, self.value.den
        if num.is_zero():
            return (), (Fraction(1),)
        rn, rd = Poly(num.coeffs[::-1]), Poly(den.coeffs[::-1])
        shift = den.degree - num.degree
        if shift > 0:
            rn = rn * Poly.monomial(shift)
        elif shift < 0:
            rd = rd * Poly.monomial(-shift)
        lc = rd.lead_coeff()
        return rn.scale(1 / lc).coeffs, rd.scale(1 / lc).coeffs

    def __str__(self):
        num, den = self.omega_polys()
        ntext = _omega_poly_text(num)
        if den == (Fraction(1),):
            return ntext
        if sum(1 for c in num if c) > 1:
            ntext = f"({ntext})"
        dtext = _omega_poly_text(den)
        if sum(1 for c in den if c) > 1:
            dtext = f"({dtext})"
        return f"{ntext}/{dtext}"

    def __repr__(self):
        return f"DefinableHyperreal({self})"

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, RatFunc, DefinableHyperreal)):
            return self.value == DefinableHyperreal.coerce(other).value
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def _op(self, other, fn):
        try:
            other = DefinableHyperreal.coerce(other)
        except TypeError:
            return NotImplemented
        return DefinableHyperreal(fn(self.value, other.value))

    def __add__(self, other):
        return self._op(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._op(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._op(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._op(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._op(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return self._op(other, lambda a, b: b / a)

    def __neg__(self):
        return DefinableHyperreal(-self.value)

    def __pow__(self, n: int):
        return DefinableHyperreal(self.value ** n)

    def __lt__(self, other):
        return omega_compare(self, other) is Ordering.LESS

    def __gt__(self, other):
        return omega_compare(self, other) is Ordering.GREATER

    def __le__(self, other):
        return omega_compare(self, other) is not Ordering.GREATER

    def __ge__(self, other):
        return omega_compare(self, other) is not Ordering.LESS


def omega_arith(a, b, op: str) -> DefinableHyperreal:
    a = DefinableHyperreal.coerce(a)
    if op == "neg":
        return -a
    b = DefinableHyperreal.coerce(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def omega_compare(a, b) -> Ordering:
    """a > b iff a_n > b_n for all but finitely many n."""
    return compare(DefinableHyperreal.coerce(a).value, DefinableHyperreal.coerce(b).value)


# -- sequences ---------------------------------------------------------------

@dataclass(frozen=True)
class Progression:
    """The index set {n >= 1 : n = residue (mod modulus)}."""

    residue: int
    modulus: int

    def first(self) -> int:
        r = self.residue % self.modulus
        return r if r >= 1 else self.modulus

    def __contains__(self, n: int) -> bool:
        return n >= 1 and (n - self.residue) % self.modulus == 0

    def __str__(self):
        a = self.first()
        return "{" + ", ".join(str(a + k * self.modulus) for k in range(3)) + ", ...}"


@dataclass(frozen=True)
class SequenceSpec:
    """A sequence a_1, a_2, ... given by formula, by residue class, or by samples.

    ``overrides`` replaces finitely many terms; it never changes the
    hyperreal the sequence represents.
    """

    kind: str
    branches: tuple[tuple[int, int, Expr], ...] = ()
    samples: tuple[Fraction, ...] = ()
    overrides: tuple[tuple[int, Fraction], ...] = ()
    var: str = "n"

    def __post_init__(self):
        if self.kind not in ("rational", "interleaved", "sampled"):
            raise ValueError(f"unknown sequence kind {self.kind!r}")
        if self.kind != "sampled":
            modulus = math.lcm(*(m for _, m, _ in self.branches))
            hits = [0] * modulus
            for r, m, _ in self.branches:
                for k in range(r % m, modulus, m):
                    hits[k] += 1
            if any(h != 1 for h in hits):
                raise ValueError("residue classes must partition the indices")

    @classmethod
    def rational(cls, src, var: str = "n") -> SequenceSpec:
        return cls("rational", ((0, 1, parse(src) if isinstance(src, str) else src),), var=var)

    @classmethod
    def interleaved(cls, branches, var: str = "n") -> SequenceSpec:
        return cls("interleaved", tuple((r, m, parse(s) if isinstance(s, str) else s)
                                        for r, m, s in branches), var=var)

    @classmethod
    def sampled(cls, values) -> SequenceSpec:
        return cls("sampled", samples=tuple(Fraction(v) for v in values))

    def with_overrides(self, overrides: dict[int, object]) -> SequenceSpec:
        merged = dict(self.overrides)
        merged.update({int(k): Fraction(v) for k, v in overrides.items()})
        return SequenceSpec(self.kind, self.branches, self.samples,
                            tuple(sorted(merged.items())), self.var)

    def progressions(self) -> list[tuple[Progression, Expr]]:
        return [(Progression(r, m), e) for r, m, e in self.branches]

    def term(self, n: int) -> Fraction:
        if n < 1:
            raise ValueError("sequences are indexed from 1")
        over = dict(self.overrides)
        if n in over:
            return over[n]
        if self.kind == "sampled":
            return self.samples[n - 1]
        for prog, e in self.progressions():
            if n in prog:
                try:
                    return evaluate(e, RealExact(), {self.var: n})
                except DivisionByZero as exc:
                    raise UndefinedTerm(f"term {n} is undefined: {exc}") from exc
        raise AssertionError("residue classes cover every index")

    def __str__(self):
        if self.kind == "sampled":
            return "sampled: " + ", ".join(map(str, self.samples))
        if self.kind == "rational":
            return render(self.branches[0][2])
        return "; ".join(f"{r} mod {m}: {render(e)}" for r, m, e in self.branches)


def parse_sequence_spec(text: str) -> SequenceSpec:
    """Read ``n^2``, ``1 mod 3: -n; 2 mod 3: n; 0 mod 3: 1/n`` or ``sampled: 1, 0, 1``."""
    text = text.strip()
    if text.startswith("sampled:"):
        items = [t for t in text[len("sampled:"):].replace(";", ",").split(",") if t.strip()]
        return SequenceSpec.sampled(evaluate(parse(t), RealExact()) for t in items)
    if " mod " in text:
        branches = []
        for part in text.split(";"):
            head, _, body = part.partition(":")
            r, _, m = head.partition(" mod ")
            branches.append((int(r), int(m), body.strip()))
        return SequenceSpec.interleaved(branches)
    return SequenceSpec.rational(text)


def hyperreal_of(e: Expr, var: str = "n") -> DefinableHyperreal:
    """[g(n)] for a rational expression g, i.e. g evaluated at omega."""
    omega = RatFunc.x().reciprocal()
    return DefinableHyperreal(evaluate(e, RatFuncBackend(), {var: omega}))


def definable_value(seq: SequenceSpec) -> DefinableHyperreal:
    """The hyperreal of a sequence whose value needs no choice of decision set."""
    if seq.kind == "sampled":
        raise NotRepresentable("a finite sample does not determine a hyperreal")
    values = {hyperreal_of(e, seq.var) for _, _, e in seq.branches}
    if len(values) != 1:
        raise NotRepresentable(CHOICE_NOTE)
    return values.pop()


@dataclass(frozen=True)
class BranchVerdict:
    case: str  # "i", "ii" or "iii"
    decision_set: Progression | None
    value: DefinableHyperreal | None = None
    limit: Fraction | None = None
    infinitesimal_sign: Sign | None = None
    indices: tuple[int, ...] = ()

    def describe_set(self) -> str:
        if self.decision_set is not None:
            return str(self.decision_set)
        shown = ", ".join(map(str, self.indices[:6]))
        return "{" + shown + (", ..." if len(self.indices) > 6 else "") + "} (sampled)"

    def describe_value(self) -> str:
        if self.value is not None:
            text = str(self.value)
            if self.case == "iii" and self.infinitesimal_sign is not None:
                sign = self.infinitesimal_sign
                rel = {Sign.POSITIVE: "a positive infinitesimal above",
                       Sign.NEGATIVE: "a negative infinitesimal below",
                       Sign.ZERO: "exactly"}[sign]
                text += f" ({rel} L = {self.limit})" if sign is not Sign.ZERO else f" (L = {self.limit})"
            return text
        if self.case == "iii":
            return f"L = {self.limit} plus an undetermined infinitesimal"
        return "-infinite" if self.case == "i" else "+infinite"


@dataclass
class ClassificationReport:
    branches: list[BranchVerdict]
    heuristic: bool = False
    notes: list[str] = field(default_factory=list)

    @property
    def cases(self) -> frozenset[str]:
        return frozenset(b.case for b in self.branches)

    @property
    def decision_sets(self) -> dict[str, list]:
        out: dict[str, list] = {}
        for b in self.branches:
            out.setdefault(b.case, []).append(b.decision_set if b.decision_set is not None else b.indices)
        return out

    @property
    def values(self) -> dict[str, list]:
        out: dict[str, list] = {}
        for b in self.branches:
            out.setdefault(b.case, []).append(b.value if b.value is not None else
                                              (b.limit, b.infinitesimal_sign))
        return out

    def to_dict(self) -> dict:
        return {
            "cases": sorted(self.cases, key=len),
            "heuristic": self.heuristic,
            "branches": [
                {
                    "case": b.case,
                    "decision_set": b.describe_set(),
                    "value": str(b.value) if b.value is not None else None,
                    "limit": str(b.limit) if b.limit is not None else None,
                    "infinitesimal_sign": str(b.infinitesimal_sign) if b.infinitesimal_sign else None,
                }
                for b in self.branches
            ],
            "notes": list(self.notes),
        }

    def to_text(self) -> str:
        lines = [f"cases: {', '.join('(' + c + ')' for c in sorted(self.cases, key=len))}"
                 + ("  [heuristic]" if self.heuristic else "")]
        for b in self.branches:
            lines.append(f"  ({b.case}) decision set {b.describe_set()}: {b.describe_value()}")
        lines += [f"  note: {n}" for n in self.notes]
        return "\n".join(lines)


def _case_of(h: DefinableHyperreal) -> str:
    tag = h.classify()
    if tag is Classification.NEGATIVE_INFINITE:
        return "i"
    if tag is Classification.POSITIVE_INFINITE:
        return "ii"
    return "iii"


def _simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Rational with the smallest denominator in [lo, hi]."""
    if lo <= 0 <= hi:
        return Fraction(0)
    if hi < 0:
        return -_simplest_between(-hi, -lo)
    fl = math.floor(lo)
    if fl == lo:
        return Fraction(fl)
    if fl + 1 <= hi:
        return Fraction(fl + 1)
    return fl + 1 / _simplest_between(1 / (hi - fl), 1 / (lo - fl))


def _cluster_limit(values: list[Fraction]) -> Fraction:
    """Guess the accumulation point of terms listed in index order."""
    head, tail = values[:len(values) // 2], values[len(values) // 2:]
    drift = abs(sum(tail) / len(tail) - sum(head) / max(len(head), 1)) if head else Fraction(0)
    return _simplest_between(min(tail) - 4 * drift, max(tail) + 4 * drift)


def _sampled_report(seq: SequenceSpec, horizon: int) -> ClassificationReport:
    terms = [seq.term(n) for n in range(1, min(horizon, len(seq.samples)) + 1)]
    if len(terms) < 8:
        raise ValueError("need at least 8 sampled terms")
    q = len(terms) // 4
    first, last = terms[:q], terms[-q:]
    half = list(enumerate(terms, start=1))[len(terms) // 2:]
    branches = []
    if max(last) > 2 * max(Fraction(1), max(first)):
        branches.append(BranchVerdict("ii", None,
                                      indices=tuple(n for n, a in half if a > max(first))))
    if min(last) < 2 * min(Fraction(-1), min(first)):
        branches.insert(0, BranchVerdict("i", None,
                                         indices=tuple(n for n, a in half if a < min(first))))
    bound = 1 + max(abs(a) for a in first)
    inside = sorted((a, n) for n, a in half if abs(a) <= bound)
    if len(inside) >= max(3, len(half) // 20):
        gap = (inside[-1][0] - inside[0][0]) / 10
        clusters = [[inside[0]]]
        for item in inside[1:]:
            if item[0] - clusters[-1][-1][0] > gap:
                clusters.append([item])
            else:
                clusters[-1].append(item)
        for cl in clusters:
            if len(cl) >= 3:
                branches.append(BranchVerdict(
                    "iii", None, limit=_cluster_limit([a for a, _ in sorted(cl, key=lambda t: t[1])]),
                    indices=tuple(sorted(n for _, n in cl))))
    notes = ["heuristic verdict from finitely many terms; the infinitesimal part is undetermined"]
    if len(branches) > 1:
        notes.append(CHOICE_NOTE)
    return ClassificationReport(branches, heuristic=True, notes=notes)


def classify_sequence(seq: SequenceSpec, horizon: int = 100) -> ClassificationReport:
    """Which of the three cases (to -inf, to +inf, bounded cluster) occur, and where."""
    if horizon < 100:
        raise ValueError("horizon must be at least 100")
    if seq.kind == "sampled":
        return _sampled_report(seq, horizon)
    over = dict(seq.overrides)
    branches = []
    for prog, e in seq.progressions():
        for n in range(prog.first(), horizon + 1, prog.modulus):
            if n not in over:
                seq.term(n)
        h = hyperreal_of(e, seq.var)
        case = _case_of(h)
        if case == "iii":
            limit = standard_part(h.value)
            branches.append(BranchVerdict(case, prog, h, limit, low_order_sign(h.value - limit)))
        else:
            branches.append(BranchVerdict(case, prog, h))
    branches.sort(key=lambda b: (len(b.case), b.decision_set.first()))
    notes = []
    if len({b.value for b in branches}) > 1:
        notes.append(CHOICE_NOTE)
    return ClassificationReport(branches, notes=notes)


# -- star extensions -----------------------------------------------------------

def star_extend(f, h, mode: str = "exact", window: int = DEFAULT_WINDOW,
                digits: int = DEFAULT_DIGITS):
    """f applied to a definable hyperreal, termwise: f([x_n]) = [f(x_n)].

    Rational f gives a DefinableHyperreal. A transcendental f is expanded
    as a series in the infinitesimal 1/omega, which needs a finite argument.
    """
    ast = parse(f) if isinstance(f, str) else f
    h = DefinableHyperreal.coerce(h)
    names = free_variables(ast)
    if len(names) > 1:
        raise ValueError(f"expression has several variables {sorted(names)}")
    var = names.pop() if names else "x"
    if is_rational_expr(ast):
        return DefinableHyperreal(evaluate(ast, RatFuncBackend(), {var: h.value}))
    if not h.classify().is_finite:
        raise NotRepresentable(f"{render(ast)} is transcendental and {h} is infinite")
    backend = SeriesBackend(mode, window, digits)
    return evaluate(ast, backend, {var: embed_ratfunc(h.value, window, backend.digits)})


class Membership(enum.Enum):
    IN = "In"
    OUT = "Out"
    UNDECIDABLE = "Undecidable"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Interval:
    lo: Fraction | None
    hi: Fraction | None
    lo_closed: bool = False
    hi_closed: bool = False

    @classmethod
    def parse(cls, text: str) -> Interval:
        text = text.strip()
        if text[0] not in "([" or text[-1] not in ")]":
            raise ValueError(f"bad interval {text!r}")
        lo_s, _, hi_s = text[1:-1].partition(",")

        def bound(s):
            s = s.strip()
            if s in ("inf", "+inf", "-inf"):
                return None
            return evaluate(parse(s), RealExact())

        return cls(bound(lo_s), bound(hi_s), text[0] == "[", text[-1] == "]")

    def contains(self, h: DefinableHyperreal) -> bool:
        if self.lo is not None:
            o = omega_compare(h, self.lo)
            if o is Ordering.LESS or (o is Ordering.EQUAL and not self.lo_closed):
                return False
        if self.hi is not None:
            o = omega_compare(h, self.hi)
            if o is Ordering.GREATER or (o is Ordering.EQUAL and not self.hi_closed):
                return False
        return True

    def __str__(self):
        lo = "-inf" if self.lo is None else str(self.lo)
        hi = "inf" if self.hi is None else str(self.hi)
        return f"{'[' if self.lo_closed else '('}{lo}, {hi}{']' if self.hi_closed else ')'}"


def star_set_membership(d: Interval, h) -> Membership:
    """Is h in *D? Decided by eventual membership of the representative sequence.

    ``h`` may be a DefinableHyperreal, or a SequenceSpec whose residue
    branches may disagree, in which case the answer depends on the choice
    of decision set.
    """
    if isinstance(d, str):
        d = Interval.parse(d)
    if isinstance(h, SequenceSpec):
        if h.kind == "sampled":
            return Membership.UNDECIDABLE
        answers = {d.contains(hyperreal_of(e, h.var)) for _, _, e in h.branches}
        if len(answers) > 1:
            return Membership.UNDECIDABLE
        return Membership.IN if answers.pop() else Membership.OUT
    return Membership.IN if d.contains(DefinableHyperreal.coerce(h)) else Membership.OUT
