"""Temporal-logic formulas over controllable/uncontrollable propositions.

Provides the AST, a concrete-syntax parser, desugaring to the core operator
set {true, atom, !, &, U}, exact evaluation on ultimately periodic (lasso)
words, and validation of the reactive fragment

    Psi ::= psi | G(phi -> Psi) | G(psi -> Psi) | Psi & Psi

where ``psi`` is LTL over controllable atoms only and ``phi`` is LTL over
uncontrollable atoms only.

Concrete grammar (see README for the full EBNF)::

    formula := "true" | ident | "!" f | f "&" f | f "|" f
             | f "U" f | "G" f | "F" f | f "->" f | "(" f ")"

Precedence, loosest first: ``->`` (right assoc), ``|``, ``&``, ``U`` (right
assoc), unary ``!``/``G``/``F``.  All operators and identifiers are
case-sensitive; ``true``, ``G``, ``F`` and ``U`` are reserved words.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

CONTROLLABLE = "controllable"
UNCONTROLLABLE = "uncontrollable"

_RESERVED = {"true", "G", "F", "U"}


class FormulaError(ValueError):
    """Lex/parse/validation failure; carries a 1-based text position when known."""

    def __init__(self, message: str, pos: Optional[int] = None, text: Optional[str] = None):
        self.pos = pos
        if pos is not None and text is not None:
            line = text.count("\n", 0, pos) + 1
            col = pos - (text.rfind("\n", 0, pos) + 1) + 1
            message = f"{line}:{col}: {message}"
        super().__init__(message)


class RtlGrammarError(FormulaError):
    """Formula is well-formed LTL but outside the reactive fragment."""


@dataclass(frozen=True)
class Atom:
    """A named proposition, either controllable (robot behavior) or not."""

    name: str
    kind: str

    def __post_init__(self):
        if not self.name or not self.name.replace("_", "a").isalnum() or self.name[0].isdigit():
            raise FormulaError(f"invalid atom name {self.name!r}")
        if self.name in _RESERVED:
            raise FormulaError(f"atom name {self.name!r} is a reserved word")
        if self.kind not in (CONTROLLABLE, UNCONTROLLABLE):
            raise FormulaError(f"invalid atom kind {self.kind!r}")

    def __str__(self):
        return self.name


class Alphabet:
    """Ordered, disjoint controllable and uncontrollable atom sets."""

    def __init__(self, controllable: Iterable[str], uncontrollable: Iterable[str] = ()):
        self.controllable = tuple(Atom(n, CONTROLLABLE) for n in controllable)
        self.uncontrollable = tuple(Atom(n, UNCONTROLLABLE) for n in uncontrollable)
        self._by_name: dict[str, Atom] = {}
        for atom in self.controllable + self.uncontrollable:
            if atom.name in self._by_name:
                raise FormulaError(f"duplicate atom declaration {atom.name!r}")
            self._by_name[atom.name] = atom

    @property
    def atoms(self) -> tuple[Atom, ...]:
        return self.controllable + self.uncontrollable

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def __getitem__(self, name: str) -> Atom:
        return self._by_name[name]

    def __len__(self) -> int:
        return len(self._by_name)

    def __iter__(self) -> Iterator[Atom]:
        return iter(self.atoms)


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TrueNode:
    def __str__(self):
        return "true"


@dataclass(frozen=True)
class AtomRef:
    atom: Atom

    def __str__(self):
        return self.atom.name


@dataclass(frozen=True)
class Not:
    child: "Formula"

    def __str__(self):
        return f"!{_paren(self.child)}"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return f"({self.left} & {self.right})"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return f"({self.left} | {self.right})"


@dataclass(frozen=True)
class Until:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return f"({self.left} U {self.right})"


@dataclass(frozen=True)
class Eventually:
    child: "Formula"

    def __str__(self):
        return f"F {_paren(self.child)}"


@dataclass(frozen=True)
class Globally:
    child: "Formula"

    def __str__(self):
        return f"G {_paren(self.child)}"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return f"({self.left} -> {self.right})"


Formula = Union[TrueNode, AtomRef, Not, And, Or, Until, Eventually, Globally, Implies]

TRUE = TrueNode()


def _paren(f: Formula) -> str:
    if isinstance(f, (TrueNode, AtomRef, Not)):
        return str(f)
    return f"({f})"


def atoms_of(f: Formula) -> frozenset[Atom]:
    if isinstance(f, AtomRef):
        return frozenset((f.atom,))
    if isinstance(f, TrueNode):
        return frozenset()
    if isinstance(f, (Not, Eventually, Globally)):
        return atoms_of(f.child)
    return atoms_of(f.left) | atoms_of(f.right)


def desugar(f: Formula) -> Formula:
    """Rewrite to the core operator set {true, atom, !, &, U}.

    Idempotent: core nodes map to themselves structurally.
    """
    if isinstance(f, (TrueNode, AtomRef)):
        return f
    if isinstance(f, Not):
        return Not(desugar(f.child))
    if isinstance(f, And):
        return And(desugar(f.left), desugar(f.right))
    if isinstance(f, Until):
        return Until(desugar(f.left), desugar(f.right))
    if isinstance(f, Or):
        return Not(And(Not(desugar(f.left)), Not(desugar(f.right))))
    if isinstance(f, Implies):
        return Not(And(desugar(f.left), Not(desugar(f.right))))
    if isinstance(f, Eventually):
        return Until(TRUE, desugar(f.child))
    if isinstance(f, Globally):
        return Not(Until(TRUE, Not(desugar(f.child))))
    raise TypeError(f"not a formula node: {f!r}")


def is_propositional(f: Formula) -> bool:
    if isinstance(f, (TrueNode, AtomRef)):
        return True
    if isinstance(f, Not):
        return is_propositional(f.child)
    if isinstance(f, (And, Or, Implies)):
        return is_propositional(f.left) and is_propositional(f.right)
    return False


def eval_prop(f: Formula, valuation: Mapping[str, bool]) -> bool:
    """Evaluate a propositional formula over a total valuation."""
    if isinstance(f, TrueNode):
        return True
    if isinstance(f, AtomRef):
        return bool(valuation[f.atom.name])
    if isinstance(f, Not):
        return not eval_prop(f.child, valuation)
    if isinstance(f, And):
        return eval_prop(f.left, valuation) and eval_prop(f.right, valuation)
    if isinstance(f, Or):
        return eval_prop(f.left, valuation) or eval_prop(f.right, valuation)
    if isinstance(f, Implies):
        return (not eval_prop(f.left, valuation)) or eval_prop(f.right, valuation)
    raise FormulaError(f"temporal operator in propositional context: {f}")


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

_TOK_IDENT = "ident"
_TOK_OP = "op"
_TOK_END = "end"


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c == "-" and text[i : i + 2] == "->":
            toks.append((_TOK_OP, "->", i))
            i += 2
            continue
        if c in "!&|()":
            toks.append((_TOK_OP, c, i))
            i += 1
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            if word in ("G", "F", "U"):
                toks.append((_TOK_OP, word, i))
            else:
                toks.append((_TOK_IDENT, word, i))
            i = j
            continue
        raise FormulaError(f"unexpected character {c!r}", i, text)
    toks.append((_TOK_END, "", n))
    return toks


class _Parser:
    def __init__(self, text: str, alphabet: Alphabet):
        self.text = text
        self.alphabet = alphabet
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, pos = self.take()
        if kind != _TOK_OP or val != value:
            raise FormulaError(f"expected {value!r}, found {val or 'end of input'!r}", pos, self.text)

    # -> lowest, right-associative
    def parse_implies(self) -> Formula:
        left = self.parse_or()
        if self.peek()[1] == "->":
            self.take()
            return Implies(left, self.parse_implies())
        return left

    def parse_or(self) -> Formula:
        f = self.parse_and()
        while self.peek()[1] == "|":
            self.take()
            f = Or(f, self.parse_and())
        return f

    def parse_and(self) -> Formula:
        f = self.parse_until()
        while self.peek()[1] == "&":
            self.take()
            f = And(f, self.parse_until())
        return f

    # U binds tighter than the boolean connectives, right-associative
    def parse_until(self) -> Formula:
        left = self.parse_unary()
        if self.peek()[1] == "U":
            self.take()
            return Until(left, self.parse_until())
        return left

    def parse_unary(self) -> Formula:
        kind, val, pos = self.peek()
        if kind == _TOK_OP and val == "!":
            self.take()
            return Not(self.parse_unary())
        if kind == _TOK_OP and val == "G":
            self.take()
            return Globally(self.parse_unary())
        if kind == _TOK_OP and val == "F":
            self.take()
            return Eventually(self.parse_unary())
        return self.parse_atom()

    def parse_atom(self) -> Formula:
        kind, val, pos = self.take()
        if kind == _TOK_OP and val == "(":
            f = self.parse_implies()
            self.expect(")")
            return f
        if kind == _TOK_IDENT:
            if val == "true":
                return TRUE
            if val not in self.alphabet:
                raise FormulaError(f"undeclared identifier {val!r}", pos, self.text)
            return AtomRef(self.alphabet[val])
        raise FormulaError(f"expected a formula, found {val or 'end of input'!r}", pos, self.text)


def parse_formula(text: str, alphabet: Alphabet) -> Formula:
    """Parse concrete syntax against a declared alphabet.

    Raises :class:`FormulaError` with a line:column position on lex/parse
    errors, undeclared identifiers, and empty input.
    """
    if not text.strip():
        raise FormulaError("empty formula")
    p = _Parser(text, alphabet)
    f = p.parse_implies()
    kind, val, pos = p.peek()
    if kind != _TOK_END:
        raise FormulaError(f"trailing input starting at {val!r}", pos, text)
    return f


# ---------------------------------------------------------------------------
# Lasso words and exact evaluation
# ---------------------------------------------------------------------------

Valuation = Mapping[str, bool]


@dataclass(frozen=True)
class LassoWord:
    """Finite carrier prefix . cycle^omega for an infinite word."""

    prefix: tuple[Valuation, ...]
    cycle: tuple[Valuation, ...]

    def __post_init__(self):
        if len(self.cycle) < 1:
            raise ValueError("lasso cycle must be nonempty")

    def fold(self, t: int) -> int:
        p, c = len(self.prefix), len(self.cycle)
        return t if t < p else p + (t - p) % c

    def at(self, t: int) -> Valuation:
        p = len(self.prefix)
        t = self.fold(t)
        return self.prefix[t] if t < p else self.cycle[t - p]

    def __len__(self):
        return len(self.prefix) + len(self.cycle)


def eval_lasso(f: Formula, w: LassoWord, t: int = 0) -> bool:
    """Exact truth of (w, t) |= f.

    Temporal operators scan positions up to prefix + 2*cycle: on an
    ultimately periodic word any until-witness can be folded below that
    bound, so the scan is exact, not an approximation.
    """
    p, c = len(w.prefix), len(w.cycle)
    if not 0 <= t < p + c:
        raise ValueError(f"position {t} outside prefix+cycle range [0, {p + c})")
    memo: dict[tuple[Formula, int], bool] = {}
    horizon = p + 2 * c

    def ev(node: Formula, pos: int) -> bool:
        pos = w.fold(pos)
        key = (node, pos)
        if key in memo:
            return memo[key]
        if isinstance(node, TrueNode):
            r = True
        elif isinstance(node, AtomRef):
            r = bool(w.at(pos)[node.atom.name])
        elif isinstance(node, Not):
            r = not ev(node.child, pos)
        elif isinstance(node, And):
            r = ev(node.left, pos) and ev(node.right, pos)
        elif isinstance(node, Or):
            r = ev(node.left, pos) or ev(node.right, pos)
        elif isinstance(node, Implies):
            r = (not ev(node.left, pos)) or ev(node.right, pos)
        elif isinstance(node, Eventually):
            r = any(ev(node.child, t2) for t2 in range(pos, horizon))
        elif isinstance(node, Globally):
            r = all(ev(node.child, t2) for t2 in range(pos, horizon))
        elif isinstance(node, Until):
            r = False
            for t2 in range(pos, horizon):
                if ev(node.right, t2):
                    r = all(ev(node.left, t1) for t1 in range(pos, t2))
                    if r:
                        break
        else:
            raise TypeError(f"not a formula node: {node!r}")
        memo[key] = r
        return r

    return ev(f, t)


# ---------------------------------------------------------------------------
# Reactive fragment validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RtlConjunct:
    formula: Formula
    #: "controllable" for a bare psi clause, "reactive" for G(ant -> Psi)
    kind: str


@dataclass(frozen=True)
class RtlSpec:
    formula: Formula
    alphabet_c: tuple[Atom, ...]
    alphabet_u: tuple[Atom, ...]
    conjuncts: tuple[RtlConjunct, ...]


def _kinds_of(f: Formula) -> set[str]:
    return {a.kind for a in atoms_of(f)}


def _check_reactive(f: Formula) -> RtlConjunct:
    """Match one Psi production; raise RtlGrammarError otherwise."""
    kinds = _kinds_of(f)
    if UNCONTROLLABLE not in kinds:
        return RtlConjunct(f, "controllable")  # the bare-psi production
    if isinstance(f, Globally) and isinstance(f.child, Implies):
        antecedent = f.child.left
        ant_kinds = _kinds_of(antecedent)
        if len(ant_kinds) > 1:
            raise RtlGrammarError(
                f"implication antecedent mixes controllable and uncontrollable atoms: {antecedent}"
            )
        _check_reactive(f.child.right)  # consequent must itself be a Psi
        return RtlConjunct(f, "reactive")
    raise RtlGrammarError(
        f"subformula uses uncontrollable atoms outside a G(condition -> ...) clause: {f}"
    )


def validate_rtl(f: Formula, alphabet: Alphabet) -> RtlSpec:
    """Check membership in the reactive fragment and split top-level conjuncts.

    Rejects, e.g., ``G(stir -> hot)`` with ``hot`` uncontrollable: reacting is
    always from environment observations to robot behaviors, never the other
    way around.
    """
    conjuncts: list[RtlConjunct] = []

    def split(node: Formula):
        if isinstance(node, And):
            split(node.left)
            split(node.right)
        else:
            conjuncts.append(_check_reactive(node))

    split(f)
    return RtlSpec(f, alphabet.controllable, alphabet.uncontrollable, tuple(conjuncts))


# ---------------------------------------------------------------------------
# Valuation helpers
# ---------------------------------------------------------------------------


def one_hot(alphabet_c: Sequence[Atom], true_name: Optional[str]) -> dict[str, bool]:
    """Controllable valuation with at most one atom true (None for all-false)."""
    if true_name is not None and all(a.name != true_name for a in alphabet_c):
        raise KeyError(true_name)
    return {a.name: a.name == true_name for a in alphabet_c}


def is_one_hot_or_zero(sigma_c: Valuation) -> bool:
    return sum(1 for v in sigma_c.values() if v) <= 1
