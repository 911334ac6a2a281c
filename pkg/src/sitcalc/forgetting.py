"""Forgetting of ground atoms and ground-occurring predicate symbols.

Forgetting a ground atom g in a finite theory T yields a theory whose models
are exactly the models of T with the truth value of g released: M' satisfies
the result iff some model of T agrees with M' everywhere except possibly on g.
The syntactic computation relativizes every occurrence of g's predicate so the
value of g is isolated, then resolves on g.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import NonGroundOccurrence, SitcalcError
from .syntax import (
    FALSE,
    TRUE,
    And,
    Const,
    Exists,
    FluentAtom,
    Forall,
    Formula,
    Iff,
    Implies,
    Not,
    ObjEq,
    Or,
    Signature,
    Stage,
    StaticAtom,
    Theory,
    Var,
    conj,
    simplify,
)


@dataclass(frozen=True)
class GroundAtom:
    """A predicate applied to constants; stage None marks a static predicate."""

    pred: str
    args: tuple[str, ...]
    stage: Optional[Stage] = Stage.NOW

    @property
    def sort_key(self) -> tuple[str, tuple[str, ...], int]:
        rank = 0 if self.stage is None else (1 if self.stage == Stage.NOW else 2)
        return (self.pred, self.args, rank)

    def to_formula(self) -> Formula:
        terms = tuple(Const(c) for c in self.args)
        if self.stage is None:
            return StaticAtom(self.pred, terms)
        return FluentAtom(self.pred, terms, self.stage)

    def signature(self) -> Signature:
        pair = frozenset({(self.pred, len(self.args))})
        if self.stage is None:
            return Signature(objects=frozenset(self.args), statics=pair)
        return Signature(objects=frozenset(self.args), fluents=pair)

    def __str__(self) -> str:
        inner = f"{self.pred}({', '.join(self.args)})" if self.args else self.pred
        if self.stage == Stage.NEXT:
            return f"{inner}@next"
        return inner


def sorted_atoms(atoms: Iterable[GroundAtom]) -> tuple[GroundAtom, ...]:
    """Canonical forgetting order: by predicate, then arguments, then stage."""
    return tuple(sorted(set(atoms), key=lambda g: g.sort_key))


def _matches(f: Formula, g: GroundAtom) -> Optional[tuple]:
    """Argument tuple of f when f is an atom of g's predicate, kind and stage."""
    match f:
        case FluentAtom(pred, args, stage) if (
            g.stage is not None and pred == g.pred and stage == g.stage and len(args) == len(g.args)
        ):
            return args
        case StaticAtom(pred, args) if g.stage is None and pred == g.pred and len(args) == len(g.args):
            return args
        case _:
            return None


def _map_atoms(f: Formula, g: GroundAtom, repl) -> Formula:
    def walk(f: Formula) -> Formula:
        args = _matches(f, g)
        if args is not None:
            return repl(f, args)
        match f:
            case Not(body):
                return Not(walk(body))
            case And(a, b):
                return And(walk(a), walk(b))
            case Or(a, b):
                return Or(walk(a), walk(b))
            case Implies(a, b):
                return Implies(walk(a), walk(b))
            case Iff(a, b):
                return Iff(walk(a), walk(b))
            case Forall(v, body):
                return Forall(v, walk(body))
            case Exists(v, body):
                return Exists(v, walk(body))
            case _:
                return f

    return walk(f)


def relativize(f: Formula, g: GroundAtom, una: bool = True) -> Formula:
    """Split every occurrence of g's predicate on whether its arguments equal g's.

    An occurrence P(t) becomes (t = c & P(c)) | (t != c & P(t)) for g = P(c),
    so that the only occurrences whose truth depends on g are the explicit
    ground ones.  The output is simplified, which restores occurrences with
    distinct constant arguments to plain atoms under unique names.
    """
    gatom = g.to_formula()
    gconsts = tuple(Const(c) for c in g.args)

    def repl(atom: Formula, args: tuple) -> Formula:
        eqs = conj([ObjEq(t, c) for t, c in zip(args, gconsts)])
        return Or(And(eqs, gatom), And(Not(eqs), atom))

    return simplify(_map_atoms(f, g, repl), una)


def replace_ground(f: Formula, g: GroundAtom, value: Formula) -> Formula:
    """Replace exact occurrences of the ground atom g by the given formula."""
    gargs = tuple(Const(c) for c in g.args)

    def repl(atom: Formula, args: tuple) -> Formula:
        return value if args == gargs else atom

    return _map_atoms(f, g, repl)


def forget_atom(t: Theory, g: GroundAtom, una: bool = True) -> Theory:
    """Forget one ground atom.

    Axioms whose relativized form does not mention g pass through verbatim;
    the rest are relativized, conjoined and expanded to (AND phi[g/true]) |
    (AND phi[g/false]).  Keeping g-free axioms out of the disjunction is
    sound because a conjunct without g factors out of it.
    """
    kept: list[Formula] = []
    pos_parts: list[Formula] = []
    neg_parts: list[Formula] = []
    for ax in t.axioms:
        rel = relativize(ax, g, una)
        pos = replace_ground(rel, g, TRUE)
        neg = replace_ground(rel, g, FALSE)
        if pos == neg:
            kept.append(ax)
        else:
            pos_parts.append(pos)
            neg_parts.append(neg)
    if not pos_parts:
        return t
    forgotten = simplify(Or(conj(pos_parts), conj(neg_parts)), una)
    return Theory(tuple(kept) + (forgotten,))


def forget_atoms(t: Theory, atoms: Iterable[GroundAtom], una: bool = True) -> Theory:
    """Forget a set of ground atoms in the canonical order.

    Forgetting is commutative up to logical equivalence, so the order only
    affects the syntactic shape of the result.
    """
    for g in sorted_atoms(atoms):
        t = forget_atom(t, g, una)
    return t


def occurring_ground_atoms(t: Theory, pred: str) -> tuple[GroundAtom, ...]:
    """All ground atoms of the given predicate occurring in t.

    Raises NonGroundOccurrence if the predicate appears with a variable
    argument anywhere in t.
    """
    found: set[GroundAtom] = set()

    def walk(f: Formula) -> None:
        match f:
            case FluentAtom(name, args, stage) if name == pred:
                if not all(isinstance(a, Const) for a in args):
                    raise NonGroundOccurrence(f"{pred} occurs with variable arguments")
                found.add(GroundAtom(pred, tuple(a.name for a in args), stage))
            case StaticAtom(name, args) if name == pred:
                if not all(isinstance(a, Const) for a in args):
                    raise NonGroundOccurrence(f"{pred} occurs with variable arguments")
                found.add(GroundAtom(pred, tuple(a.name for a in args), None))
            case Not(body) | Forall(_, body) | Exists(_, body):
                walk(body)
            case And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b):
                walk(a)
                walk(b)
            case _:
                pass

    for ax in t.axioms:
        walk(ax)
    return sorted_atoms(found)


def forget_ground_symbol(t: Theory, pred: str, una: bool = True) -> Theory:
    """Forget a whole predicate symbol whose occurrences in t are all ground.

    For a nullary symbol this is the classical middle-term elimination
    T[p/true] | T[p/false].  A predicate with no occurrences leaves t
    unchanged.
    """
    atoms = occurring_ground_atoms(t, pred)
    if not atoms:
        return t
    return forget_atoms(t, atoms, una)
