"""Terms, formulas, signatures and theories.

Fluents carry a stage tag instead of a reified situation argument: NOW is the
current initial situation, NEXT is the situation reached by the single ground
action under consideration.  Uniform formulas in the usual sense are formulas
whose fluent atoms all carry the same tag.  Object terms are variables and
constants only; there are no object function symbols of positive arity.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional, Union

from .errors import SitcalcError, SortError, UnsubstitutedActionVariable


class Stage(enum.Enum):
    NOW = "now"
    NEXT = "next"

    def __repr__(self) -> str:
        return self.name


# ---------------------------------------------------------------------------
# terms


@dataclass(frozen=True)
class Var:
    name: str

    def __repr__(self) -> str:
        return f"Var({self.name!r})"


@dataclass(frozen=True)
class Const:
    name: str

    def __repr__(self) -> str:
        return f"Const({self.name!r})"


ObjTerm = Union[Var, Const]


@dataclass(frozen=True)
class ActionVar:
    """The action variable of a successor state axiom, before instantiation."""

    name: str = "a"


@dataclass(frozen=True)
class ActionTerm:
    fn: str
    args: tuple[ObjTerm, ...] = ()

    def __post_init__(self) -> None:
        for t in self.args:
            if not isinstance(t, (Var, Const)):
                raise SortError(f"action argument must be an object term, got {t!r}")

    @property
    def is_ground(self) -> bool:
        return all(isinstance(t, Const) for t in self.args)


# ---------------------------------------------------------------------------
# formulas


class Formula:
    """Base class; all nodes are frozen dataclasses below."""

    __slots__ = ()


@dataclass(frozen=True)
class Truth(Formula):
    pass


@dataclass(frozen=True)
class Falsity(Formula):
    pass


TRUE = Truth()
FALSE = Falsity()


@dataclass(frozen=True)
class FluentAtom(Formula):
    fluent: str
    args: tuple[ObjTerm, ...]
    stage: Stage = Stage.NOW


@dataclass(frozen=True)
class StaticAtom(Formula):
    pred: str
    args: tuple[ObjTerm, ...] = ()


@dataclass(frozen=True)
class ObjEq(Formula):
    lhs: ObjTerm
    rhs: ObjTerm


@dataclass(frozen=True)
class ActionEq(Formula):
    """Equality between the SSA action variable (or a ground action) and an action term."""

    lhs: Union[ActionVar, ActionTerm]
    rhs: ActionTerm


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Or(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Implies(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Iff(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: Var
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: Var
    body: Formula


def conj(parts: Iterable[Formula]) -> Formula:
    """Left-nested conjunction; TRUE for the empty sequence."""
    out: Optional[Formula] = None
    for p in parts:
        out = p if out is None else And(out, p)
    return TRUE if out is None else out


def disj(parts: Iterable[Formula]) -> Formula:
    """Left-nested disjunction; FALSE for the empty sequence."""
    out: Optional[Formula] = None
    for p in parts:
        out = p if out is None else Or(out, p)
    return FALSE if out is None else out


def flatten_and(f: Formula) -> list[Formula]:
    """Conjuncts along the And spine.  TRUE yields [], other nodes yield [f]."""
    match f:
        case Truth():
            return []
        case And(lhs, rhs):
            return flatten_and(lhs) + flatten_and(rhs)
        case _:
            return [f]


def flatten_or(f: Formula) -> list[Formula]:
    """Disjuncts along the Or spine.  FALSE yields [], other nodes yield [f]."""
    match f:
        case Falsity():
            return []
        case Or(lhs, rhs):
            return flatten_or(lhs) + flatten_or(rhs)
        case _:
            return [f]


# ---------------------------------------------------------------------------
# signatures


@dataclass(frozen=True)
class Signature:
    """Vocabulary: object constants plus static, fluent and action symbols with arities.

    The four name sets must be pairwise disjoint.  Signatures compose with the
    set operators; subtraction and intersection act on names with their arities.
    """

    objects: frozenset[str] = frozenset()
    statics: frozenset[tuple[str, int]] = frozenset()
    fluents: frozenset[tuple[str, int]] = frozenset()
    actions: frozenset[tuple[str, int]] = frozenset()

    def __post_init__(self) -> None:
        groups = [
            set(self.objects),
            {n for n, _ in self.statics},
            {n for n, _ in self.fluents},
            {n for n, _ in self.actions},
        ]
        seen: set[str] = set()
        for g in groups:
            clash = seen & g
            if clash:
                raise SitcalcError(f"signature reuses names across sorts: {sorted(clash)}")
            seen |= g

    def __or__(self, other: Signature) -> Signature:
        return Signature(
            self.objects | other.objects,
            self.statics | other.statics,
            self.fluents | other.fluents,
            self.actions | other.actions,
        )

    def __and__(self, other: Signature) -> Signature:
        return Signature(
            self.objects & other.objects,
            self.statics & other.statics,
            self.fluents & other.fluents,
            self.actions & other.actions,
        )

    def __sub__(self, other: Signature) -> Signature:
        return Signature(
            self.objects - other.objects,
            self.statics - other.statics,
            self.fluents - other.fluents,
            self.actions - other.actions,
        )

    def __le__(self, other: Signature) -> bool:
        return (
            self.objects <= other.objects
            and self.statics <= other.statics
            and self.fluents <= other.fluents
            and self.actions <= other.actions
        )

    def is_empty(self) -> bool:
        return not (self.objects or self.statics or self.fluents or self.actions)

    def names(self) -> frozenset[str]:
        return frozenset(
            set(self.objects)
            | {n for n, _ in self.statics}
            | {n for n, _ in self.fluents}
            | {n for n, _ in self.actions}
        )

    def sorted_names(self) -> tuple[str, ...]:
        return tuple(sorted(self.names()))

    def static_arity(self, name: str) -> Optional[int]:
        for n, k in self.statics:
            if n == name:
                return k
        return None

    def fluent_arity(self, name: str) -> Optional[int]:
        for n, k in self.fluents:
            if n == name:
                return k
        return None

    def action_arity(self, name: str) -> Optional[int]:
        for n, k in self.actions:
            if n == name:
                return k
        return None


# ---------------------------------------------------------------------------
# theories


@dataclass(frozen=True)
class Theory:
    axioms: tuple[Formula, ...] = ()

    def __iter__(self) -> Iterator[Formula]:
        return iter(self.axioms)

    def __len__(self) -> int:
        return len(self.axioms)


SyntaxLike = Union[Var, Const, ActionVar, ActionTerm, Formula, Theory]


def _sig_of_term(t: Union[ObjTerm, ActionVar, ActionTerm], objects: set[str], actions: set[tuple[str, int]]) -> None:
    match t:
        case Const(name):
            objects.add(name)
        case ActionTerm(fn, args):
            actions.add((fn, len(args)))
            for arg in args:
                _sig_of_term(arg, objects, actions)
        case Var() | ActionVar():
            pass
        case _:
            raise SitcalcError(f"not a term: {t!r}")


def signature_of(x: SyntaxLike) -> Signature:
    """Symbols occurring in a term, formula or theory.  Variables contribute nothing."""
    objects: set[str] = set()
    statics: set[tuple[str, int]] = set()
    fluents: set[tuple[str, int]] = set()
    actions: set[tuple[str, int]] = set()

    def walk(f: Formula) -> None:
        match f:
            case Truth() | Falsity():
                pass
            case FluentAtom(name, args, _):
                fluents.add((name, len(args)))
                for t in args:
                    _sig_of_term(t, objects, actions)
            case StaticAtom(name, args):
                statics.add((name, len(args)))
                for t in args:
                    _sig_of_term(t, objects, actions)
            case ObjEq(lhs, rhs):
                _sig_of_term(lhs, objects, actions)
                _sig_of_term(rhs, objects, actions)
            case ActionEq(lhs, rhs):
                _sig_of_term(lhs, objects, actions)
                _sig_of_term(rhs, objects, actions)
            case Not(body):
                walk(body)
            case And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b):
                walk(a)
                walk(b)
            case Forall(_, body) | Exists(_, body):
                walk(body)
            case _:
                raise SitcalcError(f"not a formula: {f!r}")

    match x:
        case Theory(axioms):
            for ax in axioms:
                walk(ax)
        case Formula():
            walk(x)
        case Var() | Const() | ActionVar() | ActionTerm():
            _sig_of_term(x, objects, actions)
        case _:
            raise SitcalcError(f"cannot take the signature of {x!r}")

    return Signature(frozenset(objects), frozenset(statics), frozenset(fluents), frozenset(actions))


def free_vars(f: Formula) -> frozenset[str]:
    """Names of free object variables."""
    out: set[str] = set()

    def term(t: Union[ObjTerm, ActionVar, ActionTerm], bound: frozenset[str]) -> None:
        match t:
            case Var(name):
                if name not in bound:
                    out.add(name)
            case ActionTerm(_, args):
                for arg in args:
                    term(arg, bound)
            case _:
                pass

    def walk(f: Formula, bound: frozenset[str]) -> None:
        match f:
            case Truth() | Falsity():
                pass
            case FluentAtom(_, args, _) | StaticAtom(_, args):
                for t in args:
                    term(t, bound)
            case ObjEq(lhs, rhs):
                term(lhs, bound)
                term(rhs, bound)
            case ActionEq(lhs, rhs):
                term(lhs, bound)
                term(rhs, bound)
            case Not(body):
                walk(body, bound)
            case And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b):
                walk(a, bound)
                walk(b, bound)
            case Forall(v, body) | Exists(v, body):
                walk(body, bound | {v.name})

    walk(f, frozenset())
    return frozenset(out)


def stages_of(x: Union[Formula, Theory]) -> frozenset[Stage]:
    """Stages of the fluent atoms occurring in a formula or theory."""
    out: set[Stage] = set()

    def walk(f: Formula) -> None:
        match f:
            case FluentAtom(_, _, stage):
                out.add(stage)
            case Not(body) | Forall(_, body) | Exists(_, body):
                walk(body)
            case And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b):
                walk(a)
                walk(b)
            case _:
                pass

    if isinstance(x, Theory):
        for ax in x:
            walk(ax)
    else:
        walk(x)
    return frozenset(out)


@dataclass(frozen=True)
class UniformityReport:
    """Whether every axiom carries a single common stage on its fluent atoms.

    A theory with no fluent atoms at all counts as uniform in NOW.  offenders
    lists the indices of axioms whose stage set is mixed or disagrees with the
    rest of the theory.
    """

    uniform: bool
    stage: Optional[Stage]
    offenders: tuple[int, ...] = ()


def check_uniform(t: Theory) -> UniformityReport:
    per_axiom = [stages_of(ax) for ax in t.axioms]
    mixed = tuple(i for i, s in enumerate(per_axiom) if len(s) > 1)
    used = frozenset().union(*per_axiom) if per_axiom else frozenset()
    if mixed:
        return UniformityReport(False, None, mixed)
    if len(used) > 1:
        # every axiom is internally pure, but the theory mixes stages
        minority = min(used, key=lambda s: (sum(1 for ps in per_axiom if ps == {s}), s.value))
        offenders = tuple(i for i, s in enumerate(per_axiom) if s == {minority})
        return UniformityReport(False, None, offenders)
    stage = next(iter(used)) if used else Stage.NOW
    return UniformityReport(True, stage)


def rename_stage(x: Union[Formula, Theory], frm: Stage, to: Stage):
    """Retag every fluent atom at stage `frm` with stage `to`."""

    def walk(f: Formula) -> Formula:
        match f:
            case FluentAtom(name, args, stage) if stage == frm:
                return FluentAtom(name, args, to)
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

    if isinstance(x, Theory):
        return Theory(tuple(walk(ax) for ax in x.axioms))
    return walk(x)


# ---------------------------------------------------------------------------
# substitution


def _subst_term(t: ObjTerm, binding: Mapping[str, ObjTerm]) -> ObjTerm:
    match t:
        case Var(name) if name in binding:
            value = binding[name]
            if not isinstance(value, (Var, Const)):
                raise SortError(f"cannot bind object variable {name} to {value!r}")
            return value
        case _:
            return t


def _subst_action(t: ActionTerm, binding: Mapping[str, ObjTerm]) -> ActionTerm:
    return ActionTerm(t.fn, tuple(_subst_term(arg, binding) for arg in t.args))


def _fresh_name(base: str, avoid: set[str]) -> str:
    i = 1
    while f"{base}_{i}" in avoid:
        i += 1
    return f"{base}_{i}"


def substitute(f: Formula, binding: Mapping[str, ObjTerm]) -> Formula:
    """Capture-avoiding substitution of object terms for free object variables."""
    for v in binding.values():
        if not isinstance(v, (Var, Const)):
            raise SortError(f"substitution value must be an object term, got {v!r}")

    def walk(f: Formula, binding: Mapping[str, ObjTerm]) -> Formula:
        if not binding:
            return f
        match f:
            case Truth() | Falsity():
                return f
            case FluentAtom(name, args, stage):
                return FluentAtom(name, tuple(_subst_term(t, binding) for t in args), stage)
            case StaticAtom(name, args):
                return StaticAtom(name, tuple(_subst_term(t, binding) for t in args))
            case ObjEq(lhs, rhs):
                return ObjEq(_subst_term(lhs, binding), _subst_term(rhs, binding))
            case ActionEq(lhs, rhs):
                new_lhs = _subst_action(lhs, binding) if isinstance(lhs, ActionTerm) else lhs
                return ActionEq(new_lhs, _subst_action(rhs, binding))
            case Not(body):
                return Not(walk(body, binding))
            case And(a, b):
                return And(walk(a, binding), walk(b, binding))
            case Or(a, b):
                return Or(walk(a, binding), walk(b, binding))
            case Implies(a, b):
                return Implies(walk(a, binding), walk(b, binding))
            case Iff(a, b):
                return Iff(walk(a, binding), walk(b, binding))
            case Forall(v, body) | Exists(v, body):
                inner = {k: t for k, t in binding.items() if k != v.name}
                captured = {
                    t.name for t in inner.values() if isinstance(t, Var) and t.name == v.name
                }
                if captured:
                    avoid = set(free_vars(body)) | set(inner) | {
                        t.name for t in inner.values() if isinstance(t, Var)
                    }
                    fresh = Var(_fresh_name(v.name, avoid))
                    body = walk(body, {v.name: fresh})
                    v = fresh
                new_body = walk(body, inner)
                return Forall(v, new_body) if isinstance(f, Forall) else Exists(v, new_body)
            case _:
                raise SitcalcError(f"not a formula: {f!r}")

    return walk(f, dict(binding))


# ---------------------------------------------------------------------------
# equality-aware simplification


def _complementary(a: Formula, b: Formula) -> bool:
    return a == Not(b) or b == Not(a)


def _simp_eq(lhs: ObjTerm, rhs: ObjTerm, una: bool) -> Formula:
    if lhs == rhs:
        return TRUE
    if isinstance(lhs, Const) and isinstance(rhs, Const):
        return FALSE if una else ObjEq(lhs, rhs)
    # keep variables on the left so transformed effect conditions read x = c
    if isinstance(lhs, Const) and isinstance(rhs, Var):
        return ObjEq(rhs, lhs)
    return ObjEq(lhs, rhs)


def _conjunction_of(parts: list[Formula], una: bool) -> Formula:
    """Rebuild a conjunction: drop TRUE, dedupe, detect local contradictions."""
    out: list[Formula] = []
    bindings: dict[str, str] = {}
    for p in parts:
        if isinstance(p, Falsity):
            return FALSE
        if isinstance(p, Truth) or p in out:
            continue
        if any(_complementary(p, q) for q in out):
            return FALSE
        if una:
            match p:
                case ObjEq(Var(v), Const(c)):
                    if bindings.setdefault(v, c) != c:
                        return FALSE
                case _:
                    pass
        out.append(p)
    return conj(out)


def _disjunction_of(parts: list[Formula], una: bool) -> Formula:
    """Rebuild a disjunction: drop FALSE, dedupe, absorb subsumed disjuncts."""
    flat: list[Formula] = []
    for p in parts:
        if isinstance(p, Truth):
            return TRUE
        if isinstance(p, Falsity) or p in flat:
            continue
        if any(_complementary(p, q) for q in flat):
            return TRUE
        flat.append(p)
    # drop a disjunct whose conjunct set contains some other whole disjunct set,
    # and strip conjuncts refuted by another disjunct: d | (!d & e)  ==  d | e
    sets = [flatten_and(p) for p in flat]
    keep = [True] * len(flat)
    for i, si in enumerate(sets):
        if not keep[i]:
            continue
        for j, sj in enumerate(sets):
            if i == j or not keep[j]:
                continue
            if all(c in sj for c in si):
                keep[j] = False
    survivors = [i for i in range(len(flat)) if keep[i]]
    changed = False
    for i in survivors:
        others = [flat[j] for j in survivors if j != i]
        stripped = [c for c in sets[i] if not any(_complementary(c, o) for o in others)]
        if len(stripped) != len(sets[i]):
            sets[i] = stripped
            changed = True
    rebuilt = [
        _conjunction_of(sets[i], una) if (changed or len(sets[i]) != 1) else flat[i]
        for i in survivors
    ]
    return disj(rebuilt)


def _one_point_conjuncts(v: Var, parts: list[Formula]) -> Optional[tuple[ObjTerm, list[Formula]]]:
    """Find v = t (t free of v) among conjuncts; return t and the remaining conjuncts."""
    for i, p in enumerate(parts):
        match p:
            case ObjEq(lhs, rhs) if lhs == v and rhs != v:
                return rhs, parts[:i] + parts[i + 1 :]
            case ObjEq(lhs, rhs) if rhs == v and lhs != v:
                return lhs, parts[:i] + parts[i + 1 :]
            case _:
                continue
    return None


def simplify(f: Formula, una: bool = True) -> Formula:
    """Equivalence-preserving local rewriting to a fixed point.

    Covers boolean constant laws, double negation, idempotence, complement and
    subsumption inside flat conjunctions/disjunctions, reflexive equalities,
    constant disequalities under unique names, vacuous quantifiers and the
    one-point rule for exists z (z = t & phi) and forall z (z = t -> phi).
    Nonempty object domains are assumed.
    """

    def step(f: Formula) -> Formula:
        match f:
            case Truth() | Falsity() | FluentAtom() | StaticAtom() | ActionEq():
                return f
            case ObjEq(lhs, rhs):
                return _simp_eq(lhs, rhs, una)
            case Not(body):
                match step(body):
                    case Truth():
                        return FALSE
                    case Falsity():
                        return TRUE
                    case Not(inner):
                        return inner
                    case g:
                        return Not(g)
            case And():
                parts = [step(p) for p in flatten_and(f)]
                return _conjunction_of(parts, una)
            case Or():
                parts = [step(p) for p in flatten_or(f)]
                return _disjunction_of(parts, una)
            case Implies(lhs, rhs):
                a, b = step(lhs), step(rhs)
                match (a, b):
                    case (Truth(), _):
                        return b
                    case (Falsity(), _):
                        return TRUE
                    case (_, Truth()):
                        return TRUE
                    case (_, Falsity()):
                        return step(Not(a))
                    case _ if a == b:
                        return TRUE
                    case _:
                        return Implies(a, b)
            case Iff(lhs, rhs):
                a, b = step(lhs), step(rhs)
                match (a, b):
                    case (Truth(), _):
                        return b
                    case (_, Truth()):
                        return a
                    case (Falsity(), _):
                        return step(Not(b))
                    case (_, Falsity()):
                        return step(Not(a))
                    case _ if a == b:
                        return TRUE
                    case _:
                        return Iff(a, b)
            case Forall(v, body):
                b = step(body)
                if isinstance(b, (Truth, Falsity)):
                    return b
                if v.name not in free_vars(b):
                    return b
                match b:
                    case Implies(ante, cons):
                        found = _one_point_conjuncts(v, flatten_and(ante))
                        if found is not None:
                            t, rest = found
                            inst = substitute(Implies(conj(rest), cons), {v.name: t})
                            return step(inst)
                    case _:
                        pass
                return Forall(v, b)
            case Exists(v, body):
                b = step(body)
                if isinstance(b, (Truth, Falsity)):
                    return b
                if v.name not in free_vars(b):
                    return b
                found = _one_point_conjuncts(v, flatten_and(b))
                if found is not None:
                    t, rest = found
                    return step(substitute(conj(rest), {v.name: t}))
                return Exists(v, b)
            case _:
                raise SitcalcError(f"not a formula: {f!r}")

    prev = f
    for _ in range(200):  # each rule shrinks the tree; the bound is a safety net
        cur = step(prev)
        if cur == prev:
            return cur
        prev = cur
    return prev


def simplify_theory(t: Theory, una: bool = True) -> Theory:
    return Theory(tuple(simplify(ax, una) for ax in t.axioms))


def split_conjunctions(t: Theory) -> Theory:
    """Split each top-level conjunction into separate axioms, dropping TRUE."""
    out: list[Formula] = []
    for ax in t.axioms:
        out.extend(flatten_and(ax))
    return Theory(tuple(out))


# ---------------------------------------------------------------------------
# action equalities


def rewrite_action_equalities(f: Formula) -> Formula:
    """Replace action equalities by object equalities using unique names for actions.

    A(t1..tn) = A(u1..un) becomes the conjunction of the pointwise object
    equalities; equalities between distinct action functions become FALSE.
    An equality still mentioning the SSA action variable is an error.
    """

    def walk(f: Formula) -> Formula:
        match f:
            case ActionEq(lhs, rhs):
                if isinstance(lhs, ActionVar) or isinstance(rhs, ActionVar):
                    raise UnsubstitutedActionVariable(
                        "action equality still mentions the action variable; substitute a ground action first"
                    )
                if lhs.fn != rhs.fn:
                    return FALSE
                return conj([_simp_eq(x, y, una=False) for x, y in zip(lhs.args, rhs.args)])
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


def contains_action_eq(f: Formula) -> bool:
    match f:
        case ActionEq():
            return True
        case Not(body) | Forall(_, body) | Exists(_, body):
            return contains_action_eq(body)
        case And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b):
            return contains_action_eq(a) or contains_action_eq(b)
        case _:
            return False
