"""Type checking and monomorphic inference.

Inference is syntax-directed constraint generation plus first-order
unification.  Each occurrence of nil, cons, lrec, and each unannotated
binder gets fresh metavariables; catch extends the continuation
environment and its binder type must solve to an arrow-free type; throw
checks its payload against the bound continuation type and itself takes
any type.  Metavariables left unsolved in the result type or in any
binder type are an error, never defaulted.

`infer_typed` additionally returns a tree of fully solved node types; the
`replay` checker re-validates such a tree directly against the derivation
rules, independently of the solver.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from .surface import print_type
from .syntax import (
    App, ArrowType, Catch, ConsC, Lam, ListType, LrecC, MetaVar, Nil, Term,
    Throw, Type, UNIT_TYPE, UnitVal, Var, type_has_meta,
)


def is_arrow_free(ty: Type) -> bool:
    """True iff no arrow occurs anywhere in the type."""
    match ty:
        case ArrowType():
            return False
        case ListType(elem):
            return is_arrow_free(elem)
        case MetaVar():
            raise ValueError("is_arrow_free applied to an unsolved metavariable")
    return True


class ErrorKind(enum.Enum):
    UNBOUND_VAR = "UnboundVar"
    UNBOUND_CONT_VAR = "UnboundContVar"
    MISMATCH = "Mismatch"
    NON_ARROW_FREE_CATCH = "NonArrowFreeCatch"
    NON_ARROW_FREE_THROW = "NonArrowFreeThrow"
    AMBIGUOUS_TYPE = "AmbiguousType"
    OCCURS_CHECK = "OccursCheck"


class TypingError(Exception):
    """Type error with a kind tag, offending types, and an AST path."""

    def __init__(self, kind: ErrorKind, message: str,
                 expected: Optional[Type] = None, found: Optional[Type] = None,
                 path: tuple[int, ...] = ()):
        self.kind = kind
        self.expected = expected
        self.found = found
        self.path = path
        super().__init__(message)

    def render(self) -> str:
        loc = "/" + "/".join(map(str, self.path))
        return f"{self.kind.value} at {loc}: {self}"


@dataclass
class TypingEnv:
    """Term-variable typings (gamma) and continuation typings (delta).

    Every delta entry must be arrow-free; this is validated on
    construction.
    """

    gamma: dict[str, Type] = field(default_factory=dict)
    delta: dict[str, Type] = field(default_factory=dict)

    def __post_init__(self):
        for name, ty in self.delta.items():
            if not is_arrow_free(ty):
                raise ValueError(
                    f"continuation {name!r} bound at non-arrow-free type "
                    f"{print_type(ty)}")


@dataclass(frozen=True)
class TypedTerm:
    """A term with a fully solved type at every node."""

    term: Term
    type: Type
    children: tuple["TypedTerm", ...]


# ---------------------------------------------------------------------------
# Unification


class _Solver:
    def __init__(self):
        self.assignments: dict[int, Type] = {}
        self.counter = 0

    def fresh(self) -> MetaVar:
        self.counter += 1
        return MetaVar(self.counter)

    def prune(self, ty: Type) -> Type:
        while isinstance(ty, MetaVar) and ty.ident in self.assignments:
            ty = self.assignments[ty.ident]
        return ty

    def zonk(self, ty: Type) -> Type:
        ty = self.prune(ty)
        match ty:
            case ListType(elem):
                return ListType(self.zonk(elem))
            case ArrowType(dom, cod):
                return ArrowType(self.zonk(dom), self.zonk(cod))
        return ty

    def _occurs(self, ident: int, ty: Type) -> bool:
        ty = self.prune(ty)
        match ty:
            case MetaVar(i):
                return i == ident
            case ListType(elem):
                return self._occurs(ident, elem)
            case ArrowType(dom, cod):
                return self._occurs(ident, dom) or self._occurs(ident, cod)
        return False

    def unify(self, a: Type, b: Type, path: tuple[int, ...]) -> None:
        a, b = self.prune(a), self.prune(b)
        if a == b:
            return
        if isinstance(a, MetaVar):
            if self._occurs(a.ident, b):
                raise TypingError(ErrorKind.OCCURS_CHECK,
                                  f"occurs check: ?{a.ident} in {print_type(self.zonk(b))}",
                                  path=path)
            self.assignments[a.ident] = b
            return
        if isinstance(b, MetaVar):
            self.unify(b, a, path)
            return
        match a, b:
            case ListType(e1), ListType(e2):
                self.unify(e1, e2, path)
                return
            case ArrowType(d1, c1), ArrowType(d2, c2):
                self.unify(d1, d2, path)
                self.unify(c1, c2, path)
                return
        raise TypingError(
            ErrorKind.MISMATCH,
            f"expected {print_type(self.zonk(a))}, found {print_type(self.zonk(b))}",
            expected=self.zonk(a), found=self.zonk(b), path=path)


# ---------------------------------------------------------------------------
# Inference


@dataclass(frozen=True)
class _RawTyped:
    term: Term
    type: Type
    children: tuple["_RawTyped", ...]


def _constrain(solver: _Solver, t: Term, gamma: dict[str, Type],
               delta: dict[str, Type], path: tuple[int, ...]) -> _RawTyped:
    match t:
        case Var(name):
            if name not in gamma:
                raise TypingError(ErrorKind.UNBOUND_VAR,
                                  f"unbound variable {name!r}", path=path)
            return _RawTyped(t, gamma[name], ())
        case UnitVal():
            return _RawTyped(t, UNIT_TYPE, ())
        case Nil():
            return _RawTyped(t, ListType(solver.fresh()), ())
        case ConsC():
            elem = solver.fresh()
            return _RawTyped(t, ArrowType(elem, ArrowType(ListType(elem), ListType(elem))), ())
        case LrecC():
            res = solver.fresh()
            elem = solver.fresh()
            step = ArrowType(elem, ArrowType(ListType(elem), ArrowType(res, res)))
            return _RawTyped(t, ArrowType(res, ArrowType(step, ArrowType(ListType(elem), res))), ())
        case Lam(param, annot, body):
            dom = annot if annot is not None else solver.fresh()
            inner = _constrain(solver, body, {**gamma, param: dom}, delta, path + (0,))
            return _RawTyped(t, ArrowType(dom, inner.type), (inner,))
        case App(fun, arg):
            f = _constrain(solver, fun, gamma, delta, path + (0,))
            a = _constrain(solver, arg, gamma, delta, path + (1,))
            res = solver.fresh()
            solver.unify(f.type, ArrowType(a.type, res), path)
            return _RawTyped(t, res, (f, a))
        case Catch(cont, body):
            psi = solver.fresh()
            inner = _constrain(solver, body, gamma, {**delta, cont: psi}, path + (0,))
            solver.unify(psi, inner.type, path)
            return _RawTyped(t, psi, (inner,))
        case Throw(cont, payload):
            if cont not in delta:
                raise TypingError(ErrorKind.UNBOUND_CONT_VAR,
                                  f"unbound continuation variable {cont!r}", path=path)
            inner = _constrain(solver, payload, gamma, delta, path + (0,))
            solver.unify(delta[cont], inner.type, path)
            return _RawTyped(t, solver.fresh(), (inner,))
    raise ValueError(f"not a term: {t!r}")


def _finalize(solver: _Solver, raw: _RawTyped, path: tuple[int, ...]) -> TypedTerm:
    """Zonk every node type and run the post-solution binder checks."""
    ty = solver.zonk(raw.type)
    match raw.term:
        case Lam():
            dom = ty.dom if isinstance(ty, ArrowType) else ty
            if type_has_meta(dom):
                raise TypingError(ErrorKind.AMBIGUOUS_TYPE,
                                  f"unsolved binder type {print_type(dom)}",
                                  found=dom, path=path)
        case Catch():
            if type_has_meta(ty):
                raise TypingError(ErrorKind.AMBIGUOUS_TYPE,
                                  f"unsolved catch binder type {print_type(ty)}",
                                  found=ty, path=path)
            if not is_arrow_free(ty):
                raise TypingError(ErrorKind.NON_ARROW_FREE_CATCH,
                                  f"catch bound at non-arrow-free type {print_type(ty)}",
                                  found=ty, path=path)
        case Throw():
            payload_ty = solver.zonk(raw.children[0].type)
            if type_has_meta(payload_ty):
                raise TypingError(ErrorKind.AMBIGUOUS_TYPE,
                                  f"unsolved throw payload type {print_type(payload_ty)}",
                                  found=payload_ty, path=path)
            if not is_arrow_free(payload_ty):
                raise TypingError(ErrorKind.NON_ARROW_FREE_THROW,
                                  f"throw payload at non-arrow-free type {print_type(payload_ty)}",
                                  found=payload_ty, path=path)
    kids = tuple(_finalize(solver, child, path + (i,))
                 for i, child in enumerate(raw.children))
    return TypedTerm(raw.term, ty, kids)


def infer_typed(env: TypingEnv, t: Term) -> TypedTerm:
    """Infer and return the fully solved typed tree for `t`."""
    solver = _Solver()
    raw = _constrain(solver, t, dict(env.gamma), dict(env.delta), ())
    root_ty = solver.zonk(raw.type)
    if type_has_meta(root_ty):
        raise TypingError(ErrorKind.AMBIGUOUS_TYPE,
                          f"unsolved result type {print_type(root_ty)}",
                          found=root_ty, path=())
    return _finalize(solver, raw, ())


def infer(env: TypingEnv, t: Term) -> Type:
    """Infer the unique solved type of `t`, or raise TypingError."""
    return infer_typed(env, t).type


def check(env: TypingEnv, t: Term, ty: Type) -> None:
    """Check `t` against `ty` (which must contain no metavariables)."""
    if type_has_meta(ty):
        raise ValueError("check called with a metavariable in the expected type")
    solver = _Solver()
    raw = _constrain(solver, t, dict(env.gamma), dict(env.delta), ())
    solver.unify(ty, raw.type, ())
    _finalize(solver, raw, ())


def derivable(env: TypingEnv, t: Term, ty: Type) -> bool:
    """True iff the judgment `env |- t : ty` has a derivation.

    Unlike `check`, this accepts terms whose subterms keep unconstrained
    metavariables after solving (reduction can orphan a subterm's type,
    e.g. by discarding the context of a throw).  Leftover metavariables
    are unconstrained, so instantiating them at the unit type always
    satisfies the arrow-free side conditions; derivability is therefore
    exactly: constraints solve, and the instantiated binder checks pass.
    """
    solver = _Solver()
    try:
        raw = _constrain(solver, t, dict(env.gamma), dict(env.delta), ())
        solver.unify(ty, raw.type, ())
    except TypingError:
        return False

    def close(node: _RawTyped) -> None:
        for meta in _unsolved_metas(solver, node.type):
            solver.assignments[meta] = UNIT_TYPE
        for child in node.children:
            close(child)

    close(raw)
    try:
        _finalize(solver, raw, ())
    except TypingError:
        return False
    return True


def _unsolved_metas(solver: _Solver, ty: Type) -> list[int]:
    ty = solver.prune(ty)
    match ty:
        case MetaVar(ident):
            return [ident]
        case ListType(elem):
            return _unsolved_metas(solver, elem)
        case ArrowType(dom, cod):
            return _unsolved_metas(solver, dom) + _unsolved_metas(solver, cod)
    return []


# ---------------------------------------------------------------------------
# Independent derivation replayer


def replay(env: TypingEnv, tt: TypedTerm) -> bool:
    """Validate a typed tree directly against the derivation rules.

    No unification: every node type is known, so each rule is a local
    equality check.  Used as a soundness oracle for the solver.
    """

    def go(node: TypedTerm, gamma: dict[str, Type], delta: dict[str, Type]) -> bool:
        t, ty = node.term, node.type
        match t:
            case Var(name):
                return gamma.get(name) == ty
            case UnitVal():
                return ty == UNIT_TYPE
            case Nil():
                return isinstance(ty, ListType)
            case ConsC():
                match ty:
                    case ArrowType(e, ArrowType(ListType(e2), ListType(e3))):
                        return e == e2 == e3
                return False
            case LrecC():
                match ty:
                    case ArrowType(r, ArrowType(ArrowType(e, ArrowType(ListType(e2), ArrowType(r2, r3))),
                                                ArrowType(ListType(e3), r4))):
                        return r == r2 == r3 == r4 and e == e2 == e3
                return False
            case Lam(param, annot, _):
                match ty:
                    case ArrowType(dom, cod):
                        if annot is not None and annot != dom:
                            return False
                        body = node.children[0]
                        return body.type == cod and go(body, {**gamma, param: dom}, delta)
                return False
            case App():
                f, a = node.children
                return (f.type == ArrowType(a.type, ty)
                        and go(f, gamma, delta) and go(a, gamma, delta))
            case Catch(cont, _):
                if not is_arrow_free(ty):
                    return False
                body = node.children[0]
                return body.type == ty and go(body, gamma, {**delta, cont: ty})
            case Throw(cont, _):
                if cont not in delta:
                    return False
                payload = node.children[0]
                return payload.type == delta[cont] and go(payload, gamma, delta)
        return False

    return go(tt, dict(env.gamma), dict(env.delta))
