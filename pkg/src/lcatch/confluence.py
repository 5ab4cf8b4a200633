"""Parallel reduction, compound contexts, and complete developments.

Everything here is untyped: the confluence results hold for arbitrary
well-formed terms, and the continuation side conditions (alpha not free
in the value) genuinely matter only there.  Side conditions written on
values are read as constraints on free *continuation* variables,
matching the reduction rules.

A compound context is a stack of evaluation frames (apply-to, applied-
value, throw); a throw can jump over a whole such stack in one parallel
step.  The complete development contracts every redex at once and is the
joinability witness: for any parallel reduct t' of t, t' parallel-steps
to the complete development of t.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

from .reduction import enumerate_redexes
from .syntax import (
    App, Catch, ConsC, Lam, LrecC, Nil, Term, Throw, alpha_eq, canonical,
    fcv, is_value, size, subst,
)


class BudgetExceeded(Exception):
    """Raised when a term is too large for exhaustive reduct enumeration."""


DEFAULT_NODE_BUDGET = 14


# ---------------------------------------------------------------------------
# Compound contexts


@dataclass(frozen=True)
class AppFunFrame:
    """Hole in function position, applied to `arg`."""

    arg: Term


@dataclass(frozen=True)
class AppArgFrame:
    """Hole in argument position under the value `fun`."""

    fun: Term


@dataclass(frozen=True)
class ThrowFrame:
    """Hole inside the payload of `throw cont`."""

    cont: str


Frame = AppFunFrame | AppArgFrame | ThrowFrame


@dataclass(frozen=True)
class CompoundContextView:
    """A decomposition t = frames[subject], with subject a throw."""

    frames: tuple[Frame, ...]
    hole_subject: Term

    def reassemble(self) -> Term:
        out = self.hole_subject
        for frame in reversed(self.frames):
            match frame:
                case AppFunFrame(arg):
                    out = App(out, arg)
                case AppArgFrame(fun):
                    out = App(fun, out)
                case ThrowFrame(cont):
                    out = Throw(cont, out)
        return out


def throw_decompositions(t: Term) -> list[CompoundContextView]:
    """Every decomposition of `t` as a compound context around a throw.

    The frame spine is unique (into a non-value function, into the
    argument under a value function, through throw payloads), so the
    results are nested, ordered outermost first.
    """
    out: list[CompoundContextView] = []

    def walk(u: Term, frames: tuple[Frame, ...]) -> None:
        match u:
            case App(fun, arg):
                if is_value(fun):
                    walk(arg, frames + (AppArgFrame(fun),))
                else:
                    walk(fun, frames + (AppFunFrame(arg),))
            case Throw(cont, payload):
                out.append(CompoundContextView(frames, u))
                walk(payload, frames + (ThrowFrame(cont),))

    walk(t, ())
    return out


def _maximal_decomposition(t: Term) -> Optional[CompoundContextView]:
    """The decomposition with the largest context; its payload is never a throw."""
    views = throw_decompositions(t)
    return views[-1] if views else None


# ---------------------------------------------------------------------------
# Complete development


def complete_development(t: Term) -> Term:
    """Contract all redexes of `t` simultaneously (Takahashi's witness)."""
    match t:
        case App(Lam(param, _, body), arg) if is_value(arg):
            return subst(complete_development(body), param,
                         complete_development(arg))
        case App(App(App(LrecC(), base), step), Nil()) \
                if is_value(base) and is_value(step):
            return complete_development(base)
        case App(App(App(LrecC(), base), step), App(App(ConsC(), head), tail)) \
                if is_value(base) and is_value(step) and is_value(head) and is_value(tail):
            b, s = complete_development(base), complete_development(step)
            h, tl = complete_development(head), complete_development(tail)
            return App(App(App(s, h), tl), App(App(App(LrecC(), b), s), tl))
        case App() | Throw():
            view = _maximal_decomposition(t)
            if view is not None:
                throw = view.hole_subject
                assert isinstance(throw, Throw)
                return Throw(throw.cont, complete_development(throw.payload))
            match t:
                case App(fun, arg):
                    return App(complete_development(fun), complete_development(arg))
            raise AssertionError("throw root always decomposes")
        case Catch(cont, Throw(cont2, payload)) if cont2 == cont:
            return Catch(cont, complete_development(payload))
        case Catch(cont, Throw(cont2, payload)) \
                if cont2 != cont and is_value(payload) and cont not in fcv(payload):
            return Throw(cont2, complete_development(payload))
        case Catch(cont, body) if is_value(body) and cont not in fcv(body):
            return complete_development(body)
        case Catch(cont, body):
            return Catch(cont, complete_development(body))
        case Lam(param, annot, body):
            return Lam(param, annot, complete_development(body))
    return t


# ---------------------------------------------------------------------------
# Parallel reduction, by exhaustive enumeration


def parallel_reducts(t: Term, node_budget: int = DEFAULT_NODE_BUDGET) -> list[Term]:
    """The exact set of one-step parallel reducts of `t`, modulo alpha.

    Enumeration is exponential; inputs larger than `node_budget` raise
    BudgetExceeded.  The result is deterministic, deduplicated via
    canonical renaming, with `t` itself first (reflexivity).
    """
    if size(t) > node_budget:
        raise BudgetExceeded(f"term has {size(t)} nodes, budget {node_budget}")
    return _preds(t)


def _dedup(terms: Iterator[Term]) -> list[Term]:
    seen: dict[Term, Term] = {}
    for u in terms:
        key = canonical(u)
        if key not in seen:
            seen[key] = u
    return list(seen.values())


def _preds(t: Term) -> list[Term]:
    def gen() -> Iterator[Term]:
        match t:
            case App(fun, arg):
                fun_reducts = _preds(fun)
                arg_reducts = _preds(arg)
                # congruence
                for f in fun_reducts:
                    for a in arg_reducts:
                        yield App(f, a)
                # beta on a value argument
                match fun:
                    case Lam(param, _, body) if is_value(arg):
                        for b in _preds(body):
                            for a in arg_reducts:
                                yield subst(b, param, a)
                # recursor contractions (all slots values)
                match t:
                    case App(App(App(LrecC(), base), step), Nil()) \
                            if is_value(base) and is_value(step):
                        yield from _preds(base)
                    case App(App(App(LrecC(), base), step),
                             App(App(ConsC(), head), tail)) \
                            if is_value(base) and is_value(step) \
                            and is_value(head) and is_value(tail):
                        for b in _preds(base):
                            for s in _preds(step):
                                for h in _preds(head):
                                    for tl in _preds(tail):
                                        yield App(App(App(s, h), tl),
                                                  App(App(App(LrecC(), b), s), tl))
                # a throw jumps over any nonempty compound context
                for view in throw_decompositions(t):
                    throw = view.hole_subject
                    assert isinstance(throw, Throw)
                    for p in _preds(throw.payload):
                        yield Throw(throw.cont, p)
            case Throw(cont, payload):
                # the empty-context instance of the jump rule is the
                # congruence for throw; deeper decompositions jump
                for view in throw_decompositions(t):
                    throw = view.hole_subject
                    assert isinstance(throw, Throw)
                    for p in _preds(throw.payload):
                        yield Throw(throw.cont, p)
            case Catch(cont, body):
                for b in _preds(body):
                    yield Catch(cont, b)
                match body:
                    case Throw(cont2, payload) if cont2 == cont:
                        for p in _preds(payload):
                            yield Catch(cont, p)
                    case Throw(cont2, payload) \
                            if cont2 != cont and is_value(payload) \
                            and cont not in fcv(payload):
                        for p in _preds(payload):
                            yield Throw(cont2, p)
                if is_value(body) and cont not in fcv(body):
                    yield from _preds(body)
            case Lam(param, annot, body):
                for b in _preds(body):
                    yield Lam(param, annot, b)
            case _:
                yield t

    match t:
        case App() | Throw() | Catch() | Lam():
            return _dedup(gen())
    return [t]


def is_parallel_step(s: Term, t: Term,
                     node_budget: int = DEFAULT_NODE_BUDGET) -> bool:
    """True iff `t` is a one-step parallel reduct of `s`, modulo alpha."""
    key = canonical(t)
    return any(canonical(u) == key for u in parallel_reducts(s, node_budget))


@dataclass(frozen=True)
class ParallelStep:
    """A claimed simultaneous-contraction step from `source` to `target`."""

    source: Term
    target: Term

    def valid(self, node_budget: int = DEFAULT_NODE_BUDGET) -> bool:
        return is_parallel_step(self.source, self.target, node_budget)


def join(t1: Term, t2: Term, max_rounds: int = 16,
         node_budget: Optional[int] = None) -> Optional[Term]:
    """Search for a common reduct by developing both sides in lockstep.

    Compares the two sides modulo alpha after each round of complete
    development.  `node_budget`, when given, bounds the size of the
    developed terms; exceeding it ends the search.  None means the search
    was exhausted, not that no common reduct exists.
    """
    a, b = t1, t2
    for _ in range(max_rounds + 1):
        if alpha_eq(a, b):
            return a
        if node_budget is not None and (size(a) > node_budget or size(b) > node_budget):
            return None
        a = complete_development(a)
        b = complete_development(b)
    return None


def reachable_by_reduction(start: Term, target: Term, max_depth: int = 30,
                           max_explored: int = 30000,
                           max_size: int = 400) -> bool:
    """Breadth-first check that `start` reduces to `target` in many steps.

    Used to validate that parallel reducts are ordinary multi-step
    reducts; the caps keep exploration of divergent untyped graphs
    finite and are generous for budget-sized inputs.
    """
    target_key = canonical(target)
    frontier = [start]
    seen = {canonical(start)}
    if canonical(start) == target_key:
        return True
    explored = 0
    for _ in range(max_depth):
        next_frontier: list[Term] = []
        for u in frontier:
            for event in enumerate_redexes(u):
                explored += 1
                if explored > max_explored:
                    return False
                v = event.result
                key = canonical(v)
                if key == target_key:
                    return True
                if key in seen or size(v) > max_size:
                    continue
                seen.add(key)
                next_frontier.append(v)
        if not next_frontier:
            return False
        frontier = next_frontier
    return False
