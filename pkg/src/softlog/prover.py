"""Depth-bounded symbolic proving.

``entails`` runs SLD resolution where the bound counts clause applications
along each proof branch (proof-tree height); matching a background fact is
free.  With that accounting, a ground atom is provable within depth T exactly
when T-step forward chaining derives it, which is what makes this module the
discrete oracle for the differentiable inference.

Depth exhaustion returns False: an under-approximation, by design.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .logic import (
    Atom,
    Clause,
    FALSE,
    Subst,
    TRUE,
    apply_subst,
    clause_vars,
    compose,
    is_ground,
    rename_apart,
    unify,
)
from .problem import ILPProblem


@dataclass(frozen=True)
class ProofConfig:
    max_depth: int = 4

    def __post_init__(self):
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")


class _Prover:
    def __init__(self, program: Sequence[Clause], facts: Iterable[Atom]):
        self.facts = set(facts)
        self.facts_by_pred = defaultdict(list)
        for f in self.facts:
            self.facts_by_pred[(f.pred, f.arity)].append(f)
        self.clauses_by_pred = defaultdict(list)
        for c in program:
            self.clauses_by_pred[(c.head.pred, c.head.arity)].append(c)
        self.memo: dict[tuple[Atom, int], bool] = {}
        self._fresh = 0

    def _rename(self, c: Clause) -> Clause:
        self._fresh += 1
        tag = self._fresh
        ren = {v: type(v)(f"_{tag}_{v.name}") for v in clause_vars(c)}
        return apply_subst(c, ren)

    def provable(self, goal: Atom, depth: int) -> bool:
        """Ground goal provable within the given proof-tree height."""
        if goal == TRUE:
            return True
        if goal == FALSE:
            return False
        if goal in self.facts:
            return True
        key = (goal, depth)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        result = False
        if depth >= 1:
            for c in self.clauses_by_pred.get((goal.pred, goal.arity), ()):
                rc = self._rename(c)
                theta = unify(rc.head, goal)
                if theta is None:
                    continue
                goals = tuple((apply_subst(b, theta), depth - 1) for b in rc.body)
                if self._any_solution(goals, {}):
                    result = True
                    break
        self.memo[key] = result
        return result

    def _any_solution(self, goals: tuple, theta: Subst) -> bool:
        for _ in self._solutions(goals, theta):
            return True
        return False

    def _solutions(self, goals: tuple, theta: Subst) -> Iterator[Subst]:
        if not goals:
            yield theta
            return
        (raw, budget), rest = goals[0], goals[1:]
        goal = apply_subst(raw, theta)
        if is_ground(goal):
            if self.provable(goal, budget):
                yield from self._solutions(rest, theta)
            return
        for f in self.facts_by_pred.get((goal.pred, goal.arity), ()):
            sigma = unify(goal, f)
            if sigma is not None:
                yield from self._solutions(rest, compose(theta, sigma))
        if budget >= 1:
            for c in self.clauses_by_pred.get((goal.pred, goal.arity), ()):
                rc = self._rename(c)
                sigma = unify(goal, rc.head)
                if sigma is None:
                    continue
                sub = tuple((b, budget - 1) for b in rc.body)
                yield from self._solutions(sub + rest, compose(theta, sigma))


def entails(
    program: Iterable[Clause],
    background: Iterable[Atom],
    goal: Atom,
    cfg: ProofConfig,
) -> bool:
    """True iff the ground goal is derivable from program + background within
    ``cfg.max_depth`` clause applications per branch."""
    if not is_ground(goal):
        raise ValueError(f"goal must be ground: {goal!r}")
    return _Prover(tuple(program), background).provable(goal, cfg.max_depth)


def eval_counts(
    clause: Clause, problem: ILPProblem, cfg: ProofConfig
) -> tuple[int, int]:
    """(positives, negatives) entailed by background + the clause alone."""
    prover = _Prover((clause,), problem.background)
    p = sum(prover.provable(e, cfg.max_depth) for e in problem.pos)
    n = sum(prover.provable(e, cfg.max_depth) for e in problem.neg)
    return p, n


def eval_clause(
    clause: Clause,
    problem: ILPProblem,
    cfg: ProofConfig,
    neg_penalty: float = 0.0,
) -> float:
    """Number of positive examples entailed by background + the clause.

    ``neg_penalty`` > 0 switches to the extension score pos - lambda * neg;
    the default scores positives only.
    """
    p, n = eval_counts(clause, problem, cfg)
    return p - neg_penalty * n if neg_penalty else float(p)


def forward_closure(
    program: Iterable[Clause],
    background: Iterable[Atom],
    universe: Sequence[Atom],
    steps: int,
) -> set[Atom]:
    """Atoms of ``universe`` derivable in at most ``steps`` forward-chaining
    rounds, where each round applies every clause to everything currently
    true.  Subgoals that are neither background nor in the universe count as
    false; the result is the true set (background included) plus ``true``."""
    program = tuple(program)
    true: set[Atom] = {TRUE} | set(background)
    candidates = [a for a in universe if a not in (TRUE, FALSE)]
    for _ in range(steps):
        new: list[Atom] = []
        for g in candidates:
            if g in true:
                continue
            for c in program:
                rc = rename_apart(c, ())
                theta = unify(rc.head, g)
                if theta is None:
                    continue
                body = [apply_subst(b, theta) for b in rc.body]
                if all(is_ground(b) and b in true for b in body):
                    new.append(g)
                    break
        if not new:
            break
        true.update(new)
    return true
