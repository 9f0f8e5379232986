"""Candidate-clause generation: scored beam search and the naive breadth-first
baseline."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from .logic import Clause, canonical, canonical_in, canonical_text, nest_depth
from .problem import ILPProblem
from .prover import ProofConfig, eval_counts
from .refine import RefinementConfig, refine


@dataclass(frozen=True)
class BeamConfig:
    beam_size: int = 10
    beam_steps: int = 5
    prune_zero: bool = True
    # extension: score = positives - neg_penalty * negatives; off by default,
    # the plain score counts positives only
    neg_penalty: float = 0.0

    def __post_init__(self):
        if self.beam_size < 1 or self.beam_steps < 1:
            raise ValueError("beam_size and beam_steps must be >= 1")
        if self.neg_penalty < 0:
            raise ValueError("neg_penalty must be >= 0")


def _rank_key(pos: float, neg: int, clause: Clause) -> tuple:
    # Equal scores are broken toward clauses entailing fewer negatives
    # (promising = many positives, few negatives), then toward shorter
    # bodies (more general), then canonical text for determinism.
    return (-pos, neg, len(clause.body), canonical_text(clause))


def beam_search(
    initial: list[Clause],
    problem: ILPProblem,
    cfg: BeamConfig,
    refine_cfg: RefinementConfig = RefinementConfig(),
    proof_cfg: ProofConfig = ProofConfig(),
    max_clauses: Optional[int] = None,
) -> list[Clause]:
    """Grow candidates from the initial clauses by iterated refinement.

    Each round opens the current beam (adding it to the result), scores every
    refinement by the number of positives it entails together with the
    background, and keeps the top ``beam_size`` as the next beam.  Only opened
    clauses enter the result, so the final round's refinements are scored but
    never returned.  With ``max_clauses`` the search stops once that many
    clauses are collected (the generation-budget comparison against the
    unscored baseline).  Output is deduplicated by canonical form and ordered
    by score (descending), ties by canonical text.
    """
    if not initial:
        raise ValueError("at least one initial clause is required")
    base_nest = max(nest_depth(c) for c in initial)
    collected: dict = {}  # canonical clause -> (clause, rank key)
    scores: dict = {}

    def score_of(c: Clause) -> tuple:
        key = canonical(c)
        if key not in scores:
            p, n = eval_counts(c, problem, proof_cfg)
            scores[key] = (p, n)
        return scores[key]

    def ranked(p: int, n: int, c: Clause) -> tuple:
        return _rank_key(p - cfg.neg_penalty * n, n, c)

    to_open = list(dict.fromkeys(initial))
    full = False
    for _ in range(cfg.beam_steps):
        buffer: list[tuple[tuple, Clause]] = []
        buffered = set()
        for c in to_open:
            ck = canonical(c)
            if ck not in collected:
                p, n = score_of(c)
                rep = canonical_in(c, problem.language.variables)
                collected[ck] = (rep, ranked(p, n, c))
                if max_clauses is not None and len(collected) >= max_clauses:
                    full = True
                    break
            for r in refine(c, problem.language, refine_cfg, base_nest=base_nest):
                rk = canonical(r)
                if rk in collected or rk in buffered:
                    continue
                p, n = score_of(r)
                if cfg.prune_zero and p == 0:
                    continue
                buffered.add(rk)
                buffer.append((ranked(p, n, r), r))
        if full:
            break
        buffer.sort(key=lambda item: item[0])
        to_open = [r for _, r in buffer[: cfg.beam_size]]
        if not to_open:
            break
    ordered = sorted(collected.values(), key=lambda item: item[1])
    return [c for c, _ in ordered]


def naive_generate(
    initial: list[Clause],
    problem: ILPProblem,
    n_clause: int,
    refine_cfg: RefinementConfig = RefinementConfig(),
) -> list[Clause]:
    """Breadth-first refinement with no example-based scoring, stopping once
    ``n_clause`` alpha-distinct clauses are collected."""
    if not initial:
        raise ValueError("at least one initial clause is required")
    if n_clause < 1:
        raise ValueError("n_clause must be >= 1")
    base_nest = max(nest_depth(c) for c in initial)
    out: list[Clause] = []
    seen = set()
    queue = deque(initial)
    while queue and len(out) < n_clause:
        c = queue.popleft()
        key = canonical(c)
        if key in seen:
            continue
        seen.add(key)
        out.append(canonical_in(c, problem.language.variables))
        queue.extend(refine(c, problem.language, refine_cfg, base_nest=base_nest))
    return out
