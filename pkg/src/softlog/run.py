"""End-to-end pipeline: split, noise, clause generation, grounding, training,
evaluation, and reproducible run records."""
from __future__ import annotations

import json
import logging
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .datasets import (
    TASKS,
    TaskSpec,
    generate,
    inject_noise,
    problem_hash,
    split,
)
from .grounding import convert_background, ground_context
from .infer import WeightSet
from .logic import Clause
from .parser import parse_clause, print_clause
from .problem import ILPProblem
from .prover import ProofConfig
from .refine import RefinementConfig
from .search import BeamConfig, beam_search, naive_generate
from .training import TrainConfig, extract_program, make_labels, metrics, predictions, train

log = logging.getLogger(__name__)


@dataclass
class RunRecord:
    """Everything needed to describe and reproduce one training run."""

    task: str
    seed: int
    config: dict
    dataset_hash: str
    n_clauses: int
    n_atoms: int
    param_count: int
    loss_samples: list
    train_mse: float
    test_mse: float
    train_auc: float
    test_auc: float
    runtime_s: float
    program: list

    def summary(self) -> dict:
        return {
            "task": self.task,
            "seed": self.seed,
            "m": self.config.get("m"),
            "T": self.config.get("steps"),
            "n_clauses": self.n_clauses,
            "n_atoms": self.n_atoms,
            "params": self.param_count,
            "train_mse": self.train_mse,
            "test_mse": self.test_mse,
            "auc": self.test_auc,
            "runtime_s": self.runtime_s,
            "program_text": self.program,
        }

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)


@dataclass
class RunResult:
    record: RunRecord
    weights: WeightSet
    clauses: list
    problem: ILPProblem
    test_labels: list


def default_train_config(task: str, seed: int = 0, **overrides) -> TrainConfig:
    td = TASKS[task]
    base = dict(m=td.m, steps=td.steps, seed=seed)
    base.update(overrides)
    return TrainConfig(**base)


def default_beam_config(task: str, **overrides) -> BeamConfig:
    td = TASKS[task]
    base = dict(beam_size=td.beam_size, beam_steps=td.beam_steps)
    base.update(overrides)
    return BeamConfig(**base)


def run_problem(
    problem: ILPProblem,
    train_cfg: TrainConfig,
    beam_cfg: BeamConfig,
    refine_cfg: RefinementConfig = RefinementConfig(),
    noise: float = 0.0,
    split_frac: float = 0.7,
    naive_n: Optional[int] = None,
    clause_cap: Optional[int] = None,
    proof_depth: Optional[int] = None,
    loss_sample_every: int = 50,
) -> RunResult:
    """Full pipeline on one problem.

    The split and noise injection reuse the training seed; clause scoring,
    grounding, and inference all share the same chaining horizon.  Test atoms
    never influence clause generation or training; evaluation rebuilds the
    grounding with them as extra seeds.  ``naive_n`` switches to unscored
    clause generation; ``clause_cap`` instead keeps the beam but stops it at
    the given clause budget.
    """
    t0 = time.perf_counter()
    seed = train_cfg.seed
    train_problem, test_labels = split(problem, split_frac, seed)
    if noise:
        train_problem = inject_noise(train_problem, noise, seed)

    # clause scoring defaults to the same horizon the differentiable
    # inference uses
    proof_cfg = ProofConfig(max_depth=proof_depth or train_cfg.steps)
    if naive_n is not None:
        clauses = naive_generate(
            list(problem.initial_clauses), train_problem, naive_n, refine_cfg
        )
    else:
        clauses = beam_search(
            list(problem.initial_clauses), train_problem, beam_cfg, refine_cfg,
            proof_cfg, max_clauses=clause_cap,
        )

    ctx = ground_context(train_problem, clauses, train_cfg.steps)
    weights, history = train(train_problem, clauses, ctx, train_cfg)

    v0 = convert_background(train_problem.background, ctx.atoms)
    train_atoms = [a for a, _ in make_labels(train_problem)]
    train_y = [y for _, y in make_labels(train_problem)]
    train_scores = predictions(
        train_atoms, ctx, v0, weights, train_cfg.steps, train_cfg.gamma
    )
    train_m = metrics(train_scores, train_y)

    test_m = {"auc": float("nan"), "mse": float("nan")}
    if test_labels:
        test_m = evaluate(
            train_problem, clauses, weights, test_labels, train_cfg.steps, train_cfg.gamma
        )

    program = extract_program(weights, clauses)
    lang = problem.language
    record = RunRecord(
        task=problem.name or "custom",
        seed=seed,
        config={
            "m": train_cfg.m,
            "steps": train_cfg.steps,
            "gamma": train_cfg.gamma,
            "lr": train_cfg.lr,
            "epochs": train_cfg.epochs,
            "batch_frac": train_cfg.batch_frac,
            "weight_mode": train_cfg.weight_mode,
            "beam_size": beam_cfg.beam_size,
            "beam_steps": beam_cfg.beam_steps,
            "prune_zero": beam_cfg.prune_zero,
            "n_body": refine_cfg.n_body,
            "n_nest": refine_cfg.n_nest,
            "noise": noise,
            "split_frac": split_frac,
            "naive_n": naive_n,
        },
        dataset_hash=problem_hash(problem),
        n_clauses=len(clauses),
        n_atoms=len(ctx),
        param_count=weights.param_count,
        loss_samples=[
            [i, history[i]]
            for i in range(0, len(history), max(1, loss_sample_every))
        ]
        + ([[len(history) - 1, history[-1]]] if history else []),
        train_mse=train_m["mse"],
        test_mse=test_m["mse"],
        train_auc=train_m["auc"],
        test_auc=test_m["auc"],
        runtime_s=time.perf_counter() - t0,
        program=[print_clause(c, lang) for c in program],
    )
    log.info("run %s", json.dumps(record.summary()))
    return RunResult(record, weights, list(clauses), problem, test_labels)


def evaluate(
    train_problem: ILPProblem,
    clauses: Sequence[Clause],
    weights: WeightSet,
    test_labels: Sequence,
    steps: int,
    gamma: float,
) -> dict:
    """Metrics on held-out atoms; the grounding is rebuilt with them as extra
    seeds so every test atom has a valuation."""
    atoms = [a for a, _ in test_labels]
    ys = [y for _, y in test_labels]
    ctx = ground_context(train_problem, clauses, steps, extra_seeds=atoms)
    v0 = convert_background(train_problem.background, ctx.atoms)
    scores = predictions(atoms, ctx, v0, weights, steps, gamma)
    return metrics(scores, ys)


# ---------------------------------------------------------------------------
# Weight persistence
# ---------------------------------------------------------------------------

def save_weights(path, result: RunResult) -> None:
    lang = result.problem.language
    payload = {
        "mode": result.weights.mode,
        "w": result.weights.w.tolist(),
        "clauses": [print_clause(c, lang) for c in result.clauses],
        "steps": result.record.config["steps"],
        "gamma": result.record.config["gamma"],
        "split_frac": result.record.config["split_frac"],
        "noise": result.record.config["noise"],
        "seed": result.record.seed,
    }
    Path(path).write_text(json.dumps(payload), encoding="utf-8")


def load_weights(path, problem: ILPProblem):
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    weights = WeightSet(payload["mode"], np.array(payload["w"], dtype=np.float64))
    clauses = [parse_clause(t, problem.language) for t in payload["clauses"]]
    return weights, clauses, payload


def evaluate_saved(problem: ILPProblem, weights_path) -> dict:
    """Recreate the recorded split and recompute held-out metrics."""
    weights, clauses, payload = load_weights(weights_path, problem)
    train_problem, test_labels = split(problem, payload["split_frac"], payload["seed"])
    if payload["noise"]:
        train_problem = inject_noise(train_problem, payload["noise"], payload["seed"])
    return evaluate(
        train_problem, clauses, weights, test_labels, payload["steps"], payload["gamma"]
    )


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

def sweep(
    task: str,
    axis: str,
    values: Sequence[float],
    seeds: Sequence[int],
    n_per_class: int = 50,
    method: str = "naive",
    **config_overrides,
) -> list[tuple[float, int, float]]:
    """Grid of runs: noise sweeps report test MSE, clause-count sweeps report
    test AUC.  On the clause-count axis ``method`` selects unscored generation
    ("naive") or the budget-capped beam ("beam").  Rows come back sorted by
    (axis value, seed)."""
    if axis not in ("noise", "nclause"):
        raise ValueError("axis must be 'noise' or 'nclause'")
    if method not in ("naive", "beam"):
        raise ValueError("method must be 'naive' or 'beam'")
    if not seeds:
        raise ValueError("at least one seed is required")
    rows = []
    for value in values:
        for seed in seeds:
            problem = generate(TaskSpec(task, n_per_class=n_per_class, seed=seed))
            tc = default_train_config(task, seed=seed, **config_overrides)
            bc = default_beam_config(task)
            if axis == "noise":
                res = run_problem(problem, tc, bc, noise=float(value))
                rows.append((float(value), seed, res.record.test_mse))
            else:
                kw = (
                    {"naive_n": int(value)}
                    if method == "naive"
                    else {"clause_cap": int(value)}
                )
                res = run_problem(problem, tc, bc, **kw)
                rows.append((float(value), seed, res.record.test_auc))
    rows.sort(key=lambda r: (r[0], r[1]))
    return rows
