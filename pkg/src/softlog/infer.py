"""Differentiable forward chaining over the index tensor.

One inference step gathers current valuations at the subgoal indexes, takes
the product over each clause body (soft conjunction), mixes clause outputs
under softmax weights, combines the mixtures with a smooth maximum (soft
disjunction), and amalgamates with the previous valuation.  All arithmetic is
float64 and every log-sum-exp is max-shifted: the naive smooth-or computes
exp(x / gamma) with gamma around 1e-5, which overflows instantly, so the
stable form is not optional here.

Gradients are exact reverse-mode.  Only the valuation sequence is recorded;
each step's intermediates are recomputed during the backward sweep, which
keeps memory flat in the pairwise-weight mode where the step tensor has shape
(clauses, clauses, atoms).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

MULTI = "multi"
PAIR = "pair"


# ---------------------------------------------------------------------------
# Elementary operations
# ---------------------------------------------------------------------------

def gather(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Indexed read: out[j, k] = a[b[j, k]].  Gradient scatters additively."""
    return a[b]


def softor(xs: np.ndarray, gamma: float, axis: int = 0) -> np.ndarray:
    """Smooth maximum gamma * log(sum(exp(x / gamma))) in max-shifted form.

    With a single argument along the axis this returns the input exactly
    (log of one exponential of zero).
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    xs = np.asarray(xs, dtype=np.float64)
    m = xs.max(axis=axis, keepdims=True)
    s = np.exp((xs - m) / gamma).sum(axis=axis, keepdims=True)
    return np.squeeze(m + gamma * np.log(s), axis=axis)


def _softor_coef(xs: np.ndarray, gamma: float, axis: int = 0) -> np.ndarray:
    """Jacobian coefficients of softor: softmax of x / gamma along the axis."""
    m = xs.max(axis=axis, keepdims=True)
    e = np.exp((xs - m) / gamma)
    return e / e.sum(axis=axis, keepdims=True)


def softmax(w: np.ndarray, axis=None) -> np.ndarray:
    w = np.asarray(w, dtype=np.float64)
    m = w.max(axis=axis, keepdims=True)
    e = np.exp(w - m)
    return e / e.sum(axis=axis, keepdims=True)


def clause_outputs(x: np.ndarray, v: np.ndarray) -> np.ndarray:
    """All clause functions at once: row i is the soft conjunction of clause
    i's gathered subgoal valuations."""
    return gather(v, x).prod(axis=2)


def clause_fn(i: int, x: np.ndarray, v: np.ndarray) -> np.ndarray:
    return clause_outputs(x[i : i + 1], v)[0]


def weighted_sum(omega_l: np.ndarray, cm: np.ndarray) -> np.ndarray:
    """Convex combination of clause outputs under one softmax row."""
    return omega_l @ cm


def _prod_except(gv: np.ndarray) -> np.ndarray:
    """prod over the last axis excluding each position, division-free so zero
    entries keep exact gradients."""
    b = gv.shape[-1]
    if b == 1:
        return np.ones_like(gv)
    ones = np.ones_like(gv[..., :1])
    left = np.concatenate([ones, np.cumprod(gv, axis=-1)[..., :-1]], axis=-1)
    rev = np.cumprod(gv[..., ::-1], axis=-1)[..., ::-1]
    right = np.concatenate([rev[..., 1:], ones], axis=-1)
    return left * right


# ---------------------------------------------------------------------------
# Weights
# ---------------------------------------------------------------------------

@dataclass
class WeightSet:
    """Clause weights: ``multi`` holds one weight vector per program slot,
    ``pair`` holds a single matrix over clause pairs."""

    mode: str
    w: np.ndarray

    @classmethod
    def random(
        cls,
        m: int,
        n_clauses: int,
        seed: int,
        mode: str = MULTI,
        scale: float = 0.1,
    ) -> "WeightSet":
        rng = np.random.default_rng(seed)
        shape = (m, n_clauses) if mode == MULTI else (n_clauses, n_clauses)
        return cls(mode, scale * rng.standard_normal(shape))

    @classmethod
    def one_hot(
        cls,
        slots: Sequence,
        n_clauses: int,
        mode: str = MULTI,
        logit: float = 200.0,
    ) -> "WeightSet":
        """Near-delta weights selecting the given clause index per slot (multi)
        or the given (i, j) pairs (pair)."""
        if mode == MULTI:
            w = np.zeros((len(slots), n_clauses))
            for l, i in enumerate(slots):
                w[l, i] = logit
        else:
            w = np.zeros((n_clauses, n_clauses))
            for i, j in slots:
                w[i, j] = logit
        return cls(mode, w)

    @property
    def n_clauses(self) -> int:
        return self.w.shape[1]

    @property
    def param_count(self) -> int:
        return self.w.size

    def distribution(self) -> np.ndarray:
        """Softmax over clauses per slot (multi) or over all pairs (pair)."""
        if self.mode == MULTI:
            return softmax(self.w, axis=1)
        return softmax(self.w.ravel()).reshape(self.w.shape)


# ---------------------------------------------------------------------------
# Forward / backward
# ---------------------------------------------------------------------------

@dataclass
class Tape:
    x: np.ndarray
    weights: WeightSet
    gamma: float
    clamp: bool
    valuations: list  # v_0 .. v_T


def _step(
    v: np.ndarray, x: np.ndarray, dist: np.ndarray, mode: str, gamma: float
) -> np.ndarray:
    cm = clause_outputs(x, v)
    if mode == MULTI:
        h = dist @ cm
        r = softor(h, gamma, axis=0)
    else:
        a = cm[:, None, :]
        b = cm[None, :, :]
        m = np.maximum(a, b)
        s = m + gamma * np.log(np.exp((a - m) / gamma) + np.exp((b - m) / gamma))
        r = np.tensordot(dist, s, axes=([0, 1], [0, 1]))
    return softor(np.stack([v, r]), gamma, axis=0)


def infer(
    x: np.ndarray,
    v0: np.ndarray,
    weights: WeightSet,
    steps: int,
    gamma: float = 1e-5,
    clamp: bool = False,
    record: bool = False,
):
    """Run ``steps`` rounds of differentiable forward chaining.

    Returns the final valuation, or (valuation, tape) when ``record`` so the
    caller can run :func:`backward`.
    """
    v = np.asarray(v0, dtype=np.float64)
    dist = weights.distribution()
    vals = [v]
    for _ in range(steps):
        v = _step(v, x, dist, weights.mode, gamma)
        if clamp:
            v = np.minimum(v, 1.0)
        vals.append(v)
    if record:
        return v, Tape(x, weights, gamma, clamp, vals)
    return v


def backward(tape: Tape, grad_out: np.ndarray) -> np.ndarray:
    """Reverse-mode gradient of sum(grad_out * v_T) w.r.t. the weights."""
    x = tape.x
    gamma = tape.gamma
    mode = tape.weights.mode
    dist = tape.weights.distribution()
    g_dist = np.zeros_like(dist)
    g = np.asarray(grad_out, dtype=np.float64).copy()

    for t in range(len(tape.valuations) - 2, -1, -1):
        v = tape.valuations[t]
        gv = gather(v, x)
        cm = gv.prod(axis=2)
        if mode == MULTI:
            h = dist @ cm
            r = softor(h, gamma, axis=0)
        else:
            a = cm[:, None, :]
            b = cm[None, :, :]
            m = np.maximum(a, b)
            ea = np.exp((a - m) / gamma)
            eb = np.exp((b - m) / gamma)
            s = m + gamma * np.log(ea + eb)
            r = np.tensordot(dist, s, axes=([0, 1], [0, 1]))
        if tape.clamp:
            v_next_raw = softor(np.stack([v, r]), gamma, axis=0)
            g = g * (v_next_raw <= 1.0)

        # v_next = softor(v, r)
        pair_coef = _softor_coef(np.stack([v, r]), gamma, axis=0)
        g_v = g * pair_coef[0]
        g_r = g * pair_coef[1]

        if mode == MULTI:
            q = _softor_coef(h, gamma, axis=0)  # (m, G)
            g_h = q * g_r[None, :]
            g_dist += g_h @ cm.T
            g_cm = dist.T @ g_h
        else:
            g_dist += np.tensordot(s, g_r, axes=([2], [0]))
            g_s = dist[:, :, None] * g_r[None, None, :]
            denom = ea + eb
            g_cm = (g_s * (ea / denom)).sum(axis=1) + (g_s * (eb / denom)).sum(axis=0)

        g_gv = g_cm[:, :, None] * _prod_except(gv)
        np.add.at(g_v, x.ravel(), g_gv.ravel())
        g = g_v

    # through softmax: J^T u = p * (u - <u, p>) per distribution
    w = tape.weights.w
    if mode == MULTI:
        inner = (g_dist * dist).sum(axis=1, keepdims=True)
        return dist * (g_dist - inner)
    inner = (g_dist * dist).sum()
    return (dist * (g_dist - inner)).reshape(w.shape)
