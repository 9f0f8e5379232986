"""First-order syntax with function symbols: terms, atoms, clauses, unification.

Everything here is an immutable value with a cached hash, so instances are
safe to share across workers and usable as dict keys in the hot paths
(grounding, memoized proving).
"""
from __future__ import annotations

from itertools import permutations
from typing import Iterable, Iterator, Optional, Union

# Canonical variable alphabet used for alpha-renaming.  The leading names
# match the fixed pool used by the benchmark tasks; overflow names only
# appear for clauses with more than six variables.
CANON_VARS = ("x", "y", "z", "v", "w", "u")


class Term:
    """Base class for constants, variables, and compound terms."""

    __slots__ = ()


class Const(Term):
    __slots__ = ("name", "_hash")

    def __init__(self, name: str):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "_hash", hash(("c", name)))

    def __setattr__(self, *a):
        raise AttributeError("Const is immutable")

    def __eq__(self, other):
        return type(other) is Const and other.name == self.name

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return self.name


class Var(Term):
    __slots__ = ("name", "_hash")

    def __init__(self, name: str):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "_hash", hash(("v", name)))

    def __setattr__(self, *a):
        raise AttributeError("Var is immutable")

    def __eq__(self, other):
        return type(other) is Var and other.name == self.name

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return self.name


class Func(Term):
    """Application of a function symbol to argument terms (arity >= 1)."""

    __slots__ = ("name", "args", "_hash")

    def __init__(self, name: str, args: Iterable[Term]):
        args = tuple(args)
        if not args:
            raise ValueError("function symbols have arity >= 1")
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "args", args)
        object.__setattr__(self, "_hash", hash(("f", name, args)))

    def __setattr__(self, *a):
        raise AttributeError("Func is immutable")

    @property
    def arity(self) -> int:
        return len(self.args)

    def __eq__(self, other):
        return (
            type(other) is Func
            and other._hash == self._hash
            and other.name == self.name
            and other.args == self.args
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"{self.name}({','.join(map(repr, self.args))})"


class Atom:
    """Predicate applied to terms.  ``true``/``false`` are reserved nullary atoms."""

    __slots__ = ("pred", "args", "_hash")

    def __init__(self, pred: str, args: Iterable[Term] = ()):
        args = tuple(args)
        object.__setattr__(self, "pred", pred)
        object.__setattr__(self, "args", args)
        object.__setattr__(self, "_hash", hash(("a", pred, args)))

    def __setattr__(self, *a):
        raise AttributeError("Atom is immutable")

    @property
    def arity(self) -> int:
        return len(self.args)

    def __eq__(self, other):
        return (
            type(other) is Atom
            and other._hash == self._hash
            and other.pred == self.pred
            and other.args == self.args
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if not self.args:
            return self.pred
        return f"{self.pred}({','.join(map(repr, self.args))})"


TRUE = Atom("true")
FALSE = Atom("false")
RESERVED_PREDS = frozenset({"true", "false"})


class Clause:
    """Definite clause ``head :- body``; a fact pattern when the body is empty."""

    __slots__ = ("head", "body", "_hash")

    def __init__(self, head: Atom, body: Iterable[Atom] = ()):
        body = tuple(body)
        object.__setattr__(self, "head", head)
        object.__setattr__(self, "body", body)
        object.__setattr__(self, "_hash", hash(("cl", head, body)))

    def __setattr__(self, *a):
        raise AttributeError("Clause is immutable")

    def __eq__(self, other):
        return (
            type(other) is Clause
            and other._hash == self._hash
            and other.head == self.head
            and other.body == self.body
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if not self.body:
            return repr(self.head)
        return f"{self.head!r} :- {', '.join(map(repr, self.body))}"


Expr = Union[Term, Atom, Clause]
Subst = dict  # Var -> Term


class Language:
    """Vocabulary: predicates, function symbols, constants, and an ordered
    finite variable pool."""

    __slots__ = ("predicates", "functions", "constants", "variables")

    def __init__(
        self,
        predicates: Iterable[tuple[str, int]] = (),
        functions: Iterable[tuple[str, int]] = (),
        constants: Iterable[str] = (),
        variables: Iterable[str] = ("x", "y", "z", "v", "w"),
    ):
        self.predicates = tuple(predicates)
        self.functions = tuple(functions)
        self.constants = tuple(constants)
        self.variables = tuple(variables)
        for cat, names in (
            ("predicate", [p for p, _ in self.predicates]),
            ("function", [f for f, _ in self.functions]),
            ("constant", list(self.constants)),
            ("variable", list(self.variables)),
        ):
            if len(names) != len(set(names)):
                raise ValueError(f"duplicate {cat} names")
        bad = RESERVED_PREDS & {p for p, _ in self.predicates}
        if bad:
            raise ValueError(f"reserved predicate names: {sorted(bad)}")

    def pred_arity(self, name: str) -> Optional[int]:
        for p, n in self.predicates:
            if p == name:
                return n
        return None

    def func_arity(self, name: str) -> Optional[int]:
        for f, n in self.functions:
            if f == name:
                return n
        return None

    def is_constant(self, name: str) -> bool:
        return name in self.constants

    def is_variable(self, name: str) -> bool:
        return name in self.variables

    @property
    def has_list_sugar(self) -> bool:
        return self.func_arity("f") == 2 and "*" in self.constants

    def __repr__(self):
        return (
            f"Language(preds={self.predicates}, funcs={self.functions}, "
            f"consts={self.constants}, vars={self.variables})"
        )


# ---------------------------------------------------------------------------
# Structural queries
# ---------------------------------------------------------------------------

def term_vars(t: Term, acc: Optional[list] = None) -> list[Var]:
    """Variables of a term in first-occurrence order."""
    if acc is None:
        acc = []
    if type(t) is Var:
        if t not in acc:
            acc.append(t)
    elif type(t) is Func:
        for a in t.args:
            term_vars(a, acc)
    return acc


def atom_vars(a: Atom, acc: Optional[list] = None) -> list[Var]:
    if acc is None:
        acc = []
    for t in a.args:
        term_vars(t, acc)
    return acc


def clause_vars(c: Clause) -> list[Var]:
    """V(C) in first-occurrence order, head first."""
    acc: list[Var] = []
    atom_vars(c.head, acc)
    for b in c.body:
        atom_vars(b, acc)
    return acc


def is_ground_term(t: Term) -> bool:
    if type(t) is Var:
        return False
    if type(t) is Func:
        return all(is_ground_term(a) for a in t.args)
    return True


def is_ground(a: Atom) -> bool:
    return all(is_ground_term(t) for t in a.args)


def nest_depth_term(t: Term) -> int:
    if type(t) is Func:
        return 1 + max(nest_depth_term(a) for a in t.args)
    return 0


def nest_depth(e: Expr) -> int:
    """Maximum function-nesting depth of any term in the expression."""
    if isinstance(e, Term):
        return nest_depth_term(e)
    if isinstance(e, Atom):
        return max((nest_depth_term(t) for t in e.args), default=0)
    d = nest_depth(e.head)
    for b in e.body:
        d = max(d, nest_depth(b))
    return d


def distinct_var_tuples(c: Clause, n: int) -> list[tuple[Var, ...]]:
    """All ordered n-tuples of pairwise-distinct variables of ``c``.

    Tuples come out in the deterministic order induced by first occurrence.
    Empty when the clause has fewer than ``n`` variables.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return list(permutations(clause_vars(c), n))


# ---------------------------------------------------------------------------
# Substitution and unification
# ---------------------------------------------------------------------------

def apply_subst(e: Expr, theta: Subst) -> Expr:
    """Simultaneously replace every bound variable in ``e``."""
    if type(e) is Var:
        return theta.get(e, e)
    if type(e) is Const:
        return e
    if type(e) is Func:
        return Func(e.name, tuple(apply_subst(a, theta) for a in e.args))
    if type(e) is Atom:
        if not e.args:
            return e
        return Atom(e.pred, tuple(apply_subst(t, theta) for t in e.args))
    return Clause(
        apply_subst(e.head, theta),
        tuple(apply_subst(b, theta) for b in e.body),
    )


def compose(theta: Subst, sigma: Subst) -> Subst:
    """Substitution composition: applying the result equals theta then sigma."""
    out = {v: apply_subst(t, sigma) for v, t in theta.items()}
    for v, t in sigma.items():
        if v not in out:
            out[v] = t
    return out


def occurs_in(v: Var, t: Term) -> bool:
    if type(t) is Var:
        return t == v
    if type(t) is Func:
        return any(occurs_in(v, a) for a in t.args)
    return False


def _unify_terms(a: Term, b: Term, theta: Subst) -> Optional[Subst]:
    a = apply_subst(a, theta)
    b = apply_subst(b, theta)
    if a == b:
        return theta
    if type(a) is Var:
        if occurs_in(a, b):
            return None
        return compose(theta, {a: b})
    if type(b) is Var:
        if occurs_in(b, a):
            return None
        return compose(theta, {b: a})
    if type(a) is Func and type(b) is Func:
        if a.name != b.name or len(a.args) != len(b.args):
            return None
        for x, y in zip(a.args, b.args):
            theta = _unify_terms(x, y, theta)
            if theta is None:
                return None
        return theta
    return None


def unify(a: Atom, b: Atom) -> Optional[Subst]:
    """Most general unifier of two atoms, or None when not unifiable.

    Occurs check is on.  When a variable of ``a`` meets a variable of ``b``,
    the variable of ``a`` becomes the key, so binding order is deterministic.
    """
    if a.pred != b.pred or len(a.args) != len(b.args):
        return None
    theta: Subst = {}
    for x, y in zip(a.args, b.args):
        theta = _unify_terms(x, y, theta)
        if theta is None:
            return None
    return theta


def match(pattern: Atom, ground: Atom) -> Optional[Subst]:
    """One-way matching: substitution on pattern variables only.

    Assumes ``ground`` shares no variables with ``pattern`` (true for ground
    atoms); in that case unify degenerates to matching.
    """
    return unify(pattern, ground)


# ---------------------------------------------------------------------------
# Canonical forms and ordering
# ---------------------------------------------------------------------------

def _canon_name(i: int) -> str:
    if i < len(CANON_VARS):
        return CANON_VARS[i]
    return f"v{i + 1}"


def canonical(c: Clause) -> Clause:
    """Rename variables by first occurrence (head first, left to right).

    Two clauses are alpha-equivalent iff their canonical forms are equal.
    """
    ren = {v: Var(_canon_name(i)) for i, v in enumerate(clause_vars(c))}
    return apply_subst(c, ren)


def canonical_text(c: Clause) -> str:
    """Deterministic textual key; lexicographic order on these strings is the
    total order used wherever an ordered set of clauses is required."""
    return repr(canonical(c))


def canonical_in(c: Clause, variables: Iterable[str]) -> Clause:
    """Alpha-rename by first occurrence into the given variable pool, so the
    result stays inside the language the clause was built from."""
    pool = list(variables)
    vs = clause_vars(c)
    ren = {}
    for i, v in enumerate(vs):
        ren[v] = Var(pool[i]) if i < len(pool) else Var(_canon_name(i))
    return apply_subst(c, ren)


def alpha_equal(a: Clause, b: Clause) -> bool:
    return canonical(a) == canonical(b)


def rename_apart(c: Clause, taken: Iterable[str]) -> Clause:
    """Standardize a clause apart from the given variable names."""
    taken = set(taken)
    ren: Subst = {}
    i = 0
    for v in clause_vars(c):
        if v.name in taken:
            while True:
                cand = f"_r{i}"
                i += 1
                if cand not in taken:
                    break
            ren[v] = Var(cand)
            taken.add(cand)
    return apply_subst(c, ren) if ren else c


def subsumes(general: Clause, specific: Clause) -> bool:
    """True when some substitution maps general's head onto specific's head
    and general's body into specific's body (theta-subsumption)."""
    g = rename_apart(general, {v.name for v in clause_vars(specific)})

    def extend(theta: Subst, goals: tuple[Atom, ...]) -> bool:
        if not goals:
            return True
        first = apply_subst(goals[0], theta)
        for cand in specific.body:
            sigma = unify(first, cand)
            if sigma is not None and _pattern_only(sigma, specific):
                if extend(compose(theta, sigma), goals[1:]):
                    return True
        return False

    theta = unify(g.head, specific.head)
    if theta is None or not _pattern_only(theta, specific):
        return False
    return extend(theta, g.body)


def _pattern_only(theta: Subst, specific: Clause) -> bool:
    # subsumption must instantiate the general clause, never the specific one
    svars = set(clause_vars(specific))
    return all(v not in svars for v in theta)


def iter_subterms(t: Term) -> Iterator[Term]:
    yield t
    if type(t) is Func:
        for a in t.args:
            yield from iter_subterms(a)
