"""Ground-atom enumeration and the index tensor that drives inference.

Starting from the examples and background facts, backward chaining collects
exactly the ground atoms a T-step inference can touch; the Herbrand base
itself is infinite here because of the successor function.  The index tensor
then records, per clause and derivable atom, which subgoal valuations to
multiply.

Run: python demos/03_grounding_and_tensor.py
"""
from softlog import ILPProblem, Language, enumerate_atoms, parse_atom, parse_clause
from softlog.grounding import build_index_tensor, convert_background
from softlog.parser import print_atom, print_clause

lang = Language(
    predicates=[("e", 1)],
    functions=[("s", 1)],
    constants=["0"],
    variables=["x", "y", "z", "v", "w"],
)
A = lambda t: parse_atom(t, lang)

problem = ILPProblem(
    pos=(A("e(s(s(s(s(s(s(0)))))))"),),   # e(6): an even number
    neg=(A("e(s(0))"),),                  # e(1): not even
    background=(A("e(0)"),),
    language=lang,
    initial_clauses=(),
)
fact = parse_clause("e(x)", lang)
step = parse_clause("e(s(s(x))) :- e(x)", lang)

print("== enumeration collects only reachable atoms ==")
atoms = enumerate_atoms(problem, [step], steps=2)
for j, a in enumerate(atoms):
    print(f"  {j}: {print_atom(a, lang)}")
print("note: e(s^3(0)) and e(s^5(0)) never appear; no derivation touches them")

print("\n== index tensor over a fixed atom ordering ==")
atoms = atoms[:2] + sorted(atoms[2:], key=lambda a: len(repr(a)))[:4]
X = build_index_tensor([fact, step], atoms)
header = "  ".join(f"{print_atom(a, lang):>10s}" for a in atoms)
print(" " * 12 + header)
for i, c in enumerate((fact, step)):
    row = "  ".join(f"{X[i, j].tolist()!s:>10s}" for j in range(len(atoms)))
    print(f"{print_clause(c, lang):>10s}  {row}")
print("row 1, column e(s^2(0)) holds [2]: its subgoal e(0) sits at index 2")

print("\n== background compiles to the initial valuation ==")
v0 = convert_background(problem.background, atoms)
print("v0 =", v0.tolist())
