import pytest

from softlog.logic import canonical
from softlog.parser import parse_atom, parse_clause
from softlog.problem import ILPProblem
from softlog.prover import ProofConfig
from softlog.search import BeamConfig, beam_search, naive_generate


@pytest.fixture
def worked_problem(pq_lang):
    def A(t):
        return parse_atom(t, pq_lang)

    return ILPProblem(
        pos=(A("p(a,a)"), A("p(b,b)"), A("p(b,c)"), A("p(c,b)")),
        neg=(A("p(a,b)"), A("p(b,a)")),
        background=(A("q(b,c)"), A("q(c,b)")),
        language=pq_lang,
        initial_clauses=(parse_clause("p(x,y)", pq_lang),),
    )


def canon_set(clauses):
    return {canonical(c) for c in clauses}


class TestBeamSearch:
    def test_worked_beam_content(self, pq_lang, worked_problem):
        got = beam_search(
            list(worked_problem.initial_clauses),
            worked_problem,
            BeamConfig(beam_size=2, beam_steps=2),
            proof_cfg=ProofConfig(2),
        )
        expect = {
            canonical(parse_clause(t, pq_lang))
            for t in ("p(x,y)", "p(x,x)", "p(x,y) :- q(x,y)")
        }
        assert expect <= canon_set(got)

    def test_zero_score_clause_not_opened(self, pq_lang, worked_problem):
        # the function-headed refinement entails nothing and is discarded
        got = beam_search(
            list(worked_problem.initial_clauses),
            worked_problem,
            BeamConfig(beam_size=2, beam_steps=2),
            proof_cfg=ProofConfig(2),
        )
        assert canonical(parse_clause("p(f(x),y)", pq_lang)) not in canon_set(got)

    def test_single_step_returns_initials(self, pq_lang, worked_problem):
        got = beam_search(
            list(worked_problem.initial_clauses),
            worked_problem,
            BeamConfig(beam_size=5, beam_steps=1),
            proof_cfg=ProofConfig(2),
        )
        assert canon_set(got) == canon_set(worked_problem.initial_clauses)

    def test_deterministic(self, worked_problem):
        cfg = BeamConfig(beam_size=3, beam_steps=3)
        runs = [
            beam_search(list(worked_problem.initial_clauses), worked_problem, cfg,
                        proof_cfg=ProofConfig(2))
            for _ in range(2)
        ]
        assert runs[0] == runs[1]

    def test_no_duplicates_and_size_bound(self, worked_problem):
        cfg = BeamConfig(beam_size=3, beam_steps=3)
        got = beam_search(
            list(worked_problem.initial_clauses), worked_problem, cfg,
            proof_cfg=ProofConfig(2),
        )
        assert len(got) == len(canon_set(got))
        # opened clauses: initials plus at most beam_size per step
        assert len(got) <= 1 + cfg.beam_size * cfg.beam_steps

    def test_prune_zero_off_keeps_zero_scores(self, pq_lang, worked_problem):
        got = beam_search(
            list(worked_problem.initial_clauses),
            worked_problem,
            BeamConfig(beam_size=30, beam_steps=2, prune_zero=False),
            proof_cfg=ProofConfig(2),
        )
        zero_scored = canonical(parse_clause("p(f(x),y)", pq_lang))
        assert zero_scored in canon_set(got)

    def test_requires_initial(self, worked_problem):
        with pytest.raises(ValueError):
            beam_search([], worked_problem, BeamConfig())

    def test_reachability(self, pq_lang, worked_problem):
        # every returned clause is within beam_steps refinements of the seed
        from softlog.refine import refine

        cfg = BeamConfig(beam_size=3, beam_steps=2)
        got = beam_search(list(worked_problem.initial_clauses), worked_problem, cfg,
                          proof_cfg=ProofConfig(2))
        frontier = canon_set(worked_problem.initial_clauses)
        reachable = set(frontier)
        layer = list(worked_problem.initial_clauses)
        for _ in range(cfg.beam_steps):
            nxt = []
            for c in layer:
                for r in refine(c, pq_lang, base_nest=0):
                    if canonical(r) not in reachable:
                        reachable.add(canonical(r))
                        nxt.append(r)
            layer = nxt
        assert canon_set(got) <= reachable


class TestNaiveGenerate:
    def test_first_clause_only(self, worked_problem):
        got = naive_generate(list(worked_problem.initial_clauses), worked_problem, 1)
        assert len(got) == 1
        assert canonical(got[0]) == canonical(worked_problem.initial_clauses[0])

    def test_count_and_distinctness(self, worked_problem):
        got = naive_generate(list(worked_problem.initial_clauses), worked_problem, 10)
        assert len(got) == 10
        assert len(canon_set(got)) == 10

    def test_seed_membership_agrees_with_beam(self, worked_problem):
        naive = naive_generate(list(worked_problem.initial_clauses), worked_problem, 5)
        beam = beam_search(
            list(worked_problem.initial_clauses), worked_problem,
            BeamConfig(beam_size=2, beam_steps=2), proof_cfg=ProofConfig(2),
        )
        seed = canonical(worked_problem.initial_clauses[0])
        assert seed in canon_set(naive) and seed in canon_set(beam)

    def test_rejects_bad_count(self, worked_problem):
        with pytest.raises(ValueError):
            naive_generate(list(worked_problem.initial_clauses), worked_problem, 0)
