import itertools
import random

import pytest

from strfp.core import Alphabet, Partition, fingerprint, round_robin_partition
from strfp.errors import GuardError
from strfp.optimizer import (TrainingInstance, exact_solve, fpr, gram_tiebreak, local_search,
                             objective, restricted_growth_strings)

from conftest import brute_force_best, random_instance


def _ab_cd(alphabet=Alphabet(b"abcd")):
    return Partition.from_assignment(alphabet, 2, {97: 0, 98: 0, 99: 1, 100: 1})


def test_negative_pairs(four_letter):
    assert four_letter.negative_pairs == [(0, 1), (1, 0)]
    inst = TrainingInstance.build([b"abc", b"cd", b"x"], [b"c", b"bc", b"zz"], 3)
    expected = 3 * 3 - sum(len(m) for m in inst.matches)
    assert inst.n_negatives == expected == 6


def test_objective_examples(four_letter):
    assert objective(_ab_cd(), four_letter) == (2, 2)
    rr = round_robin_partition(Alphabet(b"abcd"), 2)
    assert objective(rr, four_letter) == (0, 2)
    assert fpr(0, 2) == 1.0 and fpr(2, 2) == 0.0


def test_objective_empty_queries():
    inst = TrainingInstance.build([b"ab"], [], 2, Alphabet(b"ab"))
    assert objective(round_robin_partition(Alphabet(b"ab"), 2), inst) == (0, 0)
    assert fpr(0, 0) == 0.0


def test_objective_width_mismatch(four_letter):
    with pytest.raises(ValueError):
        objective(round_robin_partition(Alphabet(b"abcd"), 3), four_letter)


def test_objective_vs_naive():
    rng = random.Random(2)
    for _ in range(30):
        inst = random_instance(rng)
        p = Partition.from_assignment(inst.alphabet, inst.width,
                                      {b: rng.randrange(inst.width) for b in inst.alphabet})
        naive = sum(1 for q, w in inst.negative_pairs
                    if fingerprint(p, inst.queries[q]).bits & ~fingerprint(p, inst.words[w]).bits)
        assert objective(p, inst) == (naive, inst.n_negatives)


def _canonical_count(m, n):
    seen = set()
    for combo in itertools.product(range(n), repeat=m):
        relabel = {}
        seen.add(tuple(relabel.setdefault(c, len(relabel)) for c in combo))
    return len(seen)


@pytest.mark.parametrize("m,n", [(1, 1), (4, 2), (4, 4), (5, 3), (6, 2), (0, 3)])
def test_rgs_counts(m, n):
    rgs = [tuple(a) for a in restricted_growth_strings(m, n)]
    assert len(rgs) == len(set(rgs)) == _canonical_count(m, n)
    assert (m, n) != (4, 2) or len(rgs) == 8
    assert (m, n) != (4, 4) or len(rgs) == 15


def test_exact_four_letter(four_letter):
    p, trace = exact_solve(four_letter)
    assert objective(p, four_letter) == (2, 2)
    assert trace.status == "optimal" and trace.best == 2
    assert p.provenance == "exact"


def test_exact_single_bin():
    inst = TrainingInstance.build([b"ab", b"cd"], [b"a", b"c"], 1, Alphabet(b"abcd"))
    p, _ = exact_solve(inst)
    assert objective(p, inst) == (0, 2)


def test_exact_perfect_separation():
    inst = TrainingInstance.build([b"ab"], [b"c"], 3, Alphabet(b"abc"))
    p, _ = exact_solve(inst)
    assert objective(p, inst) == (1, 1)


def test_exact_guard():
    inst = TrainingInstance.build([b"ab"], [b"c"], 2, Alphabet(range(97, 97 + 15)))
    with pytest.raises(GuardError):
        exact_solve(inst)


def test_exact_vs_brute_force():
    rng = random.Random(11)
    for _ in range(10):
        inst = random_instance(rng, max_alpha=6)
        p, trace = exact_solve(inst)
        assert objective(p, inst)[0] == trace.best == brute_force_best(inst)


def test_exact_tie_first_found():
    inst = TrainingInstance.build([b"ab"], [b"c"], 2, Alphabet(b"abc"))
    p, trace = exact_solve(inst)
    # RGS order: 000, 001 -> c alone in bin 1 is the first optimum
    assert p.assignment() == {97: 0, 98: 0, 99: 1}
    assert len(trace.entries) == 2


def test_local_search_reaches_optimum(four_letter):
    rr = round_robin_partition(four_letter.alphabet, 2)
    p, trace = local_search(four_letter, time_limit=10, seed=0, init="round_robin", max_iters=1000)
    assert objective(p, four_letter)[0] == 2 == exact_solve(four_letter)[1].best
    assert trace.entries[0].objective == objective(rr, four_letter)[0] == 0
    assert trace.status == "optimal"


def test_local_search_from_optimum(four_letter):
    p, _ = local_search(four_letter, 10, seed=3, init=_ab_cd(), max_iters=200)
    assert objective(p, four_letter)[0] == 2


def test_local_search_zero_iterations(four_letter):
    rr = round_robin_partition(four_letter.alphabet, 2)
    p, trace = local_search(four_letter, 1e-9, init="round_robin", max_iters=0)
    assert p == rr
    assert trace.status in ("iteration_limit", "time_limit")
    with pytest.raises(ValueError):
        local_search(four_letter, 0)


def test_local_search_deterministic():
    rng = random.Random(4)
    for _ in range(5):
        inst = random_instance(rng)
        a, ta = local_search(inst, 60, seed=9, init="random", max_iters=300)
        b, tb = local_search(inst, 60, seed=9, init="random", max_iters=300)
        assert a == b
        assert [e.objective for e in ta.entries] == [e.objective for e in tb.entries]


def test_local_search_monotone_and_no_worse_than_init():
    rng = random.Random(6)
    for _ in range(10):
        inst = random_instance(rng)
        rr = round_robin_partition(inst.alphabet, inst.width)
        p, trace = local_search(inst, 60, seed=1, max_iters=400)
        objs = [e.objective for e in trace.entries]
        assert objs == sorted(objs)
        assert objective(p, inst)[0] == objs[-1] >= objective(rr, inst)[0]
        assert objs[-1] <= brute_force_best(inst)


def test_tiebreak_keeps_primary():
    rng = random.Random(8)
    for _ in range(5):
        inst = random_instance(rng)
        tb = gram_tiebreak(inst.words, inst.width, inst.alphabet)
        p, trace = local_search(inst, 60, seed=2, max_iters=400, tiebreak=tb)
        objs = [e.objective for e in trace.entries]
        assert objs == sorted(objs)
        assert objective(p, inst)[0] == objs[-1]


def test_solutions_have_no_false_negatives():
    rng = random.Random(12)
    for _ in range(10):
        inst = random_instance(rng)
        for p in (exact_solve(inst)[0], local_search(inst, 60, seed=0, max_iters=200)[0]):
            for qi, hits in enumerate(inst.matches):
                fq = fingerprint(p, inst.queries[qi]).bits
                for wi in hits:
                    assert fq & ~fingerprint(p, inst.words[wi]).bits == 0


def test_trace_csv(four_letter):
    import io

    _, trace = exact_solve(four_letter)
    buf = io.StringIO()
    trace.write_csv(buf, {"seed": 0})
    lines = buf.getvalue().splitlines()
    assert lines[0] == "# seed=0"
    assert lines[1] == "elapsed_s,objective,fpr"
    assert lines[-1].endswith(",2,0.000000")
