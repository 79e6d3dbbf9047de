"""Exit criteria. Each test prints one PASS/FAIL line (run with ``-s`` to see them)."""

import random
import time

import numpy as np
import pytest

from strfp import kernels
from strfp.cli import main
from strfp.core import Alphabet, Partition, fingerprint, is_candidate, render, round_robin_partition
from strfp.evaluation import bench_scan, build_column, evaluate
from strfp.optimizer import (TrainingInstance, build_mip, exact_solve, expected_counts,
                             gram_tiebreak, implied_values, import_solution, local_search, objective)
from strfp.workload import (bundled_words_path, generate_workload, load_corpus, sample_training,
                            split_workload)

from conftest import brute_force_best, random_instance
from lp_reader import read_lp, satisfied

try:
    import highspy
except ImportError:  # pragma: no cover
    highspy = None

BUDGET_S = 60.0


def report(criterion, ok, detail, elapsed=None, limit=None):
    timing = ""
    if elapsed is not None:
        timing = f" [{elapsed:.2f}s" + (f" / limit {limit:g}s]" if limit is not None else "]")
    print(f"\n{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}{timing}")
    assert ok, f"criterion {criterion} failed: {detail}"
    if limit is not None:
        assert elapsed < limit, f"criterion {criterion} exceeded {limit}s"


@pytest.fixture(scope="module")
def tiny_instances():
    rng = random.Random(2024)
    return [random_instance(rng) for _ in range(20)]


def test_c1_fig2_golden(fig2_partition):
    t = time.perf_counter()
    fp = {s: fingerprint(fig2_partition, s) for s in (b"nutella", b"utn", b"tone")}
    got = {s.decode(): render(f) for s, f in fp.items()}
    ok = (got == {"nutella": "1010", "utn": "1010", "tone": "0110"}
          and is_candidate(fp[b"utn"], fp[b"nutella"])
          and not is_candidate(fp[b"tone"], fp[b"nutella"]))
    report(1, ok, f"renders {got}", time.perf_counter() - t, 1)


def test_c2_no_false_negatives():
    t = time.perf_counter()
    rng = random.Random(99)
    trials = violations = 0
    while trials < 10_000:
        width = rng.choice([1, 4, 8, 16, 64])
        table = bytes(rng.randrange(width) for _ in range(256))
        p = Partition(width, table, Alphabet(range(256)))
        words = [bytes(rng.randrange(32, 127) for _ in range(rng.randint(1, 20))) for _ in range(20)]
        fps = kernels.fingerprint_many(table, words)
        for _ in range(50):
            w = rng.choice(words)
            i = rng.randrange(len(w))
            q = w[i:rng.randint(i + 1, len(w))]
            cand = set(np.flatnonzero(kernels.candidate_mask(fps, kernels.fingerprint(table, q))).tolist())
            matches = {j for j, x in enumerate(words) if q in x}
            if not matches <= cand or not is_candidate(fingerprint(p, q), fingerprint(p, w)):
                violations += 1
            trials += 1
    report(2, violations == 0, f"{trials} trials, {violations} violations", time.perf_counter() - t, 30)


def test_c3_exact_vs_brute_force(tiny_instances):
    t = time.perf_counter()
    mismatches = 0
    for inst in tiny_instances:
        p, trace = exact_solve(inst)
        if not objective(p, inst)[0] == trace.best == brute_force_best(inst):
            mismatches += 1
    report(3, mismatches == 0, f"{len(tiny_instances)} instances, {mismatches} mismatches",
           time.perf_counter() - t, 60)


def _highs_fixed_x(lp_text, tmp_path):
    path = tmp_path / "model.lp"
    path.write_text(lp_text)
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.readModel(str(path))
    names = list(h.getLp().col_names_)
    index = {n: i for i, n in enumerate(names)}

    def solve(fixed):
        for name, v in fixed.items():
            h.changeColBounds(index[name], v, v)
        h.run()
        return h.getInfo().objective_function_value

    return solve


def test_c4_model_fidelity(tiny_instances, tmp_path):
    t = time.perf_counter()
    rng = random.Random(5)
    failures = []
    m4 = build_mip(TrainingInstance.build([b"ab", b"cd"], [b"a", b"c"], 2, Alphabet(b"abcd")))
    if (m4.total_vars, m4.total_constraints) != (22, 38):
        failures.append(f"fixture counts {m4.total_vars}/{m4.total_constraints}")
    checked = 0
    for k, inst in enumerate(tiny_instances):
        model = build_mip(inst)
        _, obj, cons, binaries = read_lp(model.lp_text)
        counts = expected_counts(inst)
        if not (len(binaries), len(cons)) == counts == (model.total_vars, model.total_constraints):
            failures.append(f"instance {k}: counts")
        solve = _highs_fixed_x(model.lp_text, tmp_path) if highspy else None
        for _ in range(50):
            p = Partition.from_assignment(inst.alphabet, inst.width,
                                          {b: rng.randrange(inst.width) for b in inst.alphabet})
            vals = implied_values(model, inst, p)
            want = objective(p, inst)[0]
            if not all(satisfied(c, vals) for c in cons):
                failures.append(f"instance {k}: implied assignment infeasible")
            if sum(vals[v] for v in obj) != want:
                failures.append(f"instance {k}: implied objective")
            if solve is not None:
                fixed = {f"x_{a}_{j}": float(p.table[a] == j) for a in inst.alphabet for j in range(inst.width)}
                if round(solve(fixed)) != want:
                    failures.append(f"instance {k}: max eta under fixed x differs")
            checked += 1
    how = "HiGHS max-eta" if highspy else "implied-value"
    report(4, not failures, f"{checked} partitions checked ({how}); 4-letter fixture 22 vars/38 constraints; "
           f"failures: {failures[:3]}", time.perf_counter() - t, 60)


@pytest.fixture(scope="module")
def paper_recipe():
    """Bundled word list, width 16, 300 queries (20 seen), 50-word sample, 60 s search."""
    t = time.perf_counter()
    corpus = load_corpus(bundled_words_path(), Alphabet.printable_ascii(), "drop_row")
    wl = split_workload(generate_workload(corpus, range(1, 11), 10), 20, seed=0)
    train = sample_training(corpus, 65536, 50, seed=0)
    inst = TrainingInstance.build(train.words, wl.patterns("seen"), 16, corpus.alphabet)
    tb = gram_tiebreak(inst.words, 16, corpus.alphabet, (2,))
    opt, trace = local_search(inst, BUDGET_S, seed=0, init="round_robin", tiebreak=tb)
    rr = round_robin_partition(corpus.alphabet, 16)
    return dict(corpus=corpus, wl=wl, inst=inst, opt=opt, rr=rr, trace=trace,
                elapsed=time.perf_counter() - t)


def test_c5_beats_round_robin(paper_recipe):
    r = paper_recipe
    corpus, wl = r["corpus"], r["wl"]
    t = time.perf_counter()
    col_opt, col_rr = build_column(corpus, r["opt"]), build_column(corpus, r["rr"])
    e_opt = evaluate(corpus, r["opt"], wl, col_opt)
    e_rr = evaluate(corpus, r["rr"], wl, col_rr)
    elapsed = r["elapsed"] + time.perf_counter() - t
    s_opt, s_rr = e_opt.aggregate("seen"), e_rr.aggregate("seen")
    u_opt, u_rr = e_opt.aggregate("unseen"), e_rr.aggregate("unseen")
    ok = (len(corpus) >= 50_000 and len(wl) == 300 and len(wl.patterns("seen")) == 20
          and s_opt < s_rr and u_opt <= 1.05 * u_rr)
    target = "met" if u_opt < u_rr else "missed"
    report(5, ok, f"{len(corpus)} words; seen FPR {s_opt:.4f} vs round-robin {s_rr:.4f}; "
           f"unseen {u_opt:.4f} vs {u_rr:.4f} (lower-on-unseen target {target})",
           elapsed, BUDGET_S + 120)


def test_c6_scan_direction(paper_recipe):
    r = paper_recipe
    corpus, wl = r["corpus"], r["wl"]
    t = time.perf_counter()
    bench = bench_scan(corpus, r["opt"], wl, repeats=7)
    n = len(corpus)
    selective = [row for row in bench.rows if row.candidates / n < 0.5]
    slow = [row for row in selective if row.t_filtered_ms > row.t_full_ms]
    speed = [row.speedup for row in selective]
    detail = (f"{len(selective)} queries with candidate fraction < 0.5; {len(slow)} slower when filtered; "
              f"median speedup {np.median(speed):.2f}x (paper's 1.36x/1.26x and MIP gaps not reproduced)")
    report(6, not slow, detail, time.perf_counter() - t)


def test_c7_redundant_constraint_holds(tiny_instances, paper_recipe):
    violations = checked = 0
    partitions = [(inst, exact_solve(inst)[0]) for inst in tiny_instances]
    partitions.append((paper_recipe["inst"], paper_recipe["opt"]))
    for inst, p in partitions:
        qf = kernels.fingerprint_many(p.table, inst.queries)
        wf = kernels.fingerprint_many(p.table, inst.words)
        for qi, hits in enumerate(inst.matches):
            for wi in hits:
                checked += 1
                violations += int(qf[qi]) & ~int(wf[wi]) != 0
    # the trained partition must also hold on the full corpus, seen and unseen
    corpus, wl = paper_recipe["corpus"], paper_recipe["wl"]
    col = build_column(corpus, paper_recipe["opt"]).fps
    for q in wl.patterns():
        fq = kernels.fingerprint(paper_recipe["opt"].table, q)
        for i, w in enumerate(corpus.words):
            if q in w:
                checked += 1
                violations += (fq & ~int(col[i])) != 0
    report(7, violations == 0, f"{checked} (query, matching word) pairs, {violations} violations")


def test_c8_lp_roundtrip(tmp_path):
    t = time.perf_counter()
    corpus = tmp_path / "fixture.txt"
    corpus.write_bytes(b"ab\ncd\n")
    wl = tmp_path / "fixture.tsv"
    wl.write_bytes(b"a\t1\thigh\tseen\nc\t1\thigh\tseen\n")
    common = ["--corpus", str(corpus), "--alphabet", "97-100", "--workload", str(wl), "--bits", "2"]
    lp, sol, part = tmp_path / "m.lp", tmp_path / "m.sol", tmp_path / "p.part"
    assert main(["export-lp", *common, "-o", str(lp)]) == 0
    inst = TrainingInstance.build([b"ab", b"cd"], [b"a", b"c"], 2, Alphabet(b"abcd"))
    best, trace = exact_solve(inst)
    model = build_mip(inst)
    if lp.read_text() != model.lp_text:
        report(8, False, "CLI LP differs from library model")
    vals = implied_values(model, inst, best)
    sol.write_text("# known optimum\n" + "".join(f"{k} {v}\n" for k, v in vals.items()))
    assert main(["import-solution", *common, "--solution", str(sol), "-o", str(part)]) == 0
    from strfp.core import load_partition

    got = objective(load_partition(part.read_text()), inst)
    direct = objective(import_solution(model, sol.read_text()), inst)
    report(8, got == direct == (trace.best, 2) == (2, 2), f"re-imported objective {got[0]}/{got[1]}, "
           f"known optimum {trace.best}", time.perf_counter() - t, 1)
