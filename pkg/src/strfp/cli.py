"""``strfp`` command line.

Exit codes: 0 success, 2 usage error, 3 data error, 4 guard violation.
"""

from __future__ import annotations

import argparse
import ast
import sys
from pathlib import Path

from . import __version__
from .core import Alphabet, dump_partition, load_partition, round_robin_partition
from .errors import DataError, GuardError, StrfpError
from .evaluation import bench_scan, evaluate
from .optimizer import (DEFAULT_TIME_LIMIT, TrainingInstance, build_mip, exact_solve, export_lp,
                        fpr, gram_tiebreak, import_solution, local_search, objective)
from .workload import (bundled_words_path, dump_workload, generate_workload, load_corpus,
                       load_workload, sample_training, split_workload)

DEFAULTS = {
    "alphabet": "printable",
    "policy": "drop_row",
    "ks": "1-10",
    "per_class": 10,
    "seen": 20,
    "split_seed": 0,
    "bits": 16,
    "time_limit": DEFAULT_TIME_LIMIT,
    "iters": None,
    "sample": 50,
    "block": 65536,
    "sample_seed": 0,
    "seed": 0,
    "init": "round-robin",
    "tiebreak_k": 2,
    "repeats": 5,
}


def _int_list(text: str) -> list[int]:
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        lo, sep, hi = part.partition("-")
        if not sep:
            lo, sep, hi = part.partition("..")
        try:
            out.extend(range(int(lo), int(hi) + 1) if sep else [int(lo)])
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from None
    if not out:
        raise argparse.ArgumentTypeError("empty integer list")
    return out


def _bits(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad width {text!r}") from None
    if not 1 <= n <= 64:
        raise argparse.ArgumentTypeError(f"width must be in [1, 64], got {n}")
    return n


def load_config(path) -> dict:
    """Read ``key = value`` lines; ``#`` comments, dashes in keys allowed."""
    cfg = {}
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise DataError(f"cannot read config {path}: {e}") from None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise DataError(f"config line {lineno}: expected key = value")
        value = value.strip()
        try:
            value = ast.literal_eval(value)
        except (ValueError, SyntaxError):
            pass
        cfg[key.strip().replace("-", "_")] = value
    return cfg


def _add_corpus(p):
    p.add_argument("--corpus", help="newline-delimited corpus (default: bundled word list)")
    p.add_argument("--alphabet", help="'printable' or byte ranges such as '32-126'")
    p.add_argument("--policy", choices=["drop_row", "keep_total"])


def _add_training(p):
    _add_corpus(p)
    p.add_argument("--workload", required=True)
    p.add_argument("--bits", type=_bits)
    p.add_argument("--sample", type=int, help="training sample size")
    p.add_argument("--block", type=int, help="rows in the first data block")
    p.add_argument("--sample-seed", type=int)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="strfp", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("--config", help="key = value file; flags override it")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("workload", help="generate and split a k-gram query workload")
    _add_corpus(p)
    p.add_argument("--ks", type=_int_list)
    p.add_argument("--per-class", type=int)
    p.add_argument("--seen", type=int, help="number of seen queries")
    p.add_argument("--split-seed", type=int)
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("train", help="optimize a partition on the seen queries")
    _add_training(p)
    p.add_argument("--time-limit", type=float)
    p.add_argument("--iters", type=int, help="cap on scored moves (reproducible runs)")
    p.add_argument("--seed", type=int)
    p.add_argument("--init", choices=["round-robin", "random"])
    p.add_argument("--tiebreak-k", type=int,
                   help="break objective ties with the sample's own k-grams (0 disables)")
    p.add_argument("--exact", action="store_true", help="exhaustive enumeration (small alphabets)")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--trace", help="SolveTrace CSV path")

    p = sub.add_parser("export-lp", help="write the linearized model in LP format")
    _add_training(p)
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("import-solution", help="read a solver solution back into a partition")
    _add_training(p)
    p.add_argument("--solution", required=True)
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("eval", help="per-query false-positive report")
    _add_corpus(p)
    p.add_argument("--workload", required=True)
    p.add_argument("--partition", required=True)
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("bench", help="full versus fingerprint-filtered scan timings")
    _add_corpus(p)
    p.add_argument("--workload", required=True)
    p.add_argument("--partition", required=True)
    p.add_argument("--repeats", type=int)
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("baseline", help="write the round-robin partition")
    p.add_argument("--alphabet")
    p.add_argument("--bits", type=_bits)
    p.add_argument("-o", "--output", required=True)
    return ap


def _resolve(args, cfg):
    for key, value in {**DEFAULTS, **cfg}.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    if isinstance(args.ks, (str, int)):
        args.ks = _int_list(str(args.ks))
    elif isinstance(args.ks, (list, tuple)):
        args.ks = [int(k) for k in args.ks]
    try:
        args.bits = _bits(str(args.bits))
    except argparse.ArgumentTypeError as e:
        raise UsageError(str(e)) from None


class UsageError(Exception):
    pass


def _corpus(args):
    alphabet = Alphabet.parse(str(args.alphabet))
    return load_corpus(args.corpus or bundled_words_path(), alphabet, args.policy)


def _header(args, *keys) -> dict:
    h = {"strfp": __version__, "corpus": args.corpus or "bundled:words.txt"}
    for k in keys:
        v = getattr(args, k)
        h[k] = ",".join(map(str, v)) if isinstance(v, list) else v
    return h


def _instance(args, corpus):
    wl = load_workload(args.workload)
    train = sample_training(corpus, args.block, args.sample, args.sample_seed)
    seen = wl.patterns("seen")
    return TrainingInstance.build(train.words, seen, args.bits, corpus.alphabet)


def cmd_workload(args):
    corpus = _corpus(args)
    wl = generate_workload(corpus, args.ks, args.per_class)
    n_seen = args.seen
    if not 0 <= n_seen <= len(wl):
        raise UsageError(f"--seen must be in [0, {len(wl)}]")
    wl = split_workload(wl, n_seen, args.split_seed)
    header = _header(args, "alphabet", "policy", "ks", "per_class", "seen", "split_seed")
    with open(args.output, "wb") as fh:
        dump_workload(wl, fh, header)
    print(f"{len(wl)} queries ({len(wl.patterns('seen'))} seen) -> {args.output}")


def cmd_train(args):
    corpus = _corpus(args)
    inst = _instance(args, corpus)
    if not inst.words:
        raise DataError("empty training sample")
    if args.exact:
        part, trace = exact_solve(inst)
    else:
        tb = gram_tiebreak(inst.words, inst.width, inst.alphabet, (args.tiebreak_k,)) if args.tiebreak_k else None
        part, trace = local_search(inst, args.time_limit, args.seed,
                                   args.init.replace("-", "_"), args.iters, tiebreak=tb)
    extra = (("tiebreak_k", str(args.tiebreak_k)), ("sample", str(args.sample)), ("block", str(args.block)),
             ("sample_seed", str(args.sample_seed)))
    part = type(part)(part.width, part.table, part.alphabet, part.provenance, part.meta + extra)
    with open(args.output, "w") as fh:
        dump_partition(part, fh)
    correct, total = objective(part, inst)
    if args.trace:
        header = _header(args, "alphabet", "bits", "sample", "block", "sample_seed", "seed",
                         "time_limit", "iters", "init", "tiebreak_k")
        header["status"] = trace.status
        with open(args.trace, "w") as fh:
            trace.write_csv(fh, header)
    print(f"objective {correct}/{total} (training FPR {fpr(correct, total):.4f}), "
          f"status {trace.status} -> {args.output}")


def cmd_export_lp(args):
    corpus = _corpus(args)
    model = build_mip(_instance(args, corpus))
    with open(args.output, "w") as fh:
        export_lp(model, fh)
    print(f"{model.total_vars} binaries, {model.total_constraints} constraints -> {args.output}")


def cmd_import_solution(args):
    corpus = _corpus(args)
    inst = _instance(args, corpus)
    model = build_mip(inst)
    try:
        text = Path(args.solution).read_text()
    except OSError as e:
        raise DataError(f"cannot read solution {args.solution}: {e}") from None
    part = import_solution(model, text)
    with open(args.output, "w") as fh:
        dump_partition(part, fh)
    correct, total = objective(part, inst)
    print(f"objective {correct}/{total} -> {args.output}")


def _eval_inputs(args):
    corpus = _corpus(args)
    wl = load_workload(args.workload)
    try:
        part = load_partition(Path(args.partition).read_text())
    except OSError as e:
        raise DataError(f"cannot read partition {args.partition}: {e}") from None
    return corpus, wl, part


def _summary(report):
    for role in ("seen", "unseen"):
        if any(r.role == role for r in report.rows):
            print(f"{role}: aggregate FPR {report.aggregate(role):.6f}")


def cmd_eval(args):
    corpus, wl, part = _eval_inputs(args)
    report = evaluate(corpus, part, wl)
    header = _header(args, "alphabet", "policy")
    header.update(partition=args.partition, width=part.width)
    with open(args.output, "w") as fh:
        report.write_csv(fh, header)
    _summary(report)


def cmd_bench(args):
    corpus, wl, part = _eval_inputs(args)
    report = bench_scan(corpus, part, wl, args.repeats)
    header = _header(args, "alphabet", "policy", "repeats")
    header.update(partition=args.partition, width=part.width)
    with open(args.output, "w") as fh:
        report.write_csv(fh, header, timings=True)
    _summary(report)


def cmd_baseline(args):
    part = round_robin_partition(Alphabet.parse(str(args.alphabet)), args.bits)
    with open(args.output, "w") as fh:
        dump_partition(part, fh)
    print(f"round-robin partition, width {args.bits} -> {args.output}")


COMMANDS = {
    "workload": cmd_workload,
    "train": cmd_train,
    "export-lp": cmd_export_lp,
    "import-solution": cmd_import_solution,
    "eval": cmd_eval,
    "bench": cmd_bench,
    "baseline": cmd_baseline,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else {}
        _resolve(args, cfg)
        COMMANDS[args.command](args)
    except UsageError as e:
        print(f"strfp: usage error: {e}", file=sys.stderr)
        return 2
    except GuardError as e:
        print(f"strfp: {e}", file=sys.stderr)
        return 4
    except (DataError, StrfpError) as e:
        print(f"strfp: {e}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
