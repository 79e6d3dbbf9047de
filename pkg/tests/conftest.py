import pytest

from strfp import _kernels_py
from strfp.core import Alphabet, Partition
from strfp.optimizer import TrainingInstance

try:
    from strfp import _kernels_cy
except ImportError:  # pragma: no cover
    _kernels_cy = None

BACKENDS = [_kernels_py] + ([_kernels_cy] if _kernels_cy is not None else [])


@pytest.fixture(params=BACKENDS, ids=lambda m: m.__name__.rsplit("_", 1)[-1])
def backend(request):
    return request.param


@pytest.fixture
def fig2_partition():
    # Only these placements are recoverable from the figure.
    assignment = {ord(c): 0 for c in "alu"} | {ord("o"): 1} | {ord(c): 2 for c in "nte"}
    return Partition.from_assignment(Alphabet(b"alunote"), 4, assignment)


@pytest.fixture
def four_letter():
    return TrainingInstance.build([b"ab", b"cd"], [b"a", b"c"], 2, Alphabet(b"abcd"))


def random_instance(rng, max_alpha=8):
    """Tiny instance: |A| <= 8, n in {2, 3}, <= 10 words of length <= 6, <= 5 queries."""
    alpha = bytes(rng.sample(range(ord("a"), ord("a") + 12), rng.randint(2, max_alpha)))
    words = [bytes(rng.choice(alpha) for _ in range(rng.randint(1, 6))) for _ in range(rng.randint(1, 10))]
    queries = []
    for _ in range(rng.randint(1, 5)):
        if rng.random() < 0.4:
            w = rng.choice(words)
            i = rng.randrange(len(w))
            q = w[i:rng.randint(i + 1, len(w))]
        else:
            q = bytes(rng.choice(alpha) for _ in range(rng.randint(1, 3)))
        queries.append(q)
    return TrainingInstance.build(words, queries, rng.choice([2, 3]), Alphabet(alpha))


def brute_force_best(inst):
    """Independent oracle: try every assignment of alphabet bytes to bins."""
    import itertools

    members = list(inst.alphabet)
    best = -1
    for combo in itertools.product(range(inst.width), repeat=len(members)):
        bin_of = dict(zip(members, combo))
        fq = [{bin_of[c] for c in q} for q in inst.queries]
        fw = [{bin_of[c] for c in w} for w in inst.words]
        correct = 0
        for qi, q in enumerate(inst.queries):
            for wi, w in enumerate(inst.words):
                if q not in w and not fq[qi] <= fw[wi]:
                    correct += 1
        best = max(best, correct)
    return best
