"""
services/baseline.py
Textbook generational GA for comparison runs: tournament selection,
two-point segment-exchange crossover with PMX repair, and single-swap mutation.
"""
from dataclasses import dataclass
from functools import partial
from typing import List, Optional, Tuple

import numpy as np

from config import (
    BASELINE_CROSSOVER_RATE, BASELINE_GENERATIONS, BASELINE_LOG_EVERY, BASELINE_MUTATION_RATE,
    BASELINE_POP_SIZE, BASELINE_TOURNAMENT_SIZE, DEFAULT_N, DEFAULT_SEED, MAX_N, MIN_N,
)
from core.exceptions import ConfigurationError
from core.logger import logger
from core.rng import STREAM_BASELINE, make_rng
from core.sbox import SBox, random_sbox, random_swap
from core.spectral import CostParams, Evaluator, evaluate
from services.evolution import Candidate, SearchOutcome


@dataclass(frozen=True)
class BaselineGaParams:
    pop_size: int = BASELINE_POP_SIZE
    generations: int = BASELINE_GENERATIONS
    crossover_rate: float = BASELINE_CROSSOVER_RATE
    mutation_rate: float = BASELINE_MUTATION_RATE
    tournament_size: int = BASELINE_TOURNAMENT_SIZE
    seed: int = DEFAULT_SEED
    n: int = DEFAULT_N

    def __post_init__(self):
        if self.pop_size < 2 or self.pop_size % 2:
            raise ConfigurationError(f"pop_size must be a positive even number, got {self.pop_size}")
        if self.generations < 1:
            raise ConfigurationError(f"generations must be >= 1, got {self.generations}")
        for name in ("crossover_rate", "mutation_rate"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ConfigurationError(f"{name} must be in [0, 1], got {getattr(self, name)}")
        if self.tournament_size < 2:
            raise ConfigurationError(f"tournament_size must be >= 2, got {self.tournament_size}")
        if not MIN_N <= self.n <= MAX_N:
            raise ConfigurationError(f"n must be in [{MIN_N}, {MAX_N}], got {self.n}")


def _fitness(c: Candidate):
    """Lexicographic (nl, -cost): larger is fitter."""
    return (c.nl, -c.cost)


def _pmx_child(outer: np.ndarray, donor: np.ndarray, k: int, l: int) -> np.ndarray:
    """outer[:k] + donor[k:l] + outer[l:], duplicates outside the segment mapped
    through the segment's positional pairing donor[m] -> outer[m]."""
    child = outer.copy()
    child[k:l] = donor[k:l]
    mapping = {int(donor[m]): int(outer[m]) for m in range(k, l)}
    for i in list(range(k)) + list(range(l, len(outer))):
        v = int(outer[i])
        while v in mapping:
            v = mapping[v]
        child[i] = v
    return child


def pmx_crossover(p1: SBox, p2: SBox, k: int, l: int) -> Tuple[SBox, SBox]:
    """Exchanges the middle segment [k, l) of two parents and repairs bijectivity."""
    if not 0 <= k <= l <= p1.size:
        raise ConfigurationError(f"crossover cut points must satisfy 0 <= k <= l <= {p1.size}, got ({k}, {l})")
    c1 = _pmx_child(p1.table, p2.table, k, l)
    c2 = _pmx_child(p2.table, p1.table, k, l)
    return SBox._trusted(p1.n, c1), SBox._trusted(p2.n, c2)


def _tournament(pop: List[Candidate], size: int, rng: np.random.Generator) -> Candidate:
    picks = rng.choice(len(pop), size=size, replace=False)
    return max((pop[i] for i in picks), key=_fitness)


def ga_baseline(params: BaselineGaParams, target_nl: int, cost: CostParams = CostParams(),
                evaluator: Optional[Evaluator] = None) -> SearchOutcome:
    evaluator = evaluator or partial(evaluate, p=cost)
    rng = make_rng(params.seed, STREAM_BASELINE)
    k_sbox = 0

    def score(sbox: SBox) -> Candidate:
        nonlocal k_sbox
        k_sbox += 1
        result = evaluator(sbox)
        return Candidate(sbox, result.nl, result.cost)

    logger.info(
        f"[Baseline] start N={params.pop_size} G={params.generations} pc={params.crossover_rate} "
        f"pm={params.mutation_rate} tournament={params.tournament_size} seed={params.seed}"
    )

    pop = [score(random_sbox(params.n, rng)) for _ in range(params.pop_size)]
    best = max(pop, key=_fitness)
    size = 1 << params.n
    tsize = min(params.tournament_size, params.pop_size)

    for g in range(params.generations):
        if best.nl >= target_nl:
            logger.info(f"[Baseline] target reached after {g} generations, k_sbox={k_sbox}")
            return SearchOutcome(True, best.sbox, k_sbox, g)
        if g and g % BASELINE_LOG_EVERY == 0:
            logger.debug(f"[Baseline] g={g} k_sbox={k_sbox} best_nl={best.nl} best_cost={best.cost}")

        next_pop: List[Candidate] = []
        for _ in range(params.pop_size // 2):
            a = _tournament(pop, tsize, rng)
            b = _tournament(pop, tsize, rng)
            children = [a, b]
            if rng.random() < params.crossover_rate:
                k, l = sorted(int(v) for v in rng.integers(0, size + 1, size=2))
                s1, s2 = pmx_crossover(a.sbox, b.sbox, k, l)
                children = [None, None]
                boxes = [s1, s2]
            else:
                boxes = [a.sbox, b.sbox]
            for idx in range(2):
                if rng.random() < params.mutation_rate:
                    boxes[idx] = random_swap(boxes[idx], rng)
                    children[idx] = None
                # Unchanged copies keep their parent's evaluation.
                next_pop.append(children[idx] or score(boxes[idx]))

        pop = next_pop
        gen_best = max(pop, key=_fitness)
        if _fitness(gen_best) > _fitness(best):
            best = gen_best

    success = best.nl >= target_nl
    logger.info(f"[Baseline] finished G={params.generations} k_sbox={k_sbox} best_nl={best.nl} success={success}")
    return SearchOutcome(success, best.sbox, k_sbox, params.generations)
