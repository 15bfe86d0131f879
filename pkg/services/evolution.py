"""
services/evolution.py
The modified genetic algorithm: an elite pool of K_pop S-boxes, K_mut
single-swap children per parent each iteration, truncation back to the elite
at the start of the next iteration, and early return on the first child that
reaches the target nonlinearity.
"""
import time
from dataclasses import dataclass, field
from functools import partial
from typing import List, Optional, Sequence, Tuple

from config import (
    DEFAULT_K_ITER, DEFAULT_K_MUT, DEFAULT_K_POP, DEFAULT_LANES,
    DEFAULT_N, DEFAULT_SEED, DEFAULT_TARGET_NL, MAX_N, MIN_N, PROGRESS_LOG_EVERY,
)
from core.exceptions import ConfigurationError
from core.logger import logger
from core.rng import STREAM_CHILD, STREAM_INIT, make_rng
from core.sbox import SBox, random_sbox, random_swap
from core.spectral import Cost, CostParams, Evaluator, evaluate
from services.lanes import LanePool


@dataclass(frozen=True)
class SearchParams:
    n: int = DEFAULT_N
    k_pop: int = DEFAULT_K_POP
    k_iter: int = DEFAULT_K_ITER
    k_mut: int = DEFAULT_K_MUT
    target_nl: int = DEFAULT_TARGET_NL
    cost: CostParams = CostParams()
    seed: int = DEFAULT_SEED
    lanes: int = DEFAULT_LANES
    record_trace: bool = False

    def __post_init__(self):
        if not MIN_N <= self.n <= MAX_N:
            raise ConfigurationError(f"n must be in [{MIN_N}, {MAX_N}], got {self.n}")
        for name in ("k_pop", "k_mut", "k_iter", "lanes"):
            if getattr(self, name) < 1:
                raise ConfigurationError(f"{name} must be >= 1, got {getattr(self, name)}")


@dataclass(frozen=True)
class Candidate:
    sbox: SBox
    nl: int
    cost: Cost


@dataclass
class SearchOutcome:
    """
    Result of one search. `sbox` is the winning S-box on success and the final
    elite leader on failure. Duration and the parameter record are attached by
    run_single and are excluded from equality.
    """
    success: bool
    sbox: Optional[SBox]
    k_sbox: int
    iterations_used: int
    trace: Optional[List[Tuple[int, Cost]]] = None
    duration_ms: float = field(default=0.0, compare=False)
    params: Optional[object] = field(default=None, compare=False)


def elite_selection(pop: Sequence[Candidate], k_pop: int) -> List[Candidate]:
    """Top k_pop by nonlinearity (desc) then cost (asc); ties keep pool order."""
    ranked = sorted(pop, key=lambda c: (-c.nl, c.cost))
    return ranked[:k_pop]


def _score(evaluator: Evaluator, sbox: SBox) -> Candidate:
    result = evaluator(sbox)
    return Candidate(sbox, result.nl, result.cost)


def _spawn_child(evaluator: Evaluator, seed: int, t: int, parents: Sequence[Candidate], slot: Tuple[int, int]) -> Candidate:
    p, k = slot
    rng = make_rng(seed, STREAM_CHILD, t, p, k)
    return _score(evaluator, random_swap(parents[p].sbox, rng))


def ga_modified(params: SearchParams, evaluator: Optional[Evaluator] = None) -> SearchOutcome:
    evaluator = evaluator or partial(evaluate, p=params.cost)
    trace: Optional[List[Tuple[int, Cost]]] = [] if params.record_trace else None
    k_sbox = 0

    logger.info(
        f"[GA] start n={params.n} k_pop={params.k_pop} k_mut={params.k_mut} "
        f"k_iter={params.k_iter} target_nl={params.target_nl} seed={params.seed} lanes={params.lanes}"
    )

    pool: List[Candidate] = []
    for idx in range(params.k_pop):
        cand = _score(evaluator, random_sbox(params.n, make_rng(params.seed, STREAM_INIT, idx)))
        k_sbox += 1
        if cand.nl >= params.target_nl:
            logger.info(f"[GA] initial member {idx} already meets target (nl={cand.nl})")
            return SearchOutcome(True, cand.sbox, k_sbox, 0, trace)
        pool.append(cand)

    with LanePool(params.lanes) as lanes:
        for t in range(params.k_iter):
            pool = elite_selection(pool, params.k_pop)
            leader = pool[0]
            if trace is not None:
                trace.append((leader.nl, leader.cost))
            if t and t % PROGRESS_LOG_EVERY == 0:
                logger.debug(f"[GA] t={t} k_sbox={k_sbox} best_nl={leader.nl} best_cost={leader.cost}")

            parents = tuple(pool)
            slots = [(p, k) for p in range(len(parents)) for k in range(params.k_mut)]
            children = lanes.map(partial(_spawn_child, evaluator, params.seed, t, parents), slots)
            for child in children:
                k_sbox += 1
                if child.nl >= params.target_nl:
                    logger.info(f"[GA] success at t={t} k_sbox={k_sbox} nl={child.nl}")
                    return SearchOutcome(True, child.sbox, k_sbox, t + 1, trace)
                pool.append(child)

    leader = elite_selection(pool, 1)[0]
    logger.info(f"[GA] cap reached after {params.k_iter} iterations, k_sbox={k_sbox}, best_nl={leader.nl}")
    return SearchOutcome(False, leader.sbox, k_sbox, params.k_iter, trace)


def run_single(params: SearchParams, evaluator: Optional[Evaluator] = None) -> SearchOutcome:
    """ga_modified with wall-clock duration and the resolved parameters attached."""
    start = time.perf_counter()
    outcome = ga_modified(params, evaluator)
    outcome.duration_ms = (time.perf_counter() - start) * 1000.0
    outcome.params = params
    return outcome
