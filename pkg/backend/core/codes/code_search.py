"""
CSOC search by difference-set construction.

Every generator is normalized to start at tap 0 (shifting a tap set does not
change its differences). Taps are added smallest-feasible first with
backtracking; a candidate is feasible when none of its differences to the
taps already placed has been used anywhere in the code. If the first,
ascending pass exhausts its node budget, restarts visit candidates in an
order shuffled by the seeded generator.
"""

import logging
import time
from typing import List, Optional, Set

import numpy as np

from ..errors import ParameterError
from .csoc import CsocCode, validate_self_orthogonality
from utils.enhanced_logger import log_processing_step

logger = logging.getLogger(__name__)


class _BudgetExhausted(Exception):
    pass


class DifferenceSetSearch:
    """Backtracking search for k tap sets of J taps with all differences distinct."""

    def __init__(self, k: int, J: int, max_m: int, max_nodes: int = 200_000,
                 rng: Optional[np.random.Generator] = None):
        self.k = k
        self.J = J
        self.max_m = max_m
        self.max_nodes = max_nodes
        self.rng = rng
        self.nodes = 0
        self.generators: List[List[int]] = [[0] for _ in range(k)]
        self.used: Set[int] = set()

    def _candidates(self, last_tap: int, missing: int) -> List[int]:
        # leave room for the taps still missing after this one
        highest = self.max_m - (missing - 1)
        candidates = list(range(last_tap + 1, highest + 1))
        if self.rng is not None:
            self.rng.shuffle(candidates)
        return candidates

    def _extend(self, g: int) -> bool:
        if g == self.k:
            return True
        taps = self.generators[g]
        missing = self.J - len(taps)
        if missing == 0:
            return self._extend(g + 1)

        for tap in self._candidates(taps[-1], missing):
            self.nodes += 1
            if self.nodes > self.max_nodes:
                raise _BudgetExhausted()
            differences = [tap - a for a in taps]
            if any(d in self.used for d in differences):
                continue
            self.used.update(differences)
            taps.append(tap)
            if self._extend(g):
                return True
            taps.pop()
            self.used.difference_update(differences)
        return False

    def run(self) -> Optional[CsocCode]:
        try:
            found = self._extend(0)
        except _BudgetExhausted:
            return None
        if not found:
            return None
        return CsocCode.from_taps(self.generators)


def search_csoc(k: int, J: int, max_m: int, seed: Optional[int] = 0,
                restarts: int = 8, max_nodes: int = 200_000) -> Optional[CsocCode]:
    """
    Find a valid (k+1, k, m) CSOC with J taps per generator and m <= max_m.

    Returns None when the bound (or the search budget) is exhausted. The result
    depends only on the arguments.
    """
    if k < 1 or J < 1:
        raise ParameterError(f"search needs k >= 1 and J >= 1, got k={k}, J={J}")
    if max_m < J - 1:
        logger.debug(f"max_m={max_m} cannot hold {J} distinct taps")
        return None

    start = time.perf_counter()
    code = None
    for attempt in range(restarts + 1):
        # attempt 0 is the plain ascending search; later attempts shuffle candidates
        rng = None if attempt == 0 else np.random.default_rng([seed or 0, attempt])
        search = DifferenceSetSearch(k, J, max_m, max_nodes=max_nodes, rng=rng)
        code = search.run()
        logger.debug(f"search attempt {attempt}: {search.nodes} nodes, found={code is not None}")
        if code is not None:
            break
        if attempt == 0 and search.nodes <= max_nodes:
            # ascending pass finished without hitting the budget: the space is exhausted
            break

    duration_ms = (time.perf_counter() - start) * 1000.0
    if code is None:
        log_processing_step(
            "search_csoc", "not_found", duration_ms=duration_ms,
            details={'k': k, 'J': J, 'max_m': max_m, 'seed': seed}
        )
        return None

    report = validate_self_orthogonality(code)
    assert report.valid, report.message
    log_processing_step(
        "search_csoc", "success", duration_ms=duration_ms,
        details={'k': k, 'J': J, 'm': code.m, 'generators': code.to_dict()['generators']}
    )
    return code
