"""Runs the search of one interval placement in a worker process

recognize.py hands the placements to a ProcessPoolExecutor. The job
function is kept in a module of its own so that the workers can import
it by name instead of unpickling it from the recognizer module."""
from typing import Tuple

from app.moves.sheared import ShearedPresentation
from app.search.search import SearchConstraints, SearchResult, simplify_monotonic


def search_choice(job: Tuple[ShearedPresentation, SearchConstraints]) -> SearchResult:
    """Searches one sheared state under its own constraints"""
    state, constraints = job
    return simplify_monotonic(state, constraints)
