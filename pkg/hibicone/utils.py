"""Utility functions shared across hibicone modules."""
import re
from collections.abc import Callable, Sequence
from multiprocessing import Pool
from typing import Literal, TypeVar

OutputFormat = Literal["json", "csv", "dot"]
SignatureMethod = Literal["alcove", "polytope"]
BoxKind = Literal["tight", "generic"]

T = TypeVar("T")
R = TypeVar("R")

_DIGITS = re.compile(r"(\d+)")


def natural_key(label: str) -> tuple[str | int, ...]:
    """
    Get a sort key that compares digit runs numerically.

    "p2" sorts before "p10"; labels without digits sort lexicographically.

    Args:
        label: Element label

    Returns:
        Tuple alternating text and integer chunks
    """
    return tuple(int(chunk) if chunk.isdigit() else chunk for chunk in _DIGITS.split(label))


def parallel_map(func: Callable[[T], R], items: Sequence[T], jobs: int = 1) -> list[R]:
    """
    Apply a function to every item, optionally in a process pool.

    Results come back in input order whatever the degree of parallelism,
    so callers can merge them deterministically.

    Args:
        func: Picklable top-level function (or functools.partial of one)
        items: Inputs
        jobs: Number of worker processes; 1 runs in-process

    Returns:
        Results in input order
    """
    if jobs <= 1 or len(items) < 2:
        return [func(item) for item in items]
    with Pool(min(jobs, len(items))) as pool:
        return pool.map(func, items)


def parse_int_list(text: str) -> tuple[int, ...]:
    """
    Parse a comma-separated list of integers such as "1,-2,0".

    Args:
        text: Comma-separated integers; the empty string is the empty tuple

    Returns:
        Parsed integers

    Raises:
        ValueError: If a chunk is not an integer
    """
    text = text.strip()
    if not text:
        return ()
    return tuple(int(chunk) for chunk in text.split(","))

