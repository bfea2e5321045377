"""Input and output documents for hibicone.

This module reads poset files, renders results as JSON, CSV and DOT
documents, and reports errors at the command-line boundary.
"""
import json
import logging
from collections.abc import Sequence
from fractions import Fraction
from pathlib import Path
from typing import Any

import pandas as pd

from hibicone.classgroup import DivisorClass
from hibicone.config import OUTPUT
from hibicone.conic import Cell, cell_of
from hibicone.errors import ErrorSeverity, HibiError, PosetParseError
from hibicone.exact import format_rational
from hibicone.geometry import SignatureTable
from hibicone.mutation import Admissible, ExchangeGraph, NCCRSet
from hibicone.poset import Poset, parse_poset

logger = logging.getLogger(__name__)


def read_poset(path: str | Path) -> Poset:
    """
    Read and validate a poset file.

    Args:
        path: Path to a JSON poset document

    Returns:
        The poset

    Raises:
        PosetParseError: If the file cannot be read or is invalid
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise PosetParseError(f"Cannot read poset file ({e.strerror})", path) from e
    return parse_poset(text)


def to_json(document: Any) -> str:
    """Serialize a document deterministically."""
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"


def conic_document(
    classes: Sequence[DivisorClass],
    cells: bool = True,
    verdicts: dict[tuple[int, ...], bool] | None = None,
) -> list[dict[str, Any]]:
    """
    Describe conic classes, optionally with their cells and oracle verdicts.

    Args:
        classes: Conic classes
        cells: Include the H-representation of each cell
        verdicts: Oracle verdict per class coordinates

    Returns:
        One entry per class
    """
    entries = []
    for cls in classes:
        entry: dict[str, Any] = {"class": list(cls.coords)}
        if cells:
            entry["cell"] = cell_of(cls).to_dict()["constraints"]
        if verdicts is not None:
            entry["oracle"] = verdicts[cls.coords]
        entries.append(entry)
    return entries


def _linear_form(coefficients: Sequence[Fraction], names: Sequence[str]) -> str:
    terms = [(c, name) for c, name in zip(coefficients, names, strict=True) if c != 0]
    if not terms:
        return "0"
    text = ""
    for k, (c, name) in enumerate(terms):
        term = name if abs(c) == 1 else f"{format_rational(abs(c))}{name}"
        if k == 0:
            text = f"-{term}" if c < 0 else term
        else:
            text += f" {'-' if c < 0 else '+'} {term}"
    return text


def cell_summary(cell: Cell) -> str:
    """
    Render a cell as semicolon-separated inequalities.

    The coordinate y_i is σ_i(x) on tree edge e_i, so "y2 > -1" bounds the
    second edge of the diagram.
    """
    names = [f"y{i + 1}" for i in sorted(cell.cls.tree.tree_edges)]
    return "; ".join(
        f"{_linear_form(c.coefficients, names)} {c.sense.value} {format_rational(c.bound)}"
        for c in cell.constraints
    )


def conic_csv(
    classes: Sequence[DivisorClass], verdicts: dict[tuple[int, ...], bool] | None = None
) -> str:
    """
    Render conic classes with one row per class.

    Args:
        classes: Conic classes
        verdicts: Oracle verdict per class coordinates, added as an oracle column

    Returns:
        CSV with the header class,strict,weak,cell[,oracle]
    """
    columns = list(OUTPUT.conic_csv_columns)
    rows = []
    for cls in classes:
        cell = cell_of(cls)
        strict = sum(c.sense.is_strict for c in cell.constraints)
        row: dict[str, Any] = {
            "class": " ".join(str(c) for c in cls.coords),
            "strict": strict,
            "weak": len(cell.constraints) - strict,
            "cell": cell_summary(cell),
        }
        if verdicts is not None:
            row["oracle"] = verdicts[cls.coords]
        rows.append(row)
    if verdicts is not None:
        columns.append("oracle")
    frame = pd.DataFrame(rows, columns=columns)
    return str(frame.to_csv(index=False, lineterminator="\n"))


def signature_csv(table: SignatureTable) -> str:
    """Render a signature table with the header class,volume,approx."""
    return str(table.to_frame().to_csv(index=False, lineterminator="\n"))


def signature_document(table: SignatureTable) -> dict[str, Any]:
    frame = table.to_frame()
    return {
        "tree": table.tree.labels(),
        "method": table.method,
        "signatures": frame.to_dict(orient="records"),
        "total": format_rational(table.total()),
    }


def characters(chars: Sequence[tuple[int, ...]]) -> list[list[int]]:
    return [list(c) for c in chars]


def mutation_document(
    chars: NCCRSet, chi: tuple[int, ...], admissible: Admissible, result: NCCRSet, left: bool
) -> dict[str, Any]:
    return {
        "direction": "left" if left else "right",
        "set": characters(chars.sorted()),
        "at": list(chi),
        "lambda": str(admissible.subgroup),
        "positive_weights": [i + 1 for i in admissible.positive],
        "degree": admissible.degree,
        "nu": list(admissible.target),
        "result": characters(result.sorted()),
    }


def graph_to_json(graph: ExchangeGraph) -> dict[str, Any]:
    """Adjacency document; vertices are referred to by position."""
    index = {v.chars: k for k, v in enumerate(graph.vertices)}
    return {
        "vertices": [characters(v.sorted()) for v in graph.vertices],
        "edges": [
            {
                "source": index[e.source.chars],
                "target": index[e.target.chars],
                "removed": list(e.removed),
                "added": list(e.added),
                "positive_weights": [i + 1 for i in e.positive],
                "direction": e.direction,
            }
            for e in graph.edges
        ],
        "translation_classes": [
            {
                "canonical": characters(sorted(key)),
                "members": [index[v.chars] for v in members],
            }
            for key, members in graph.translation_classes().items()
        ],
        "truncated": graph.truncated,
    }


def graph_to_dot(graph: ExchangeGraph) -> str:
    """
    Render the exchange graph in DOT.

    Nodes are numbered in vertex order and labelled by their sorted
    characters; edges carry the removed and added character.
    """
    index = {v.chars: k for k, v in enumerate(graph.vertices)}
    lines = ["graph exchange {"]
    for k, vertex in enumerate(graph.vertices):
        lines.append(f'  n{k} [label="{vertex.label()}"];')
    for edge in graph.edges:
        removed = ",".join(map(str, edge.removed))
        added = ",".join(map(str, edge.added))
        lines.append(
            f"  n{index[edge.source.chars]} -- n{index[edge.target.chars]}"
            f' [label="({removed})→({added})"];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_output(text: str, path: str | Path | None = None) -> None:
    """Write a document to a file, or to stdout when no path is given."""
    if path is None:
        print(text, end="")
        return
    Path(path).write_text(text, encoding="utf-8")
    logger.info("Wrote %s", path)


def report_error(error: HibiError) -> None:
    """
    Report an error according to its severity.

    Args:
        error: The error to report
    """
    if error.severity == ErrorSeverity.WARNING:
        logger.warning("%s", error)
    elif error.severity == ErrorSeverity.INFO:
        logger.info("%s", error)
    else:
        logger.error("%s", error)
