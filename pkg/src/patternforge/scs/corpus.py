"""Corpus loading: files of `#example` blocks separated by `#end` markers."""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Optional, TYPE_CHECKING

from ..errors import ScsSyntaxError
from .nodes import ScsExample
from .parser import parse_example

if TYPE_CHECKING:  # pragma: no cover
    from ..apigraph import ApiGraph


def split_blocks(text: str) -> list[str]:
    """Cut a corpus file into example blocks, headers included."""
    blocks: list[str] = []
    current: list[str] = []
    for raw in text.split("\n"):
        line = raw.strip()
        if line.startswith("#example"):
            if current:
                raise ScsSyntaxError("missing #end before next #example", 1, 1)
            current = [raw]
        elif line == "#end":
            if not current:
                raise ScsSyntaxError("#end without matching #example", 1, 1)
            current.append(raw)
            blocks.append("\n".join(current))
            current = []
        elif current:
            current.append(raw)
        elif line and not line.startswith("#") and not line.startswith("//"):
            raise ScsSyntaxError("statement outside an #example block", 1, 1)
    if current:
        raise ScsSyntaxError("unterminated #example block", 1, 1)
    return blocks


def load_corpus_text(
    text: str,
    *,
    graph: Optional["ApiGraph"] = None,
    source_uri: Optional[str] = None,
) -> list[ScsExample]:
    examples = [
        parse_example(block, graph=graph, source_uri=source_uri)
        for block in split_blocks(text)
    ]
    seen: set[str] = set()
    for ex in examples:
        if ex.id in seen:
            raise ScsSyntaxError(f"duplicate example id {ex.id!r}", 1, 1)
        seen.add(ex.id)
    return examples


def load_corpus(
    paths: Iterable[str | Path] | str | Path,
    *,
    graph: Optional["ApiGraph"] = None,
) -> list[ScsExample]:
    """Load one file, several files, or a directory of `.scs` files."""
    if isinstance(paths, (str, Path)):
        paths = [paths]
    files: list[Path] = []
    for p in paths:
        p = Path(p)
        if p.is_dir():
            files.extend(sorted(p.glob("*.scs")))
        else:
            files.append(p)
    examples: list[ScsExample] = []
    seen: set[str] = set()
    for f in files:
        for ex in load_corpus_text(f.read_text(), graph=graph, source_uri=str(f)):
            if ex.id in seen:
                raise ScsSyntaxError(f"duplicate example id {ex.id!r} in {f}", 1, 1)
            seen.add(ex.id)
            examples.append(ex)
    return examples
