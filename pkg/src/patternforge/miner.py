"""Closed frequent call-subsequence mining over linearized usage examples.

A PrefixSpan-style projected-database search enumerates frequent
subsequences under document-frequency support (an example counts once no
matter how often the subsequence recurs inside it).  A post-pass keeps only
closed sequences: those with no frequent supersequence of equal support.
Each surviving sequence is packaged as an ScsPattern whose receivers and
parameters become typed holes.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

from .apigraph import ApiGraph
from .errors import UnknownMethodToken
from .scs.linearize import linearize_example, token_strings
from .scs.nodes import (
    CallTemplate,
    Hole,
    ScsExample,
    ScsPattern,
    TOKEN_CATCH,
    TOKEN_END_IF,
    TOKEN_END_TRY,
    TOKEN_END_WHILE,
    TOKEN_IF,
    TOKEN_TRY,
    TOKEN_WHILE,
)

CONTROL_OPENERS = {TOKEN_IF: "if", TOKEN_WHILE: "while", TOKEN_TRY: "try"}
CONTROL_CLOSERS = {TOKEN_END_IF, TOKEN_END_WHILE, TOKEN_END_TRY}


@dataclass(frozen=True)
class MinerConfig:
    min_support_fraction: float = 0.05
    min_length: int = 3
    closed_only: bool = True

    def __post_init__(self):
        if not 0 < self.min_support_fraction <= 1:
            raise ValueError("min_support_fraction must be in (0, 1]")
        if self.min_length < 1:
            raise ValueError("min_length must be >= 1")


def is_call_token(token: str) -> bool:
    """Call tokens are Owner.name; control markers never contain a dot
    except CATCH(T), which is excluded by its prefix."""
    return "." in token and not token.startswith(TOKEN_CATCH)


def support_threshold(corpus_size: int, fraction: float) -> int:
    return max(1, math.ceil(fraction * corpus_size))


def frequent_subsequences(
    sequences: list[tuple[str, ...]], min_support: int
) -> dict[tuple[str, ...], int]:
    """All subsequences with document frequency >= min_support.

    PrefixSpan search: a projected database maps each sequence index to the
    offset after the last matched item; extension items are counted once per
    sequence and recursed on when frequent.
    """
    found: dict[tuple[str, ...], int] = {}

    def extend(prefix: tuple[str, ...], projection: list[tuple[int, int]]) -> None:
        counts: dict[str, int] = {}
        firsts: dict[str, list[tuple[int, int]]] = {}
        for seq_idx, start in projection:
            seq = sequences[seq_idx]
            seen: set[str] = set()
            for pos in range(start, len(seq)):
                item = seq[pos]
                if item in seen:
                    continue
                seen.add(item)
                counts[item] = counts.get(item, 0) + 1
                firsts.setdefault(item, []).append((seq_idx, pos + 1))
        for item, count in counts.items():
            if count < min_support:
                continue
            extended = prefix + (item,)
            found[extended] = count
            extend(extended, firsts[item])

    extend((), [(i, 0) for i in range(len(sequences))])
    return found


def is_subsequence(needle: tuple[str, ...], haystack: tuple[str, ...]) -> bool:
    it = iter(haystack)
    return all(item in it for item in needle)


def closed_filter(frequent: dict[tuple[str, ...], int]) -> dict[tuple[str, ...], int]:
    """Drop any sequence that has a strict supersequence with equal support."""
    by_support: dict[int, list[tuple[str, ...]]] = {}
    for seq, sup in frequent.items():
        by_support.setdefault(sup, []).append(seq)
    closed: dict[tuple[str, ...], int] = {}
    for seq, sup in frequent.items():
        peers = by_support[sup]
        if any(len(p) > len(seq) and is_subsequence(seq, p) for p in peers):
            continue
        closed[seq] = sup
    return closed


def pattern_id(tokens: tuple[str, ...]) -> str:
    digest = hashlib.sha256("\x1f".join(tokens).encode()).hexdigest()
    return f"pat-{digest[:10]}"


def describe_tokens(tokens: tuple[str, ...]) -> str:
    names = [t.split(".", 1)[1] if is_call_token(t) else t.lower() for t in tokens]
    return " then ".join(names)


def extract_holes(calls: list[CallTemplate], g: ApiGraph) -> list[Hole]:
    """One hole per non-static receiver plus one per declared parameter,
    numbered hole-0, hole-1, ... in call order with receiver before params."""
    holes: list[Hole] = []
    for call_index, call in enumerate(calls):
        method = g.resolve_call_token(call.method_token)
        if method is None:
            raise UnknownMethodToken(call.method_token)
        if not method.static and not method.constructor:
            holes.append(
                Hole(
                    id=f"hole-{len(holes)}",
                    call_index=call_index,
                    slot="receiver",
                    index=0,
                    declared_type=method.owner,
                )
            )
        for k, param in enumerate(method.params):
            holes.append(
                Hole(
                    id=f"hole-{len(holes)}",
                    call_index=call_index,
                    slot="param",
                    index=k,
                    declared_type=param.type_name,
                )
            )
    return holes


def package_pattern(tokens: tuple[str, ...], support: int, g: ApiGraph) -> ScsPattern:
    """Turn a mined token sequence into a pattern with typed holes.

    Control tokens set the control-context tag of subsequent calls; a mined
    subsequence may contain an opener without its closer, so the tag stack
    tolerates unmatched markers.
    """
    calls: list[CallTemplate] = []
    stack: list[str] = []
    for token in tokens:
        if token in CONTROL_OPENERS:
            stack.append(CONTROL_OPENERS[token])
        elif token in CONTROL_CLOSERS:
            if stack:
                stack.pop()
        elif token.startswith(TOKEN_CATCH):
            continue  # handler stays inside the try context
        else:
            method = g.resolve_call_token(token)
            if method is None:
                raise UnknownMethodToken(token)
            calls.append(
                CallTemplate(
                    method_token=token,
                    control=stack[-1] if stack else "plain",
                )
            )
    holes = extract_holes(calls, g)
    # attach hole ids to their calls so printing and emission can find them
    by_call: dict[int, dict[str, object]] = {}
    for hole in holes:
        slot_map = by_call.setdefault(hole.call_index, {})
        if hole.slot == "receiver":
            slot_map["receiver"] = hole.id
        else:
            slot_map.setdefault("args", []).append(hole.id)
    wired: list[CallTemplate] = []
    for idx, call in enumerate(calls):
        slots = by_call.get(idx, {})
        wired.append(
            CallTemplate(
                method_token=call.method_token,
                control=call.control,
                receiver_hole=slots.get("receiver"),
                arg_holes=tuple(slots.get("args", [])),
            )
        )
    return ScsPattern(
        id=pattern_id(tokens),
        calls=tuple(wired),
        holes=tuple(holes),
        support=support,
        description=describe_tokens(tokens),
        tokens=tokens,
    )


def mine(
    corpus: list[ScsExample],
    cfg: MinerConfig,
    g: ApiGraph,
    *,
    denylist: Optional[Iterable[str]] = None,
) -> list[ScsPattern]:
    if not corpus:
        raise ValueError("corpus must be non-empty")
    sequences: list[tuple[str, ...]] = []
    for example in corpus:
        tokens = token_strings(linearize_example(example))
        for token in tokens:
            if is_call_token(token) and g.resolve_call_token(token) is None:
                raise UnknownMethodToken(f"{token} (example {example.id})")
        sequences.append(tokens)

    threshold = support_threshold(len(corpus), cfg.min_support_fraction)
    frequent = frequent_subsequences(sequences, threshold)
    if cfg.closed_only:
        frequent = closed_filter(frequent)
    kept = {
        seq: sup
        for seq, sup in frequent.items()
        if len(seq) >= cfg.min_length and any(is_call_token(t) for t in seq)
    }
    ordered = sorted(kept.items(), key=lambda kv: (-kv[1], -len(kv[0]), kv[0]))
    denied = set(denylist or ())
    patterns = [package_pattern(seq, sup, g) for seq, sup in ordered]
    return [p for p in patterns if p.id not in denied]


# -- persistence -----------------------------------------------------------


def pattern_to_document(pattern: ScsPattern) -> dict:
    return {
        "id": pattern.id,
        "support": pattern.support,
        "description": pattern.description,
        "tokens": list(pattern.tokens),
        "calls": [
            {
                "method": c.method_token,
                "control": c.control,
                "receiver_hole": c.receiver_hole,
                "arg_holes": list(c.arg_holes),
            }
            for c in pattern.calls
        ],
        "holes": [
            {
                "id": h.id,
                "call_index": h.call_index,
                "slot": h.slot,
                "index": h.index,
                "declared_type": h.declared_type,
            }
            for h in pattern.holes
        ],
    }


def pattern_from_document(doc: dict) -> ScsPattern:
    holes = tuple(
        Hole(
            id=h["id"],
            call_index=h["call_index"],
            slot=h["slot"],
            index=h["index"],
            declared_type=h["declared_type"],
        )
        for h in doc["holes"]
    )
    calls = tuple(
        CallTemplate(
            method_token=c["method"],
            control=c.get("control", "plain"),
            receiver_hole=c.get("receiver_hole"),
            arg_holes=tuple(c.get("arg_holes", ())),
        )
        for c in doc["calls"]
    )
    return ScsPattern(
        id=doc["id"],
        calls=calls,
        holes=holes,
        support=doc["support"],
        description=doc.get("description", ""),
        tokens=tuple(doc["tokens"]),
    )


def save_patterns(patterns: list[ScsPattern], path: str | Path) -> None:
    doc = {"version": 1, "patterns": [pattern_to_document(p) for p in patterns]}
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def load_patterns(path: str | Path) -> list[ScsPattern]:
    doc = json.loads(Path(path).read_text())
    return [pattern_from_document(p) for p in doc["patterns"]]
