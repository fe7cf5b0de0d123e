"""Independent reference implementations used to freeze expected values.

Everything here is deliberately dumb and self-contained: plain dicts, raw
model JSON documents, brute-force enumeration.  No imports from
patternforge beyond what a test needs to feed inputs in, so an agreement
between a module under test and its oracle is a real two-implementation
check, not the same code called twice.
"""

from __future__ import annotations

import itertools

PRIMITIVES = ("int", "long", "short", "double", "boolean", "char", "String")

PHOLD_OPEN = "⟨"
PHOLD_CLOSE = "⟩"


# -- closed frequent subsequence mining ----------------------------------------


def contains_subsequence(haystack, needle) -> bool:
    pos = 0
    for token in haystack:
        if pos < len(needle) and token == needle[pos]:
            pos += 1
    return pos == len(needle)


def closed_frequent_subsequences(sequences, threshold, min_length):
    """Brute force: every distinct subsequence of every sequence, document
    frequency by scanning, then drop non-closed ones."""
    candidates = set()
    for seq in sequences:
        for r in range(min_length, len(seq) + 1):
            for picks in itertools.combinations(range(len(seq)), r):
                candidates.add(tuple(seq[i] for i in picks))
    supported = {}
    for cand in candidates:
        support = sum(1 for seq in sequences if contains_subsequence(seq, cand))
        if support >= threshold:
            supported[cand] = support
    closed = {}
    for cand, support in supported.items():
        is_closed = True
        for other, other_support in supported.items():
            if (
                other != cand
                and other_support == support
                and len(other) > len(cand)
                and contains_subsequence(other, cand)
            ):
                is_closed = False
                break
        if is_closed:
            closed[cand] = support
    return closed


# -- assignability over the raw model document ----------------------------------


def assignable_dfs(doc: dict, frm: str, to: str) -> bool:
    if frm == to:
        return True
    supers = {}
    for entry in doc.get("types", []):
        ups = list(entry.get("implements", []))
        if entry.get("extends"):
            ups.append(entry["extends"])
        supers[entry["name"]] = ups
    stack = [frm]
    seen = set()
    while stack:
        cur = stack.pop()
        if cur == to:
            return True
        if cur in seen:
            continue
        seen.add(cur)
        stack.extend(supers.get(cur, []))
    return False


# -- typed-term enumeration over the raw model document --------------------------


class ModelIndex:
    """Flat lookups over an api-model JSON document."""

    def __init__(self, doc: dict):
        self.doc = doc
        self.types = {t["name"]: t for t in doc.get("types", [])}
        self.constructors = {}  # type name -> params
        self.methods = []  # (owner, name, params, returns, static)
        self.fields = []  # (owner, name, type, static)
        self.enums = {}  # enum name -> constants
        for t in doc.get("types", []):
            if t.get("constructor") is not None:
                self.constructors[t["name"]] = t["constructor"].get("params", [])
            for m in t.get("methods", []):
                self.methods.append(
                    (
                        t["name"],
                        m["name"],
                        m.get("params", []),
                        m.get("returns"),
                        bool(m.get("static")),
                    )
                )
            for f in t.get("fields", []):
                self.fields.append(
                    (t["name"], f["name"], f["type"], bool(f.get("static")))
                )
            if t.get("kind") == "enum":
                self.enums[t["name"]] = list(t.get("constants", []))

    def assignable(self, frm: str, to: str) -> bool:
        return assignable_dfs(self.doc, frm, to)


def enumerate_terms(doc: dict, locals_, target: str, depth: int) -> set[str]:
    """All canonical prints of well-typed terms for `target` within `depth`,
    mirroring the documented leaf and placeholder rules."""
    index = ModelIndex(doc)
    memo = {}

    def sub(type_name: str, d: int) -> set[str]:
        if type_name not in index.types and type_name not in PRIMITIVES:
            return set()
        result = terms(type_name, d)
        if not result and d >= 1:
            return {PHOLD_OPEN + type_name + PHOLD_CLOSE}
        return result

    def terms(type_name: str, d: int) -> set[str]:
        if d <= 0:
            return set()
        key = (type_name, d)
        if key in memo:
            return memo[key]
        out = set()
        for name, local_type in locals_:
            if local_type in index.types and index.assignable(local_type, type_name):
                out.add(name)
        for owner, fname, ftype, static in index.fields:
            if static and index.assignable(ftype, type_name):
                out.add(f"{owner}.{fname}")
        if type_name in index.enums:
            for constant in index.enums[type_name]:
                out.add(f"{type_name}.{constant}")
        for ctor_type, params in index.constructors.items():
            if not index.assignable(ctor_type, type_name):
                continue
            slots = [sorted(sub(p["type"], d - 1)) for p in params]
            if any(not s for s in slots):
                continue
            for combo in itertools.product(*slots):
                out.add(f"new {ctor_type}({', '.join(combo)})")
        for owner, mname, params, returns, static in index.methods:
            if not returns or not index.assignable(returns, type_name):
                continue
            arg_slots = [sorted(sub(p["type"], d - 1)) for p in params]
            if any(not s for s in arg_slots):
                continue
            if static:
                for combo in itertools.product(*arg_slots):
                    out.add(f"{owner}.{mname}({', '.join(combo)})")
            else:
                receivers = sorted(sub(owner, d - 1))
                if not receivers:
                    continue
                for recv, combo in itertools.product(receivers, itertools.product(*arg_slots)):
                    out.add(f"{recv}.{mname}({', '.join(combo)})")
        for owner, fname, ftype, static in index.fields:
            if static or not index.assignable(ftype, type_name):
                continue
            for base in sorted(sub(owner, d - 1)):
                out.add(f"{base}.{fname}")
        memo[key] = out
        return out

    return terms(target, depth)


# -- complete-linkage clustering over the original degree matrix -----------------


def complete_linkage(n: int, degree, threshold: float):
    """Agglomerative clustering, merge criterion min-pairwise-degree >=
    threshold, candidates scanned row-major and recomputed from the original
    matrix each round (no incremental bookkeeping)."""
    clusters = [[i] for i in range(n)]

    def linkage(a, b) -> float:
        return min(degree[i][j] for i in a for j in b)

    while True:
        merged = False
        for i in range(len(clusters)):
            for j in range(i + 1, len(clusters)):
                if linkage(clusters[i], clusters[j]) >= threshold:
                    clusters[i] = clusters[i] + clusters[j]
                    del clusters[j]
                    merged = True
                    break
            if merged:
                break
        if not merged:
            return [tuple(sorted(c)) for c in clusters]


# -- popularity counting ----------------------------------------------------------


def count_creator_roots(print_walks):
    """Tally creator occurrences from pre-extracted (produced type, key)
    pairs; the test supplies them by walking parse trees itself."""
    counts = {}
    for produced, key in print_walks:
        counts.setdefault(produced, {})
        counts[produced][key] = counts[produced].get(key, 0) + 1
    return counts


def smoothed_probabilities(counts: dict, creator_keys: dict) -> dict:
    """Add-one smoothing over each type's full creator set."""
    probs = {}
    for type_name, observed in counts.items():
        keys = creator_keys[type_name]
        denom = sum(observed.values()) + len(keys)
        probs[type_name] = {k: (observed.get(k, 0) + 1) / denom for k in keys}
    return probs


# -- mean reciprocal rank ----------------------------------------------------------


def mrr_direct(ranks) -> float:
    total = 0.0
    for rank in ranks:
        total += 0.0 if rank is None else 1.0 / rank
    return total / len(ranks)


# -- hole counting straight from signatures ----------------------------------------


def count_holes_for_tokens(doc: dict, tokens) -> int:
    """Receiver + parameter slots for a token sequence, read directly from
    the model JSON (never through apigraph)."""
    index = ModelIndex(doc)
    by_token = {}
    for owner, mname, params, _returns, static in index.methods:
        by_token[f"{owner}.{mname}"] = (len(params), static, False)
    for ctor_type, params in index.constructors.items():
        by_token[f"{ctor_type}.new"] = (len(params), True, True)
    total = 0
    for token in tokens:
        nparams, static, _is_ctor = by_token[token]
        total += nparams + (0 if static else 1)
    return total
