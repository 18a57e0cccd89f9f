"""JSON reading and writing for Gram matrices: ``{"rank": n, "gram": [[...]]}``."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .errors import InvalidGram
from .lattice import Lattice, validate


def parse_gram(obj, require_definite: bool = True) -> Lattice:
    if not isinstance(obj, dict):
        raise InvalidGram("Gram document must be a JSON object")
    if "gram" not in obj:
        raise InvalidGram("missing 'gram' field")
    gram = obj["gram"]
    if not isinstance(gram, list) or not all(isinstance(r, list) for r in gram):
        raise InvalidGram("'gram' must be a list of lists")
    rank = obj.get("rank", len(gram))
    if isinstance(rank, bool) or not isinstance(rank, int) or rank != len(gram):
        raise InvalidGram(f"'rank' {rank!r} does not match the {len(gram)} rows of 'gram'")
    return validate(gram, require_definite=require_definite)


def loads_gram(text: str, require_definite: bool = True) -> Lattice:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidGram(f"not valid JSON: {exc}") from exc
    return parse_gram(obj, require_definite)


def read_gram(path, require_definite: bool = True) -> Lattice:
    return loads_gram(Path(path).read_text(), require_definite)


def gram_document(L) -> dict:
    gram = L.gram if isinstance(L, Lattice) else L
    return {"rank": len(gram), "gram": [list(r) for r in gram]}


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def dumps(obj) -> str:
    """Stable single-line JSON used for every machine output."""
    return json.dumps(obj, sort_keys=True) + "\n"


def gram_digest(L) -> str:
    data = canonical_json(gram_document(L)).encode()
    return "sha256:" + hashlib.sha256(data).hexdigest()
