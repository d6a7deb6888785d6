"""Line-delimited JSON instance files and report serialization.

Every integer is written as a decimal string, so values of any size survive
a round trip. On input plain JSON integers are accepted too.

An instance line looks like::

    {"ambient_rank": "2", "relations": [], "A": [["1","0"]], "B": [["0","1"]],
     "phi": [["0","1"]], "words": {"w": [{"t": "1"}, {"k": ["1","0"]}]}}
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .hnn import Base, HnnInstance, InvalidInstanceError, Stable, Word
from .lattice import Lattice


class ParseError(ValueError):
    """Malformed instance data; ``path`` locates the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass
class InstanceRecord:
    instance: HnnInstance
    words: dict[str, Word] = field(default_factory=dict)
    name: str | None = None


def _int(x: Any, path: str) -> int:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise ParseError(path, f"expected an integer string, got {x!r}")
    try:
        return int(x)
    except ValueError:
        raise ParseError(path, f"not an integer: {x!r}") from None


def _vec(x: Any, path: str, m: int) -> tuple[int, ...]:
    if not isinstance(x, list):
        raise ParseError(path, "expected a list of integer strings")
    if len(x) != m:
        raise ParseError(path, f"expected {m} entries, got {len(x)}")
    return tuple(_int(v, f"{path}[{i}]") for i, v in enumerate(x))


def _vecs(obj: dict, key: str, path: str, m: int, required: bool = True) -> list[tuple[int, ...]]:
    if key not in obj:
        if required:
            raise ParseError(f"{path}.{key}", "missing field")
        return []
    x = obj[key]
    if not isinstance(x, list):
        raise ParseError(f"{path}.{key}", "expected a list of vectors")
    return [_vec(v, f"{path}.{key}[{i}]", m) for i, v in enumerate(x)]


def parse_word(x: Any, path: str, m: int) -> Word:
    if not isinstance(x, list):
        raise ParseError(path, "expected a list of letters")
    letters = []
    for i, letter in enumerate(x):
        p = f"{path}[{i}]"
        if not isinstance(letter, dict):
            raise ParseError(p, "expected an object with key 't' or 'k'")
        if "t" in letter:
            e = _int(letter["t"], p + ".t")
            if e not in (1, -1):
                raise ParseError(p + ".t", "stable exponent must be 1 or -1")
            idx = _int(letter.get("i", 0), p + ".i")
            letters.append(Stable(e, idx))
        elif "k" in letter:
            letters.append(Base(_vec(letter["k"], p + ".k", m)))
        else:
            raise ParseError(p, "expected key 't' or 'k'")
    return Word(tuple(letters))


def parse_record(obj: Any, path: str = "$") -> InstanceRecord:
    if not isinstance(obj, dict):
        raise ParseError(path, "expected a JSON object")
    if "ambient_rank" not in obj:
        raise ParseError(f"{path}.ambient_rank", "missing field")
    m = _int(obj["ambient_rank"], f"{path}.ambient_rank")
    if m < 1:
        raise ParseError(f"{path}.ambient_rank", "must be positive")
    rel = _vecs(obj, "relations", path, m, required=False)
    A = _vecs(obj, "A", path, m)
    phi = _vecs(obj, "phi", path, m)
    if len(phi) != len(A):
        raise ParseError(f"{path}.phi", f"{len(phi)} images listed for {len(A)} generators of A")
    try:
        inst = HnnInstance.from_generators(m, A, phi, rel)
    except InvalidInstanceError as exc:
        raise ParseError(path, "; ".join(exc.problems)) from None
    if "B" in obj:
        B = Lattice.span(_vecs(obj, "B", path, m) + list(inst.relations.basis), m)
        if B != inst.B:
            raise ParseError(f"{path}.B", f"listed B {B} differs from the image of A, {inst.B}")
    words = {}
    raw_words = obj.get("words", {})
    if not isinstance(raw_words, dict):
        raise ParseError(f"{path}.words", "expected an object mapping names to words")
    for name, w in raw_words.items():
        words[name] = parse_word(w, f"{path}.words.{name}", m)
    name = obj.get("name")
    if name is not None and not isinstance(name, str):
        raise ParseError(f"{path}.name", "expected a string")
    return InstanceRecord(inst, words, name)


def parse_text(text: str) -> list[InstanceRecord]:
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"line {lineno}", f"invalid JSON: {exc.msg}") from None
        out.append(parse_record(obj, f"line {lineno}"))
    if not out:
        raise ParseError("$", "no instances in file")
    return out


def load(path: str | Path) -> list[InstanceRecord]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(str(path), f"cannot read: {exc.strerror}") from None
    return parse_text(text)


# -- serialization ----------------------------------------------------------

def ints(v) -> list[str]:
    return [str(int(x)) for x in v]


def rows(m) -> list[list[str]]:
    return [ints(r) for r in m]


def word_json(w: Word) -> list[dict]:
    out = []
    for x in w:
        if isinstance(x, Stable):
            d = {"t": str(x.exp)}
            if x.index:
                d["i"] = str(x.index)
            out.append(d)
        else:
            out.append({"k": ints(x.vec)})
    return out


def record_json(rec: InstanceRecord) -> dict:
    inst = rec.instance
    obj: dict[str, Any] = {}
    if rec.name is not None:
        obj["name"] = rec.name
    obj.update({
        "ambient_rank": str(inst.ambient_rank),
        "relations": rows(inst.relations.basis),
        "A": rows(inst.A.basis),
        "B": rows(inst.B.basis),
        "phi": rows(inst.phi.images),
    })
    if rec.words:
        obj["words"] = {k: word_json(w) for k, w in rec.words.items()}
    return obj


def dumps_line(obj: Any) -> str:
    return json.dumps(obj, sort_keys=False, separators=(",", ":"))


def serialize(records: list[InstanceRecord]) -> str:
    return "".join(dumps_line(record_json(r)) + "\n" for r in records)


def lattice_json(lat: Lattice) -> dict:
    return {"ambient_rank": str(lat.ambient_rank), "basis": rows(lat.basis)}


def number_json(x: int | float | Fraction) -> str:
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return str(x)
