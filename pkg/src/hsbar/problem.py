"""Problem documents (JSON) and the machine-readable result document."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ParseError, ValidationError
from .f2core import MAX_DIM, parse_subset, subset_string
from .forms import CupForm, RokhlinMap, validate_rokhlin
from .rmod import rank_table


@dataclass(frozen=True)
class ProblemFile:
    cup: CupForm
    mu: RokhlinMap
    name: str | None = None

    @property
    def b1(self) -> int:
        return self.mu.n

    def to_json(self) -> dict:
        doc = {
            "b1": self.b1,
            "cup": self.cup.to_json(),
            "rokhlin": {
                "values": {subset_string(x): self.mu(x) for x in range(1 << self.b1)}
            },
        }
        if self.name is not None:
            doc["name"] = self.name
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"


def _field(doc: dict, key: str, kind, where: str):
    if key not in doc:
        raise ParseError("missing field", field=where)
    value = doc[key]
    if not isinstance(value, kind) or isinstance(value, bool) and kind is not bool:
        raise ParseError(f"expected {getattr(kind, '__name__', kind)}", field=where)
    return value


def _bit(value, where: str) -> int:
    if value not in (0, 1) or isinstance(value, bool):
        raise ParseError("expected 0 or 1", field=where)
    return value


def _subset(text, n: int, where: str) -> int:
    if not isinstance(text, str):
        raise ParseError("expected a subset string", field=where)
    try:
        return parse_subset(text, n)
    except ValueError as exc:
        raise ParseError(str(exc), field=where) from None


def problem_from_dict(doc) -> ProblemFile:
    if not isinstance(doc, dict):
        raise ParseError("a problem document must be an object")
    n = _field(doc, "b1", int, "b1")
    if n < 0:
        raise ParseError("b1 must be non-negative", field="b1")
    if n > MAX_DIM:
        raise ParseError(f"b1 is at most {MAX_DIM}", field="b1")

    coeffs = {}
    for i, entry in enumerate(_field(doc, "cup", list, "cup")):
        where = f"cup[{i}]"
        if not isinstance(entry, dict):
            raise ParseError("expected an object", field=where)
        idx = _field(entry, "indices", list, f"{where}.indices")
        if len(idx) != 3 or not all(isinstance(k, int) and not isinstance(k, bool) for k in idx):
            raise ParseError("expected three integers", field=f"{where}.indices")
        if not (1 <= idx[0] < idx[1] < idx[2] <= n):
            raise ParseError(f"indices must increase within 1..{n}", field=f"{where}.indices")
        value = _field(entry, "value", int, f"{where}.value")
        if tuple(idx) in coeffs:
            raise ParseError("repeated triple", field=f"{where}.indices")
        coeffs[tuple(idx)] = value
    cup = CupForm.from_dict(n, coeffs)

    rk = _field(doc, "rokhlin", dict, "rokhlin")
    if ("values" in rk) == ("anf" in rk):
        raise ParseError("give exactly one of 'values' and 'anf'", field="rokhlin")
    if "values" in rk:
        table = _field(rk, "values", dict, "rokhlin.values")
        if len(table) != 1 << n:
            raise ParseError(
                f"expected {1 << n} entries, got {len(table)}", field="rokhlin.values"
            )
        values = [0] * (1 << n)
        for key, bit in table.items():
            where = f"rokhlin.values[{key!r}]"
            values[_subset(key, n, where)] = _bit(bit, where)
        mu = RokhlinMap(n, tuple(values))
    else:
        anf = _field(rk, "anf", dict, "rokhlin.anf")
        monos = []
        for key, bit in anf.items():
            where = f"rokhlin.anf[{key!r}]"
            if _bit(bit, where):
                monos.append(_subset(key, n, where))
        mu = RokhlinMap.from_anf(n, monos)

    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        raise ParseError("expected a string", field="name")
    validate_rokhlin(mu, cup)
    return ProblemFile(cup, mu, name)


def parse_problem(source: str | Path) -> ProblemFile:
    """Parse a problem document given as a path or as JSON text."""
    text = str(source)
    if isinstance(source, Path) or not text.lstrip().startswith("{"):
        path = Path(source)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from None
    return problem_from_dict(doc)


@dataclass
class ResultDocument:
    input: dict
    shift: int
    quota: int
    pages: dict
    final: list
    candidates: list
    unique: bool
    diagnostics: dict = field(default_factory=dict)

    @classmethod
    def from_report(cls, problem: ProblemFile, report) -> "ResultDocument":
        columns = list(range(problem.b1, -1, -1))
        pages = {
            "E1": rank_table(report.e1.pieces(), columns),
            "E2": rank_table(report.e2.pieces(), columns),
            "Einf": [rank_table(p, columns) for p in report.einfinity],
        }
        diag = dict(report.diagnostics)
        diag["dropped_by_orbit"] = [m.to_json() for m in diag.get("dropped_by_orbit", [])]
        unique = report.unique
        return cls(
            input=problem.to_json(),
            shift=report.shift,
            quota=report.quota,
            pages=pages,
            final=unique.to_json() if unique is not None else [],
            candidates=[m.to_json() for m in report.final],
            unique=unique is not None,
            diagnostics=diag,
        )

    def to_json(self) -> dict:
        return {
            "input": self.input,
            "shift": self.shift,
            "quota": self.quota,
            "pages": self.pages,
            "final": self.final,
            "candidates": self.candidates,
            "unique": self.unique,
            "diagnostics": self.diagnostics,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def loads(cls, text: str) -> "ResultDocument":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, line=exc.lineno) from None
        try:
            return cls(**doc)
        except TypeError as exc:
            raise ValidationError(f"not a result document: {exc}") from None
