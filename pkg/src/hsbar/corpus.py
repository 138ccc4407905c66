"""Bundled example problems."""

from __future__ import annotations

from .errors import ValidationError
from .problem import ProblemFile, problem_from_dict

# name -> (description, problem document); the Borromean family takes m
_DOCS = {
    "s3": ("the three-sphere", {"b1": 0, "cup": [], "rokhlin": {"values": {"": 0}}}),
    "s2xs1": (
        "S^2 x S^1: both spin structures bound",
        {"b1": 1, "cup": [], "rokhlin": {"values": {"": 0, "1": 0}}},
    ),
    "trefoil0": (
        "zero surgery on the trefoil: Rokhlin invariants 0 and 1",
        {"b1": 1, "cup": [], "rokhlin": {"anf": {"1": 1}}},
    ),
    "split2": (
        "b1 = 2 with vanishing cup product, invariants equal in pairs",
        {"b1": 2, "cup": [], "rokhlin": {"anf": {"1": 1}}},
    ),
    "t3": (
        "the three-torus: seven spin structures with invariant 0, one with 1",
        {
            "b1": 3,
            "cup": [{"indices": [1, 2, 3], "value": 1}],
            "rokhlin": {
                "values": {"": 1, "1": 0, "2": 0, "3": 0, "12": 0, "13": 0, "23": 0, "123": 0}
            },
        },
    ),
    "borromean-arf": (
        "zero surgery on the Borromean rings with an Arf-invariant-one knot tied in",
        {
            "b1": 3,
            "cup": [{"indices": [1, 2, 3], "value": 1}],
            "rokhlin": {"anf": {"123": 1, "1": 1}},
        },
    ),
}

BORROMEAN_M = "borromean-m"
BORROMEAN_M_DESCRIPTION = "band sum of m Borromean rings (m even): cup product m, constant invariant"


def example_names() -> list[str]:
    return sorted(list(_DOCS) + [BORROMEAN_M])


def describe_example(name: str) -> str:
    if name == BORROMEAN_M:
        return BORROMEAN_M_DESCRIPTION
    if name not in _DOCS:
        raise ValidationError(f"unknown example {name!r}")
    return _DOCS[name][0]


def borromean_m(m: int = 2) -> dict:
    if m % 2:
        raise ValidationError(f"borromean-m needs an even m, got {m}")
    return {
        "b1": 3,
        "cup": [{"indices": [1, 2, 3], "value": m}],
        "rokhlin": {"anf": {}},
    }


def example_document(name: str, m: int = 2) -> dict:
    if name == BORROMEAN_M:
        doc = borromean_m(m)
    elif name in _DOCS:
        doc = dict(_DOCS[name][1])
    else:
        raise ValidationError(f"unknown example {name!r}; try list-examples")
    doc["name"] = name
    return doc


def example(name: str, m: int = 2) -> ProblemFile:
    return problem_from_dict(example_document(name, m))


def example_corpus(m: int = 2) -> dict[str, ProblemFile]:
    return {name: example(name, m) for name in example_names()}
