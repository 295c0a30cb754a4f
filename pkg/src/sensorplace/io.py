"""Line-oriented text format for instances.

::

    # comment
    nodes 9
    edge 0 1 150
    edge 1 0 3/2
    sources 0
    targets 8
    risk 0 1/2          (optional, one line per vertex)
    super_source 9      (optional)
    no_sensor 4 5       (optional, extra sensor-free vertices)
"""
from __future__ import annotations

import os
from fractions import Fraction

from .errors import InstanceFormatError, ValidationError
from .instance import Instance


def format_instance(inst: Instance) -> str:
    lines = [f"nodes {inst.n}"]
    for (u, v), c in zip(inst.edges, inst.capacities):
        lines.append(f"edge {u} {v} {c}")
    lines.append(" ".join(["sources", *map(str, sorted(inst.sources))]))
    lines.append(" ".join(["targets", *map(str, sorted(inst.targets))]))
    if inst.risk is not None:
        for v, r in sorted(inst.risk.items()):
            lines.append(f"risk {v} {r}")
    if inst.super_source is not None:
        lines.append(f"super_source {inst.super_source}")
    if inst.no_sensor:
        lines.append(" ".join(["no_sensor", *map(str, sorted(inst.no_sensor))]))
    return "\n".join(lines) + "\n"


def write_instance(inst: Instance, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_instance(inst))


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise InstanceFormatError(f"expected an integer, got {tok!r}", lineno) from None


def _rat(tok: str, lineno: int) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise InstanceFormatError(f"expected a rational number, got {tok!r}", lineno) from None


def parse_instance(text: str) -> Instance:
    n = None
    edges, caps = [], []
    seen: set[tuple[int, int]] = set()
    sources: list[int] = []
    targets: list[int] = []
    risk: dict[int, Fraction] | None = None
    super_source = None
    no_sensor: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, *rest = line.split()
        if n is None and key != "nodes":
            raise InstanceFormatError("first statement must be 'nodes <n>'", lineno)
        if key == "nodes":
            if n is not None:
                raise InstanceFormatError("repeated 'nodes' statement", lineno)
            if len(rest) != 1:
                raise InstanceFormatError("'nodes' takes one argument", lineno)
            n = _int(rest[0], lineno)
        elif key == "edge":
            if len(rest) != 3:
                raise InstanceFormatError("'edge' takes <u> <v> <capacity>", lineno)
            u, v = _int(rest[0], lineno), _int(rest[1], lineno)
            if (u, v) in seen:
                raise InstanceFormatError(f"duplicate edge ({u},{v})", lineno)
            seen.add((u, v))
            edges.append((u, v))
            caps.append(_rat(rest[2], lineno))
        elif key == "sources":
            sources += [_int(tok, lineno) for tok in rest]
        elif key == "targets":
            targets += [_int(tok, lineno) for tok in rest]
        elif key == "risk":
            if len(rest) != 2:
                raise InstanceFormatError("'risk' takes <v> <value>", lineno)
            risk = {} if risk is None else risk
            risk[_int(rest[0], lineno)] = _rat(rest[1], lineno)
        elif key == "super_source":
            if len(rest) != 1:
                raise InstanceFormatError("'super_source' takes one argument", lineno)
            super_source = _int(rest[0], lineno)
        elif key == "no_sensor":
            no_sensor += [_int(tok, lineno) for tok in rest]
        else:
            raise InstanceFormatError(f"unknown statement {key!r}", lineno)
    if n is None:
        raise InstanceFormatError("missing 'nodes' statement")
    try:
        return Instance(
            n, tuple(edges), tuple(caps), sources=frozenset(sources),
            targets=frozenset(targets), risk=risk, super_source=super_source,
            no_sensor=frozenset(no_sensor),
        )
    except ValidationError:
        raise
    except (TypeError, ValueError) as exc:  # pragma: no cover - defensive
        raise ValidationError(str(exc)) from exc


def read_instance(path: str | os.PathLike) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())
