"""Network text format, dataset CSV and atomic file output.

Network format, one directive per line, ``#`` starting a comment::

    network sprinkler
    var Rain 2
    var Wet 2
    parents Wet Rain
    cpt Rain : 0.8 0.2
    cpt Wet | Rain=0 : 0.9 0.1
    cpt Wet | Rain=1 : 0.2 0.8
"""
from __future__ import annotations

import csv
import io
import itertools
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import InputError
from .network import BayesNet, Dataset, Schema, Structure

ROW_SUM_TOLERANCE = 1e-6


def _fail(lineno: int, msg: str):
    raise InputError(f"line {lineno}: {msg}")


def parse_network(text: str) -> BayesNet:
    name = None
    variables: list[tuple[str, int]] = []
    parent_decl: dict[str, tuple[str, ...]] = {}
    rows: dict[str, dict[tuple[int, ...], tuple[int, list[float]]]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "network":
            if name is not None:
                _fail(lineno, "duplicate network header")
            if not rest or len(rest.split()) != 1:
                _fail(lineno, "expected 'network <name>'")
            name = rest
        elif name is None:
            _fail(lineno, "file must start with 'network <name>'")
        elif head == "var":
            parts = rest.split()
            if len(parts) != 2:
                _fail(lineno, "expected 'var <name> <cardinality>'")
            try:
                card = int(parts[1])
            except ValueError:
                _fail(lineno, f"cardinality {parts[1]!r} is not an integer")
            if card < 2:
                _fail(lineno, f"cardinality {card} < 2")
            if any(v == parts[0] for v, _ in variables):
                _fail(lineno, f"duplicate variable {parts[0]!r}")
            variables.append((parts[0], card))
        elif head == "parents":
            parts = rest.split()
            if not parts:
                _fail(lineno, "expected 'parents <child> [<parent>...]'")
            if parts[0] in parent_decl:
                _fail(lineno, f"parents of {parts[0]!r} declared twice")
            parent_decl[parts[0]] = tuple(parts[1:])
        elif head == "cpt":
            lhs, sep, probs_text = rest.partition(":")
            if not sep:
                _fail(lineno, "expected ':' before the probabilities")
            child, _, config_text = lhs.partition("|")
            child = child.strip()
            try:
                probs = [float(x) for x in probs_text.split()]
            except ValueError:
                _fail(lineno, f"non-numeric probability in {probs_text.strip()!r}")
            config = {}
            for item in filter(None, (x.strip() for x in config_text.split(","))):
                pname, eq, val = item.partition("=")
                if not eq:
                    _fail(lineno, f"expected <parent>=<value>, got {item!r}")
                try:
                    config[pname.strip()] = int(val)
                except ValueError:
                    _fail(lineno, f"value {val!r} is not an integer")
            rows.setdefault(child, {})
            key = tuple(sorted(config.items()))
            if key in rows[child]:
                _fail(lineno, f"duplicate cpt row for {child!r} {dict(key)}")
            rows[child][key] = (lineno, probs)
        else:
            _fail(lineno, f"unknown directive {head!r}")
    if name is None:
        raise InputError("empty network file")

    schema = Schema(tuple(v for v, _ in variables), tuple(c for _, c in variables))
    for child, ps in parent_decl.items():
        schema.index(child)
        for p in ps:
            schema.index(p)
    try:
        structure = Structure(schema, tuple(
            tuple(schema.index(p) for p in parent_decl.get(v, ())) for v in schema.names))
    except InputError as exc:
        if "cycle" in str(exc):
            raise InputError("cycle detected in parent declarations") from None
        raise

    cpts = []
    for i, var in enumerate(schema.names):
        ps = structure.parents[i]
        pnames = [schema.names[p] for p in ps]
        table = np.zeros(tuple(schema.cards[p] for p in ps) + (schema.cards[i],))
        given = rows.get(var, {})
        for key, (lineno, probs) in given.items():
            if sorted(k for k, _ in key) != sorted(pnames):
                _fail(lineno, f"cpt row for {var!r} must condition on exactly {pnames}")
            cfg = dict(key)
            idx = tuple(cfg[n] for n in pnames)
            for n, v in zip(pnames, idx):
                if not 0 <= v < schema.cards[schema.index(n)]:
                    _fail(lineno, f"value {v} out of range for {n!r}")
            if len(probs) != schema.cards[i]:
                _fail(lineno, f"expected {schema.cards[i]} probabilities, got {len(probs)}")
            if any(p < 0 for p in probs):
                _fail(lineno, "negative probability")
            total = sum(probs)
            if abs(total - 1.0) > ROW_SUM_TOLERANCE:
                _fail(lineno, f"probabilities of {var!r} {cfg} sum to {total!r}, not 1")
            table[idx] = np.array(probs) / total
        expected = int(np.prod([schema.cards[p] for p in ps], dtype=np.int64))
        if len(given) != expected:
            raise InputError(f"{var!r} has {len(given)} cpt rows, expected {expected}")
        cpts.append(table)
    return BayesNet(structure, tuple(cpts), name=name)


def write_network(net: BayesNet) -> str:
    schema = net.schema
    out = [f"network {net.name}"]
    out += [f"var {n} {c}" for n, c in zip(schema.names, schema.cards)]
    for i, ps in enumerate(net.structure.parents):
        if ps:
            out.append(f"parents {schema.names[i]} " + " ".join(schema.names[p] for p in ps))
    for i, ps in enumerate(net.structure.parents):
        child = schema.names[i]
        for idx in itertools.product(*(range(schema.cards[p]) for p in ps)):
            probs = " ".join(repr(float(x)) for x in net.cpts[i][idx])
            if ps:
                cfg = ",".join(f"{schema.names[p]}={v}" for p, v in zip(ps, idx))
                out.append(f"cpt {child} | {cfg} : {probs}")
            else:
                out.append(f"cpt {child} : {probs}")
    return "\n".join(out) + "\n"


def read_network(path) -> BayesNet:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise InputError(f"no such file: {path}") from None
    try:
        return parse_network(text)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from None


def dataset_to_csv(data: Dataset) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(data.schema.names)
    writer.writerows(data.rows.tolist())
    return buf.getvalue()


def dataset_from_csv(text: str, schema: Schema | None = None) -> Dataset:
    """Parse a dataset; without ``schema`` each cardinality is max value + 1 (at least 2)."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise InputError("dataset CSV is empty") from None
    rows = []
    for lineno, rec in enumerate(reader, start=2):
        if not rec:
            continue
        if len(rec) != len(header):
            raise InputError(f"line {lineno}: expected {len(header)} values, got {len(rec)}")
        try:
            rows.append([int(x) for x in rec])
        except ValueError:
            raise InputError(f"line {lineno}: non-integer value in {rec}") from None
    arr = np.array(rows, dtype=np.int64).reshape(len(rows), len(header))
    if schema is None:
        if arr.size and arr.min() < 0:
            raise InputError("negative value index in dataset")
        cards = [max(2, int(arr[:, j].max()) + 1) if len(rows) else 2 for j in range(len(header))]
        schema = Schema(tuple(header), tuple(cards))
    elif tuple(header) != schema.names:
        raise InputError(f"dataset columns {header} do not match network variables {list(schema.names)}")
    return Dataset(schema, arr)


def read_dataset(path, schema: Schema | None = None) -> Dataset:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise InputError(f"no such file: {path}") from None
    return dataset_from_csv(text, schema)


def write_atomic(path, text: str) -> None:
    """Write via a temp file in the same directory, then rename over ``path``."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
