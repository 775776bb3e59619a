from io import StringIO

import numpy as np
from dotenv import dotenv_values
from pydantic import ValidationError

from src.schemas.experiment_models import SweepConfig
from src.schemas.graph_models import Digraph
from src.schemas.network_models import Network

CONFIG_KEYS = set(SweepConfig.model_fields)


class FileFormatError(ValueError):
    """Raised when an arc-list, network, state or config text cannot be parsed."""


def _content_lines(text: str) -> list[str]:
    return [line.strip() for line in text.splitlines() if line.strip()]


def _parse_ints(line: str, what: str) -> list[int]:
    try:
        return [int(token) for token in line.split()]
    except ValueError:
        raise FileFormatError(f"{what} must be whitespace-separated integers, got '{line}'")


def digraph_to_text(D: Digraph) -> str:
    """First line n, then one `source target` line per arc, sorted."""
    return "".join([f"{D.n}\n"] + [f"{u} {v}\n" for u, v in D.arcs])


def _parse_arc_lines(lines: list[str]) -> Digraph:
    if not lines:
        raise FileFormatError("Arc list is empty; the first line must hold n")
    header = _parse_ints(lines[0], "Header")
    if len(header) != 1:
        raise FileFormatError(f"First line must hold only n, got '{lines[0]}'")
    arcs, seen = [], set()
    for number, line in enumerate(lines[1:], start=2):
        pair = _parse_ints(line, f"Line {number}")
        if len(pair) != 2:
            raise FileFormatError(f"Line {number} must hold `source target`, got '{line}'")
        arc = (pair[0], pair[1])
        if arc in seen:
            raise FileFormatError(f"Line {number} repeats the arc {arc[0]} {arc[1]}")
        seen.add(arc)
        arcs.append(arc)
    try:
        return Digraph.from_arcs(header[0], arcs)
    except ValueError as e:
        raise FileFormatError(f"Invalid digraph: {e}")


def parse_digraph(text: str) -> Digraph:
    return _parse_arc_lines(_content_lines(text))


def network_to_text(net: Network) -> str:
    return (
        digraph_to_text(net.graph)
        + "p: " + " ".join(map(str, net.p)) + "\n"
        + "th: " + " ".join(map(str, net.th)) + "\n"
    )


def parse_network(text: str) -> Network:
    """The arc list followed by `p: ...` and `th: ...` lines."""
    lines = _content_lines(text)
    if len(lines) < 3 or not lines[-2].startswith("p:") or not lines[-1].startswith("th:"):
        raise FileFormatError("Network file must end with a `p:` line and a `th:` line")
    graph = _parse_arc_lines(lines[:-2])
    p = _parse_ints(lines[-2][2:], "p")
    th = _parse_ints(lines[-1][3:], "th")
    try:
        return Network(graph=graph, p=tuple(p), th=tuple(th))
    except ValidationError as e:
        raise FileFormatError(f"Invalid network: {e}")


def state_to_text(state) -> str:
    return " ".join(str(int(s)) for s in state) + "\n"


def parse_state(text: str) -> np.ndarray:
    lines = _content_lines(text)
    if len(lines) != 1:
        raise FileFormatError(f"State file must hold exactly one line, got {len(lines)}")
    return np.asarray(_parse_ints(lines[0], "State"), dtype=np.int64)


def parse_config(text: str) -> SweepConfig:
    """Flat key=value lines; `#` starts a comment."""
    values = dotenv_values(stream=StringIO(text))
    unknown = set(values) - CONFIG_KEYS
    if unknown:
        raise FileFormatError(f"Unknown config keys: {', '.join(sorted(unknown))}")
    empty = [key for key, value in values.items() if not value]
    if empty:
        raise FileFormatError(f"Config keys without a value: {', '.join(sorted(empty))}")
    try:
        return SweepConfig(**values)
    except ValidationError as e:
        raise FileFormatError(f"Invalid sweep config: {e}")


def config_to_text(cfg: SweepConfig) -> str:
    fields = cfg.model_dump()
    fields["n_list"] = ",".join(map(str, cfg.n_list))
    fields["c_list"] = ",".join(map(str, cfg.c_list))
    return "".join(f"{key}={value}\n" for key, value in fields.items())
