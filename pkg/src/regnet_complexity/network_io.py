"""Network file parsing and atomic artifact writes."""

from __future__ import annotations

import json
import logging
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional

import pandas as pd

from .model import NetworkSpec, OffsetSequence
from .numerics import format_number

logger = logging.getLogger(__name__)


@dataclass(slots=True)
class LoadedNetwork:
    spec: NetworkSpec
    offsets: Optional[OffsetSequence]
    source: Optional[Path] = None


def _parse_offsets(document: Dict[str, Any]) -> Optional[OffsetSequence]:
    raw = document.get("offsets")
    if raw is None:
        return None
    if isinstance(raw, dict):
        vectors, rule = raw.get("vectors"), raw.get("rule", "finite")
    else:
        vectors, rule = raw, document.get("rule", "finite")
    if not vectors:
        raise ValueError("'offsets' must list at least one vector")
    return OffsetSequence.from_lists(vectors, rule)


def parse_network(document: Dict[str, Any]) -> LoadedNetwork:
    missing = [key for key in ("a", "K", "T", "s") if key not in document]
    if missing:
        raise ValueError(f"Network document is missing {', '.join(missing)}")
    spec = NetworkSpec.from_matrices(
        document["K"],
        document["T"],
        document["s"],
        document["a"],
        mode=document.get("mode", "autonomous"),
        names=document.get("names"),
    )
    declared = document.get("dimension")
    if declared is not None and int(declared) != spec.dimension:
        raise ValueError(f"'dimension' is {declared} but K has {spec.dimension} rows")
    return LoadedNetwork(spec, _parse_offsets(document))


def load_network(path: Path | str) -> LoadedNetwork:
    """Read a JSON network file; decimal literals are kept as text and parsed exactly."""

    source = Path(path).expanduser().resolve()
    if not source.exists():
        raise FileNotFoundError(f"Arquivo de rede nao encontrado: {source}")
    logger.info("Loading network from %s", source)
    with source.open("r", encoding="utf-8") as handle:
        document = json.load(handle, parse_float=str)
    loaded = parse_network(document)
    loaded.source = source
    return loaded


def network_to_dict(spec: NetworkSpec, offsets: Optional[OffsetSequence] = None) -> Dict[str, Any]:
    document: Dict[str, Any] = {
        "dimension": spec.dimension,
        "mode": spec.mode,
        "names": list(spec.names),
        "a": format_number(spec.a),
        "K": [[format_number(v) for v in row] for row in spec.K],
        "T": [[format_number(v) for v in row] for row in spec.T],
        "s": [list(row) for row in spec.s],
    }
    if offsets is not None:
        document["offsets"] = {
            "rule": offsets.rule,
            "vectors": [[format_number(v) for v in vector] for vector in offsets.vectors],
        }
    return document


def _atomic_write(target: Path, text: str) -> Path:
    target.parent.mkdir(parents=True, exist_ok=True)
    handle, temporary = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(handle, "w", encoding="utf-8", newline="") as stream:
            stream.write(text)
        os.replace(temporary, target)
    except BaseException:
        Path(temporary).unlink(missing_ok=True)
        raise
    return target


def save_frame(dataframe: pd.DataFrame, path: Path | str) -> Path:
    target = _atomic_write(Path(path), dataframe.to_csv(index=False, lineterminator="\n"))
    logger.info("Table stored at %s", target)
    return target


def save_report(report: Dict[str, Any], path: Path | str) -> Path:
    target = _atomic_write(Path(path), json.dumps(report, indent=2, sort_keys=False) + "\n")
    logger.info("Report stored at %s", target)
    return target
