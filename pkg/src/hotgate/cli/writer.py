"""Write run results: curve CSV plus a JSON sidecar with provenance."""
import os
import tempfile
from collections.abc import Callable
from pathlib import Path
from typing import Union

import numpy as np
import srsly
from wasabi import msg

from hotgate.cli.scenarios import CurveRecord, EchoRecord, Record


def _atomic_write(path: Path, write: Callable[[Path], None]):
    """Write through a temporary file in the target directory, then rename."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    os.close(fd)
    try:
        write(Path(tmp))
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.remove(tmp)


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    return value


def write_record(record: Record, out_dir: Union[str, Path], name: str) -> list[Path]:
    """Write a result to out_dir.

    Curves produce ``<name>.csv`` with columns delta_t, infidelity_trivial,
    infidelity_optimized, encoding_a, encoding_b and ``<name>.json`` with the
    run metadata; echo checks produce the JSON file only.

    Args:
        record (CurveRecord | EchoRecord): The result.
        out_dir (str | Path): Target directory, created if missing.
        name (str): File stem.

    Returns:
        list[Path]: Written files.
    """
    out_dir = Path(out_dir)
    written = []
    metadata = _jsonable(record.metadata)
    if isinstance(record, CurveRecord):
        csv_path = out_dir / f"{name}.csv"
        frame = record.to_frame()
        _atomic_write(csv_path, lambda p: frame.to_csv(p, index=False, float_format="%.17g"))
        written.append(csv_path)
    elif isinstance(record, EchoRecord):
        metadata["max_residual"] = record.max_residual
        metadata["residuals"] = list(record.residuals)

    json_path = out_dir / f"{name}.json"
    _atomic_write(json_path, lambda p: srsly.write_json(p, metadata))
    written.append(json_path)
    for path in written:
        msg.info(f"Wrote {path}")
    return written
