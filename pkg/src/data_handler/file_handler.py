import logging
import os
from pathlib import Path
from typing import Sequence

import pandas as pd
from pydantic import BaseModel, ValidationError

from src.data_handler.formats import (
    FileFormatError,
    digraph_to_text,
    network_to_text,
    parse_config,
    parse_digraph,
    parse_network,
    parse_state,
    state_to_text,
)
from src.dynamics.network import State, validate_state
from src.schemas.experiment_models import CellStats, SweepConfig, SweepRecord
from src.schemas.graph_models import Digraph
from src.schemas.network_models import Network

logger = logging.getLogger(__name__)

RECORD_COLUMNS = ["n", "c", "rep", "seed", "alpha", "tau", "capped_alpha", "capped_tau"]
STATS_COLUMNS = [
    "n", "c", "reps", "median_alpha", "p999_alpha", "max_alpha",
    "median_tau", "p999_tau", "max_tau", "capped_fraction",
]


class FileHandler:
    """Reads and writes the plain-text, CSV and JSON artifacts of the toolkit."""

    def _ensure_parent_dir(self, file_path: str) -> None:
        """Create the directory of file_path if it doesn't exist."""
        parent = os.path.dirname(file_path)
        if parent:
            os.makedirs(parent, exist_ok=True)

    def _validate_file_format(self, file_path: str, allowed_formats: Sequence[str]) -> str:
        """Validate file format and return the extension."""
        file_extension = os.path.splitext(file_path)[1][1:].lower()
        if file_extension not in allowed_formats:
            raise ValueError(
                f"Invalid file format for {file_path}. Allowed formats are: {', '.join(allowed_formats)}"
            )
        return file_extension

    def _read_text(self, file_path: str) -> str:
        if not os.path.exists(file_path):
            raise FileNotFoundError(f"File not found: {file_path}")
        return Path(file_path).read_text()

    def _write_text(self, text: str, file_path: str) -> str:
        self._ensure_parent_dir(file_path)
        Path(file_path).write_text(text)
        logger.debug("Wrote %s", file_path)
        return file_path

    def read_digraph(self, file_path: str) -> Digraph:
        return parse_digraph(self._read_text(file_path))

    def write_digraph(self, D: Digraph, file_path: str) -> str:
        return self._write_text(digraph_to_text(D), file_path)

    def read_network(self, file_path: str) -> Network:
        return parse_network(self._read_text(file_path))

    def write_network(self, net: Network, file_path: str) -> str:
        return self._write_text(network_to_text(net), file_path)

    def read_state(self, file_path: str, net: Network) -> State:
        state = parse_state(self._read_text(file_path))
        try:
            return validate_state(net, state)
        except ValueError as e:
            raise FileFormatError(f"State in {file_path} does not fit the network: {e}")

    def write_state(self, state: State, file_path: str) -> str:
        return self._write_text(state_to_text(state), file_path)

    def read_config(self, file_path: str) -> SweepConfig:
        return parse_config(self._read_text(file_path))

    def _write_frame(self, rows: list[dict], columns: list[str], file_path: str) -> str:
        self._validate_file_format(file_path, ["csv"])
        self._ensure_parent_dir(file_path)
        # object dtype keeps integer columns with gaps from turning into floats
        frame = pd.DataFrame(rows, columns=columns, dtype=object)
        frame.to_csv(file_path, index=False, lineterminator="\n")
        logger.info("Wrote %d rows to %s", len(frame), file_path)
        return file_path

    def _read_frame(self, file_path: str, columns: list[str]) -> pd.DataFrame:
        self._validate_file_format(file_path, ["csv"])
        if not os.path.exists(file_path):
            raise FileNotFoundError(f"File not found: {file_path}")
        try:
            frame = pd.read_csv(file_path, dtype=str, keep_default_na=False)
        except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
            raise FileFormatError(f"Error reading CSV file {file_path}: {e}")
        if list(frame.columns) != columns:
            raise FileFormatError(f"{file_path} must have the header {','.join(columns)}")
        return frame

    def write_records(self, records: Sequence[SweepRecord], file_path: str) -> str:
        rows = [record.model_dump(by_alias=True) for record in records]
        return self._write_frame(rows, RECORD_COLUMNS, file_path)

    def read_records(self, file_path: str) -> list[SweepRecord]:
        frame = self._read_frame(file_path, RECORD_COLUMNS)
        records = []
        for number, row in enumerate(frame.to_dict(orient="records"), start=2):
            try:
                records.append(SweepRecord.model_validate({k: v or None for k, v in row.items()}))
            except ValidationError as e:
                raise FileFormatError(f"Line {number} of {file_path} is not a valid record: {e}")
        return records

    def write_stats(self, stats: Sequence[CellStats], file_path: str) -> str:
        return self._write_frame([cell.model_dump() for cell in stats], STATS_COLUMNS, file_path)

    def write_json(self, model: BaseModel, file_path: str) -> str:
        self._validate_file_format(file_path, ["json"])
        return self._write_text(model.model_dump_json(indent=2) + "\n", file_path)
