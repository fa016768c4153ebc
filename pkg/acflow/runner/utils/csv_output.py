"""
CSV writers with fixed headers.
"""

import logging
from pathlib import Path
from typing import Dict, Iterable, List, Sequence

import pandas as pd

from acflow.config.constants import CSV_FLOAT_FORMAT

logger = logging.getLogger(__name__)


def to_frame(rows: Iterable[Dict], columns: Sequence[str]) -> pd.DataFrame:
    """DataFrame with exactly the given columns, in order; missing values stay empty."""
    return pd.DataFrame(list(rows)).reindex(columns=list(columns))


def write_csv(rows: Iterable[Dict], columns: Sequence[str], path) -> pd.DataFrame:
    frame = to_frame(rows, columns)
    frame.to_csv(Path(path), index=False, float_format=CSV_FLOAT_FORMAT, na_rep='')
    logger.info(f"Wrote {len(frame)} rows to {path}")
    return frame


def read_csv(path) -> List[Dict]:
    return pd.read_csv(Path(path)).to_dict(orient='records')
