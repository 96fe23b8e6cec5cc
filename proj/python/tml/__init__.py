"""Python surface of the moment laboratory core."""

from ._tml import (
    __version__,
    all_twisted_sums,
    build_schedule,
    lambda_table,
    moment,
    transfer_check,
)

__all__ = [
    "__version__",
    "all_twisted_sums",
    "build_schedule",
    "lambda_table",
    "moment",
    "transfer_check",
]
