import csv
from typing import IO, Iterable, List, Sequence

from ditk import logging

FLOAT_FORMAT = '%.17g'


def fmt_float(x: float) -> str:
    return FLOAT_FORMAT % float(x)


def write_csv(f: IO, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    writer = csv.writer(f, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt_float(v) if isinstance(v, float) else v for v in row])


def read_csv(f: IO) -> List[dict]:
    return list(csv.DictReader(f))


def set_verbosity(quiet: bool = False) -> None:
    level = logging.WARNING if quiet else logging.INFO
    logging.try_init_root(level)
    logging.getLogger().setLevel(level)
