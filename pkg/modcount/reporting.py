"""
This library turns result documents into the text the tool prints: JSON (the
default), CSV or aligned text.  Results go to standard output or the ``--out`` file;
diagnostics never do.
"""
import csv
import io
import json
import math
from datetime import datetime, timezone
from typing import Any, Dict, List, Mapping, Optional, Sequence

import click
import numpy as np

from modcount import VERSION
from modcount.utils import global_options


def _plain(value: Any) -> Any:
    """
    A function that converts a value into something JSON can carry: numpy scalars and
    arrays become Python values, tuples become lists, complex numbers become pairs and
    non-finite floats become ``None``.

    :param value: the value to convert.
    :return: the converted value.
    """
    if isinstance(value, dict):
        return {str(key): _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, np.generic):
        return _plain(value.item())
    if isinstance(value, complex):
        return [_plain(value.real), _plain(value.imag)]
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def result_document(command: str, payload: Mapping[str, Any], config: Optional[Mapping[str, Any]] = None,
                    sampler: Optional[Mapping[str, Any]] = None) -> Dict[str, Any]:
    """
    A function that wraps a command's results with the configuration that produced them
    and, unless ``--no-meta`` is in force, the tool version and a timestamp.

    :param command: the subcommand name.
    :param payload: the results.
    :param config: the configuration echo, if any.
    :param sampler: the sampler description, for commands that sample.
    :return: the result document.
    """
    document: Dict[str, Any] = {'command': command}

    if not global_options.no_meta():
        document['meta'] = {'version': VERSION, 'timestamp': datetime.now(timezone.utc).isoformat()}
    if config is not None:
        document['config'] = dict(config)
    if sampler is not None:
        document['sampler'] = dict(sampler)

    document['result'] = dict(payload)
    return _plain(document)


def _flatten(value: Any, prefix: str = '') -> List[Sequence[str]]:
    if isinstance(value, dict):
        rows = []
        for key, item in value.items():
            rows.extend(_flatten(item, f'{prefix}.{key}' if prefix else str(key)))
        return rows
    if isinstance(value, list) and any(isinstance(item, (dict, list)) for item in value):
        rows = []
        for index, item in enumerate(value):
            rows.extend(_flatten(item, f'{prefix}[{index}]'))
        return rows
    if isinstance(value, list):
        value = ' '.join(str(item) for item in value)
    return [(prefix, '' if value is None else str(value))]


def format_csv(document: Mapping[str, Any], table: Optional[List[Mapping[str, Any]]] = None) -> str:
    """
    A function that renders a result as CSV.  A table, when given, is written with one
    column per key; otherwise the document is flattened into ``key,value`` rows.

    :param document: the result document.
    :param table: the rows of the result's main table, if it has one.
    :return: the CSV text.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')

    if table:
        table = _plain(list(table))
        headers = list(table[0].keys())
        writer.writerow(headers)
        for row in table:
            writer.writerow([' '.join(map(str, value)) if isinstance(value, list) else
                             '' if value is None else value for value in (row.get(key) for key in headers)])
    else:
        writer.writerow(('key', 'value'))
        writer.writerows(_flatten(document))

    return buffer.getvalue()


def format_text(document: Mapping[str, Any]) -> str:
    rows = _flatten(document)
    width = max((len(key) for key, _ in rows), default=0)
    return ''.join(f'{key.ljust(width)}  {value}\n' for key, value in rows)


def format_result(document: Mapping[str, Any], table: Optional[List[Mapping[str, Any]]] = None) -> str:
    output_format = global_options.output_format()

    if output_format == 'csv':
        return format_csv(document, table)
    if output_format == 'text':
        return format_text(document)

    return json.dumps(document, indent=2) + '\n'


def emit(document: Mapping[str, Any], table: Optional[List[Mapping[str, Any]]] = None):
    """
    A function that writes a result in the selected format to the ``--out`` file, or to
    standard output when there is none.

    :param document: the result document.
    :param table: the rows of the result's main table, used for CSV output.
    """
    text = format_result(document, table)
    path = global_options.out_path()

    if path is None:
        click.echo(text, nl=False)
    else:
        path.write_text(text, encoding='utf-8')
