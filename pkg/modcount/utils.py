"""
This library provides a number of low-level utilities: the global option pool and
the console output helpers everything else reports through.
"""
import os
from pathlib import Path
from typing import Any, Callable, Optional

import click

THREADS_ENV_VAR = 'MODCOUNT_THREADS'
OUTPUT_FORMATS = ('json', 'csv', 'text')

# Types for function references.
Echo = Callable[[str, Any], None]

# This is a function reference to facilitate unit testing.
_echo = click.secho


def default_threads() -> int:
    """
    A function that returns the default worker count.  This comes from the
    ``MODCOUNT_THREADS`` environment variable when it holds a positive integer and is
    ``1`` otherwise.

    :return: the default number of workers to use.
    """
    value = os.environ.get(THREADS_ENV_VAR, '').strip()
    return int(value) if value.isdigit() and int(value) > 0 else 1


class GlobalOptions(object):
    """
    A class that holds all our run-wide information.  This consists of the command
    line options that are not specific to any one subcommand.
    """
    def __init__(self):
        self._quiet = False
        self._verbose = 0
        self._threads = default_threads()
        self._output_format = 'json'
        self._out_path = None
        self._no_meta = False

    def set_quiet(self, value: bool) -> 'GlobalOptions':
        """
        This function sets whether or not the user has requested quiet operation.
        If this is ``True``, normal diagnostic output will be suppressed.

        :param value: whether or not quiet mode is in force.
        :return: this object, for fluency.
        """
        self._quiet = value
        return self

    def set_verbose(self, value: int) -> 'GlobalOptions':
        """
        This function sets the count of how many times the user specified the verbose
        option.  The higher the number, the more progress detail is reported.

        :param value: the number indicating verbosity.  Zero means no verbosity.
        :return: this object, for fluency.
        """
        self._verbose = value
        return self

    def set_threads(self, value: Optional[int]) -> 'GlobalOptions':
        """
        This function sets the number of worker processes trials may be spread across.
        ``None`` restores the environment-driven default.

        :param value: the worker count.
        :return: this object, for fluency.
        """
        self._threads = max(1, value) if value else default_threads()
        return self

    def set_output_format(self, value: str) -> 'GlobalOptions':
        if value not in OUTPUT_FORMATS:
            raise ValueError(f'Unsupported output format: {value}')
        self._output_format = value
        return self

    def set_out_path(self, value: Optional[Path]) -> 'GlobalOptions':
        self._out_path = value
        return self

    def set_no_meta(self, value: bool) -> 'GlobalOptions':
        """
        This function sets whether run metadata that varies between runs (the
        timestamp and tool version) should be left out of results.  Sampler metadata
        is always included.

        :param value: whether or not to leave run metadata out.
        :return: this object, for fluency.
        """
        self._no_meta = value
        return self

    def quiet(self) -> bool:
        return self._quiet

    def verbose(self) -> int:
        return self._verbose

    def threads(self) -> int:
        return self._threads

    def output_format(self) -> str:
        return self._output_format

    def out_path(self) -> Optional[Path]:
        return self._out_path

    def no_meta(self) -> bool:
        return self._no_meta


def out(text: str = '', respect_quiet: bool = True, **kwargs):
    """
    This function is a thin wrapper around ``click.secho`` and will only output the given
    information if the user says it's ok.  Diagnostics go to standard error so that
    standard output carries results only.

    :param text: the text to print out.
    :param respect_quiet: a flag noting whether the ``quiet`` attribute of global options
    should be respected.  If this is ``False``, text will always be output.
    """
    if not (global_options.quiet() and respect_quiet):
        kwargs.setdefault('err', True)
        _echo(text, **kwargs)


def verbose_out(text, level: int = 0, **kwargs):
    """
    This function is a thin wrapper around ``click.secho`` and will only output the given
    information if the user says it's ok via the verbose attribute of the global options.

    :param text: the text to print out.
    :param level: the level that the current verbose count must be larger than for output
    to occur.
    """
    if global_options.verbose() > level:
        if 'fg' not in kwargs:
            kwargs['fg'] = 'green'
        kwargs.setdefault('err', True)
        _echo(text, **kwargs)


def labeled_out(text, label: Optional[str] = None, respect_quiet: bool = True, **kwargs):
    """
    This function is a thin wrapper around ``out`` and will only output the given
    information if the user says it's ok.  If a label is provided, it is prepended to
    the given text.

    :param text: the text to print out.
    :param label: the label, if any, to prepend to the text.
    :param respect_quiet: a flag noting whether the ``quiet`` attribute of global options
    should be respected.  If this is ``False``, text will always be output.
    """
    if label:
        text = f'{label}: {text}'
    out(text, respect_quiet, **kwargs)


def warn(text, label: Optional[str] = 'Warning', respect_quiet: bool = False):
    """
    This function is a thin wrapper around ``labeled_out``.  If a label is not provided,
    it defaults to `Warning'.  Output will occur regardless of the ``quiet`` attribute of
    the global options.

    :param text: the text to print out.
    :param label: the label, if any, to prepend to the text.
    :param respect_quiet: a flag noting whether the ``quiet`` setting should be respected.
    """
    labeled_out(text, label, respect_quiet=respect_quiet, fg='yellow')


def error_out(*args, label: str = 'ERROR'):
    """
    A function to print messages to the end user as errors.  Each line of output will be
    prepended with the given label, which defaults to ``ERROR`` if it is not specified.
    Output will occur regardless of the ``quiet`` attribute of the global options.

    :param args: the list of lines to print out.
    :param label: the label, if any, to prepend to the text.
    """
    for line in args:
        labeled_out(line, label, respect_quiet=False, fg='bright_red')


def set_echo(echo: Optional[Echo] = None):
    global _echo
    _echo = echo or click.secho


global_options = GlobalOptions()
