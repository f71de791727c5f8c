"""
This library reads experiment configuration files.  A configuration file is a YAML
mapping whose keys mirror the long option names of the subcommands, written with
either dashes or underscores.  Values from the file act as option defaults, so
anything given on the command line wins.
"""
from pathlib import Path
from typing import Any, Dict, List, Mapping

import yaml

from modcount.errors import ConfigError
from modcount.schema import ArraySchema, BooleanSchema, IntegerSchema, NumberSchema, ObjectSchema, OneOfSchema, \
    StringSchema
from modcount.schema_validator import SchemaValidator

_rational_schema = OneOfSchema(
    StringSchema().pattern(r'^\s*-?\d+(\.\d+)?(\s*/\s*\d+)?\s*$'),
    NumberSchema()
)
_list_schema = OneOfSchema(
    StringSchema().min_length(1),
    ArraySchema(min_items=1).items(OneOfSchema(StringSchema().min_length(1), IntegerSchema()))
)
_schema = ObjectSchema() \
    .properties(
        family=_list_schema,
        pattern=StringSchema().min_length(1),
        host_file=StringSchema().min_length(1),
        n=IntegerSchema(minimum=1),
        n_grid=_list_schema,
        p=NumberSchema(minimum=0, maximum=1),
        p_exp=_rational_schema,
        p_scale=NumberSchema().exclusive_minimum(0),
        q=IntegerSchema(minimum=2, maximum=1 << 16),
        trials=IntegerSchema(minimum=1),
        seed=IntegerSchema(minimum=0, maximum=(1 << 64) - 1),
        alpha=_rational_schema,
        exposure=StringSchema().enum('direct', 'two-step'),
        cap=IntegerSchema(minimum=0),
        exact=BooleanSchema(),
        study=BooleanSchema(),
        blocks=IntegerSchema(minimum=0),
        degree=IntegerSchema(minimum=1)
    ) \
    .additional_properties(False)
_config_file_schema = SchemaValidator(schema=_schema)

# Keys whose values may be given as lists but are passed to options as comma-joined text.
_joined_keys = ('family', 'n_grid')


def normalize_config(content: Mapping[str, Any]) -> Dict[str, Any]:
    """
    A function that validates raw configuration content and converts it into option
    defaults keyed by option parameter names.

    :param content: the parsed configuration mapping.
    :return: the option defaults.
    """
    if content is None:
        return {}
    if not isinstance(content, dict):
        raise ConfigError('A configuration file must contain a mapping of option names to values.')
    content = {str(key).replace('-', '_'): value for key, value in content.items()}

    if not _config_file_schema.validate(content):
        raise ConfigError(f'Bad configuration file format: {_config_file_schema.error}')

    for key in _joined_keys:
        if isinstance(content.get(key), list):
            content[key] = ','.join(str(item) for item in content[key])
    for key in ('p_exp', 'alpha'):
        if key in content:
            content[key] = str(content[key])

    return content


def read_config_file(path: Path) -> Dict[str, Any]:
    """
    A function that reads and validates a configuration file.

    :param path: the path of the YAML file to read.
    :return: the option defaults it describes.
    """
    try:
        with path.open(encoding='utf-8') as fd:
            content = yaml.safe_load(fd)
    except OSError as error:
        raise ConfigError(f'Cannot read configuration file {path}: {error}')
    except yaml.YAMLError as error:
        raise ConfigError(f'Configuration file {path} is not valid YAML: {error}')

    return normalize_config(content)


def default_map(content: Dict[str, Any], commands: List[str]) -> Dict[str, Dict[str, Any]]:
    """
    A function that spreads option defaults across subcommands in the form ``click``
    expects for its ``default_map``.  Each subcommand only looks up the options it has.

    :param content: the option defaults.
    :param commands: the subcommand names.
    :return: the default map.
    """
    return {command: dict(content) for command in commands}
