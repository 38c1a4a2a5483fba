"""
    Run settings
    ============

    YAML run-configuration files. A file holds a mapping with ``version: 1``
    and any of the run parameters below; command line flags override it.

    .. Copyright:
        Copyright 2026 Hardy Sharp contributors under Apache License, Version 2.0.
        See file LICENSE for full license details.
"""

import yaml
import logging

from typing import Any, Final

from hardy_sharp.helpers import SettingsException, convert_to_float_list

_LOGGER: Final = logging.getLogger(__name__)

SETTINGS_KEYS: Final = (
    "p_grid",
    "theta_points",
    "tol",
    "slack",
    "samples",
    "degree",
    "seed",
    "budget",
    "restarts",
    "decay",
    "epsilons",
    "angle",
    "format",
    "output",
)


class RunSettingsFile:
    def __init__(self, filename: str):
        self.filename = filename

        _LOGGER.debug("Loading settings file: %s", filename)
        try:
            with open(filename, "r") as file:
                self._configuration = yaml.safe_load(file)
        except OSError as error:
            raise SettingsException(f"Cannot read settings file {filename}: {error.strerror}.")
        except yaml.YAMLError:
            raise SettingsException(f"Invalid settings file {filename}.")

        if not isinstance(self._configuration, dict):
            raise SettingsException(f"Invalid settings file {filename}. Expected a mapping.")

    def overrides(self) -> dict[str, Any]:
        """Run parameters set by the file, keyed like RunConfig fields"""
        match self._configuration.get("version"):
            case 1:
                pass
            case None:
                raise SettingsException(f"Invalid settings file {self.filename}. Version must be 1.")
            case version:
                raise SettingsException(f"Invalid settings file {self.filename}. Version {version}.")

        unknown = sorted(set(self._configuration) - set(SETTINGS_KEYS) - {"version"})
        if unknown:
            raise SettingsException(f"Invalid settings file {self.filename}. Unknown keys: {', '.join(unknown)}.")

        values = {key: self._configuration[key] for key in SETTINGS_KEYS if key in self._configuration}
        for key in ("p_grid", "epsilons"):
            if key in values:
                values[key] = convert_to_float_list(values[key])
        return values
