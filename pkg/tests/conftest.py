import os
import sys

import numpy as np
import pytest


PROJECT_ROOT = os.path.dirname(os.path.dirname(__file__))
SRC_DIR = os.path.join(PROJECT_ROOT, "src")
if SRC_DIR not in sys.path:
	sys.path.insert(0, SRC_DIR)

from setcalc import catalog, config
from setcalc.classes import Grid1D
from setcalc.handler import SetcalcHandler


@pytest.fixture()
def grid():
	"""Default profile grid; odd n puts a node on 0."""
	return Grid1D(-1.0, 1.0, 401)


@pytest.fixture()
def coarse_grid():
	return Grid1D(-1.0, 1.0, 81)


@pytest.fixture()
def rng():
	return np.random.default_rng(20240601)


@pytest.fixture()
def sign(grid):
	return catalog.build("sign", grid)


@pytest.fixture()
def zero(grid):
	return catalog.build("zero", grid)


@pytest.fixture()
def abs_class(grid):
	return catalog.build("abs", grid)


@pytest.fixture()
def clean_config(monkeypatch):
	"""Config state with no SETCALC_* variables and no dotenv lookup."""
	monkeypatch.setattr(config, "_dotenv_loaded", True)
	monkeypatch.setattr(config, "_custom_dotenv_path", None)
	for key in config._SETCALC_CONFIG_KEYS + ("SETCALC_CONFIG",):
		monkeypatch.delenv(key, raising=False)
	return config


@pytest.fixture(autouse=True)
def _reset_package_logger():
	import logging

	logger = logging.getLogger("setcalc")
	saved = list(logger.handlers)
	yield
	for handler in list(logger.handlers):
		if isinstance(handler, SetcalcHandler) and handler not in saved:
			logger.removeHandler(handler)
