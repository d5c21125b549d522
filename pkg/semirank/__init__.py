import os

__TITLE__ = 'DI-semirank'
__VERSION__ = 'v0.1.0'
__DESCRIPTION__ = 'OpenDILab Top-K Ranking under Semi-random Comparison Graphs via Spectral Reweighting'
__AUTHOR__ = "OpenDILab Contributors"
__AUTHOR_EMAIL__ = "opendilab.contact@gmail.com"
__version__ = __VERSION__

ORACLES = ['greedy', 'lp']
DEFAULT_CONFIG_PATH = os.path.join(os.path.dirname(__file__), 'semirank_default_config.yaml')
