from .cli import cli_main, build_parser
