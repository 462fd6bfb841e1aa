"""`code`: generator matrix, size, minimum distance and weight distribution."""
import argparse

from app.cli import deps
from app.schemas.run import RunConfig
from app.services.artifacts import code_report, write_json, write_text
from app.services.codes import format_matrix


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--emit-matrix", action="store_true", help="print the generator matrix file to stdout")


def run(config: RunConfig) -> int:
    G = deps.get_generator(config)
    if config.emit_matrix:
        print(format_matrix(G), end="")
        return 0
    report = code_report(G)
    write_json(deps.output_path(config, G.name, "code.json"), report)
    write_text(deps.output_path(config, G.name, "matrix.txt"), format_matrix(G))
    print(f"{G.name} {report.symbol}: {report.codewords} codewords, weights {report.weight_distribution}")
    return 0
