"""
CloudChem command-line entry point.

Builds the argument parser, configures logging and maps toolkit errors to
exit codes: 0 success, 1 input error, 2 SCF non-convergence, 3 quadrature
failure.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from . import __version__
from .cli.commands import COMMANDS, DEFAULT_GRID, RunConfig
from .config import get_settings
from .errors import CloudChemError
from .models.core import BoxGridSpec, ScfSettings, SliceAxis
from .services.dft import XcName
from .services.reporting import UnitPreference

logger = logging.getLogger(__name__)

EXIT_INPUT_ERROR = 1


def configure_logging(verbose: bool = False) -> None:
    level = logging.INFO if verbose else getattr(logging, get_settings().log_level)
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )
    logging.getLogger().setLevel(level)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--geometry", type=Path, help="geometry file: label charge x y z per line")
    common.add_argument("--basis", type=Path, help="basis file: center_index zeta per line")
    common.add_argument("--orbitals", type=Path, help="orbital file: norb nbasis header, spin + coefficients")
    common.add_argument("--electrons", type=int, help="electron count (even, for SCF)")
    common.add_argument("--units", choices=[u.value for u in UnitPreference], default=UnitPreference.BOTH.value)
    common.add_argument("--grid", default=DEFAULT_GRID, help="export box as 'nx,ny,nz,halfwidth' (bohr)")
    common.add_argument("--plane", choices=[a.value for a in SliceAxis], help="export a plane slice normal to this axis")
    common.add_argument("--max-iter", type=int, default=100)
    common.add_argument("--etol", type=float, default=1e-10)
    common.add_argument("--dtol", type=float, default=1e-8)
    common.add_argument("--damping", type=float, default=0.3)
    common.add_argument("--xc", choices=[x.value for x in XcName], default=XcName.NONE.value)
    common.add_argument("--sic", action="store_true", help="add the Perdew-Zunger self-interaction correction")
    common.add_argument("--mass", type=float, default=1.0, help="electron mass multiplier")
    common.add_argument("--charge", type=float, default=1.0, help="elementary charge multiplier")
    common.add_argument("--out", type=Path, help="output directory")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="cloudchem",
        description="Hartree-Fock, charge densities and energy functionals for small atoms",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="subcommand", required=True)
    for name, handler in COMMANDS.items():
        summary = (handler.__doc__ or name).strip().splitlines()[0]
        subparsers.add_parser(name, parents=[common], help=summary)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    values = dict(
        subcommand=args.subcommand,
        geometry=args.geometry,
        basis=args.basis,
        orbitals=args.orbitals,
        electrons=args.electrons,
        units=args.units,
        grid=BoxGridSpec.parse(args.grid),
        plane=args.plane,
        scf=ScfSettings(
            max_iterations=args.max_iter,
            energy_tolerance=args.etol,
            density_tolerance=args.dtol,
            damping=args.damping,
        ),
        xc=args.xc,
        sic=args.sic,
        mass=args.mass,
        charge=args.charge,
    )
    if args.out is not None:
        values["out"] = args.out
    return RunConfig(**values)


def main(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand and return its exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)

    try:
        config = config_from_args(args)
        logger.info(f"Running {config.subcommand}")
        return COMMANDS[config.subcommand](config)
    except CloudChemError as e:
        logger.error(f"{args.subcommand} failed: {e.to_dict()}")
        print(f"error: {e.code}: {e.message}", file=sys.stderr)
        return e.exit_code
    except (ValidationError, ValueError, OSError) as e:
        logger.error(f"{args.subcommand} failed: {e}")
        print(f"error: INPUT_ERROR: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
