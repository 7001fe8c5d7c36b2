"""
Parsers and serializers for geometry, basis and orbital files.

Geometry:  ``label charge x y z`` per line, bohr.
Basis:     ``center_index zeta [l]`` per line; ``l`` must be 0.
Orbitals:  header ``norb nbasis``, then ``spin c1 ... c_nbasis`` with spin u or d.

``#`` starts a comment in every format. Floats are written with ``repr`` so
parse, serialize, parse is the identity.
"""

import logging
from pathlib import Path
from typing import Iterator, List, Tuple

from pydantic import ValidationError

from ..errors import InputFormatError, OrbitalValidationError
from ..models.core import (
    DeterminantWavefunction,
    NuclearFrame,
    Nucleus,
    Spin,
    SpinOrbital,
    StoBasis,
    StoPrimitive,
)
from ..models.validators import OrbitalValidator
from .integrals import overlap_matrix

logger = logging.getLogger(__name__)


def _data_lines(text: str) -> Iterator[Tuple[int, List[str]]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if content:
            yield number, content.split()


def _float(token: str, line: int, what: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise InputFormatError(f"invalid {what} '{token}'", line=line) from None


def _int(token: str, line: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise InputFormatError(f"invalid {what} '{token}'", line=line) from None


def _first_error(e: ValidationError) -> str:
    return e.errors()[0]["msg"].removeprefix("Value error, ")


def parse_geometry(text: str) -> NuclearFrame:
    """Parse ``label charge x y z`` lines into a frame."""
    nuclei = []
    seen = {}
    for line, fields in _data_lines(text):
        if len(fields) != 5:
            raise InputFormatError(f"expected 'label charge x y z', got {len(fields)} fields", line=line)
        label = fields[0]
        charge = _float(fields[1], line, "charge")
        position = tuple(_float(f, line, "coordinate") for f in fields[2:])
        try:
            nucleus = Nucleus(label=label, charge=charge, position=position)
        except ValidationError as e:
            raise InputFormatError(_first_error(e), line=line) from None
        if position in seen:
            raise InputFormatError(f"duplicate position, same as line {seen[position]}", line=line)
        seen[position] = line
        nuclei.append(nucleus)
    if not nuclei:
        raise InputFormatError("geometry contains no nuclei")
    return NuclearFrame(nuclei=tuple(nuclei))


def parse_basis(text: str, frame: NuclearFrame) -> StoBasis:
    """Parse ``center_index zeta [l]`` lines, attaching each primitive to its nucleus."""
    primitives = []
    for line, fields in _data_lines(text):
        if len(fields) not in (2, 3):
            raise InputFormatError(f"expected 'center_index zeta [l]', got {len(fields)} fields", line=line)
        center = _int(fields[0], line, "center index")
        zeta = _float(fields[1], line, "exponent")
        angular_momentum = _int(fields[2], line, "angular momentum") if len(fields) == 3 else 0
        if not 0 <= center < frame.size:
            raise InputFormatError(
                f"center index {center} out of range for {frame.size} nuclei", line=line
            )
        try:
            primitives.append(
                StoPrimitive(
                    zeta=zeta,
                    center=center,
                    position=frame.nuclei[center].position,
                    angular_momentum=angular_momentum,
                )
            )
        except ValidationError as e:
            raise InputFormatError(_first_error(e), line=line) from None
    if not primitives:
        raise InputFormatError("basis contains no primitives")
    return StoBasis(primitives=tuple(primitives))


def parse_orbitals(text: str, basis: StoBasis) -> DeterminantWavefunction:
    """Parse an orbital file and check it against the basis overlap."""
    lines = list(_data_lines(text))
    if not lines:
        raise InputFormatError("orbital file is empty")
    header_line, header = lines[0]
    if len(header) != 2:
        raise InputFormatError("expected header 'norb nbasis'", line=header_line)
    n_orbitals = _int(header[0], header_line, "orbital count")
    n_basis = _int(header[1], header_line, "basis size")
    if n_basis != basis.size:
        raise InputFormatError(
            f"orbital file declares {n_basis} basis functions, basis has {basis.size}",
            line=header_line,
        )
    rows = lines[1:]
    if len(rows) != n_orbitals:
        raise InputFormatError(f"header declares {n_orbitals} orbitals, found {len(rows)}", line=header_line)

    orbitals = []
    for line, fields in rows:
        if len(fields) != n_basis + 1:
            raise InputFormatError(f"expected spin plus {n_basis} coefficients", line=line)
        try:
            spin = Spin(fields[0])
        except ValueError:
            raise InputFormatError(f"spin must be 'u' or 'd', got '{fields[0]}'", line=line) from None
        coefficients = tuple(_float(f, line, "coefficient") for f in fields[1:])
        orbitals.append(SpinOrbital(coefficients=coefficients, spin=spin))

    wavefunction = DeterminantWavefunction(orbitals=tuple(orbitals))
    try:
        return OrbitalValidator.validate(wavefunction, overlap_matrix(basis))
    except OrbitalValidationError:
        logger.error("Orbital file failed S-orthonormality check")
        raise


def serialize_geometry(frame: NuclearFrame) -> str:
    lines = [
        " ".join([n.label, repr(n.charge)] + [repr(c) for c in n.position]) for n in frame.nuclei
    ]
    return "\n".join(lines) + "\n"


def serialize_basis(basis: StoBasis) -> str:
    return "\n".join(f"{p.center} {p.zeta!r}" for p in basis.primitives) + "\n"


def serialize_orbitals(wavefunction: DeterminantWavefunction, n_basis: int = 0) -> str:
    if wavefunction.orbitals:
        n_basis = len(wavefunction.orbitals[0].coefficients)
    lines = [f"{wavefunction.electron_count} {n_basis}"]
    for orbital in wavefunction.orbitals:
        lines.append(" ".join([orbital.spin.value] + [repr(c) for c in orbital.coefficients]))
    return "\n".join(lines) + "\n"


def _read(path: Path) -> str:
    return Path(path).read_text(encoding="utf-8")


def load_geometry(path: Path) -> NuclearFrame:
    return parse_geometry(_read(path))


def load_basis(path: Path, frame: NuclearFrame) -> StoBasis:
    return parse_basis(_read(path), frame)


def load_orbitals(path: Path, basis: StoBasis) -> DeterminantWavefunction:
    return parse_orbitals(_read(path), basis)
