"""
.fan File Format

Line oriented, '#' starts a comment, whitespace separated integers:

    dim d
    rays n        followed by n lines of d integers
    cones k       followed by k lines of ray indices (0-based, maximal cones only)
    orbits        optional, followed by n orbit indices (0-based)
    weights       optional, followed by r entries (positive integer or inf)

Author: Mohammed Ismail AbdElmageid
"""
import logging
from pathlib import Path
from typing import List, Optional, Tuple, Union

from core.exceptions import FanFileError
from core.fan import Fan, OrbifoldWeights

logger = logging.getLogger(__name__)


def _content_lines(text: str) -> List[Tuple[int, List[str]]]:
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if tokens:
            lines.append((number, tokens))
    return lines


def _integers(tokens: List[str], number: int) -> List[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise FanFileError(f"expected integers, got {' '.join(tokens)!r}", number)


def parse_fan_text(text: str, name: str = "") -> Tuple[Fan, Optional[OrbifoldWeights]]:
    """Parse .fan text into a fan and optional weights"""
    lines = _content_lines(text)
    position = 0
    dim = None
    rays: List[Tuple[int, ...]] = []
    cones: List[Tuple[int, ...]] = []
    orbits: List[int] = []
    weights: Optional[OrbifoldWeights] = None

    def take_block(count: int, keyword: str, number: int):
        nonlocal position
        block = lines[position:position + count]
        if len(block) < count:
            raise FanFileError(f"'{keyword}' announces {count} lines, file ends after {len(block)}", number)
        position += count
        return block

    while position < len(lines):
        number, tokens = lines[position]
        keyword = tokens[0].lower()
        position += 1
        if keyword == "dim":
            if len(tokens) != 2:
                raise FanFileError("expected 'dim d'", number)
            dim = _integers(tokens[1:], number)[0]
        elif keyword == "rays":
            if dim is None:
                raise FanFileError("'rays' before 'dim'", number)
            count = _integers(tokens[1:2], number)[0] if len(tokens) > 1 else 0
            for row_number, row in take_block(count, "rays", number):
                vector = _integers(row, row_number)
                if len(vector) != dim:
                    raise FanFileError(f"ray has {len(vector)} entries, expected {dim}", row_number)
                rays.append(tuple(vector))
        elif keyword == "cones":
            count = _integers(tokens[1:2], number)[0] if len(tokens) > 1 else 0
            for row_number, row in take_block(count, "cones", number):
                cone = tuple(_integers(row, row_number))
                if any(j < 0 or j >= len(rays) for j in cone):
                    raise FanFileError(f"cone {cone} references a missing ray", row_number)
                cones.append(cone)
        elif keyword == "orbits":
            values = tokens[1:]
            while len(values) < len(rays) and position < len(lines):
                values += lines[position][1]
                position += 1
            orbits = _integers(values, number)
            if len(orbits) != len(rays):
                raise FanFileError(f"{len(orbits)} orbit labels for {len(rays)} rays", number)
        elif keyword == "weights":
            values = tokens[1:]
            if not values and position < len(lines):
                values = lines[position][1]
                position += 1
            try:
                weights = OrbifoldWeights.parse(" ".join(values))
            except ValueError as e:
                raise FanFileError(str(e), number)
        else:
            raise FanFileError(f"unknown keyword '{tokens[0]}'", number)

    if dim is None:
        raise FanFileError("missing 'dim' line")
    fan = Fan.from_maximal_cones(dim, rays, cones, orbit_of_ray=orbits, name=name)
    if weights is not None and len(weights.m) != fan.orbit_count:
        raise FanFileError(f"{len(weights.m)} weights for {fan.orbit_count} orbits")
    logger.debug("Parsed fan %s: d=%d, %d rays, %d maximal cones", name, dim, len(rays), len(cones))
    return fan, weights


def read_fan_file(path: Union[str, Path]) -> Tuple[Fan, Optional[OrbifoldWeights]]:
    """Read a .fan file; the fan is named after the file stem"""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise FanFileError(f"cannot read {path}: {e}")
    return parse_fan_text(text, name=path.stem)


def write_fan_text(fan: Fan, weights: Optional[OrbifoldWeights] = None) -> str:
    """Serialize a fan (maximal cones only) and optional weights"""
    out = [f"# {fan.describe()}", f"dim {fan.dim}", f"rays {fan.ray_count}"]
    out += [" ".join(str(x) for x in ray) for ray in fan.rays]
    maximal = [c for c in fan.maximal_cones if c]
    out.append(f"cones {len(maximal)}")
    out += [" ".join(str(j) for j in cone) for cone in maximal]
    if not fan.is_split:
        out.append("orbits " + " ".join(str(i) for i in fan.orbit_of_ray))
    if weights is not None:
        out.append("weights " + " ".join(weights.label().split(",")))
    return "\n".join(out) + "\n"
