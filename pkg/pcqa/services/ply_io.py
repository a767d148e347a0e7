"""PLY reading and writing.

Only vertex elements are turned into a cloud. Other elements (faces, edges)
are parsed past and ignored with a warning.
"""

import io
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np
from plyfile import PlyData, PlyElement
from plyfile import PlyParseError as PlyfileParseError

from pcqa.exceptions import PlyParseError, UsageError
from pcqa.models.cloud import PointCloud

logger = logging.getLogger(__name__)

DEFAULT_BIT_DEPTH = 10
BIT_DEPTH_COMMENT = "bit_depth"

# Byte sizes of the scalar types PLY 1.0 allows, under both naming schemes
PLY_TYPE_SIZES: dict[str, int] = {
    "char": 1,
    "uchar": 1,
    "short": 2,
    "ushort": 2,
    "int": 4,
    "uint": 4,
    "float": 4,
    "double": 8,
    "int8": 1,
    "uint8": 1,
    "int16": 2,
    "uint16": 2,
    "int32": 4,
    "uint32": 4,
    "float32": 4,
    "float64": 8,
}

POSITION_PROPS = ("x", "y", "z")
COLOR_PROPS = ("red", "green", "blue")
NORMAL_PROPS = ("nx", "ny", "nz")
COLOR_TYPES = {"uchar", "uint8"}


class PlyEncoding(str, Enum):
    """Supported PLY body encodings."""

    ASCII = "ascii"
    BINARY_LE = "binary_le"


@dataclass
class _ElementHeader:
    name: str
    count: int
    line_offset: int
    properties: list[tuple[str, str]] = field(default_factory=list)
    has_list: bool = False

    @property
    def row_size(self) -> int:
        return sum(PLY_TYPE_SIZES[kind] for _, kind in self.properties)

    def prop_type(self, name: str) -> str | None:
        for prop, kind in self.properties:
            if prop == name:
                return kind
        return None


@dataclass
class _Header:
    fmt: str
    length: int
    elements: list[_ElementHeader]
    comments: list[str]


def _scan_header(data: bytes) -> _Header:
    """Walk the header line by line so errors can name a byte offset."""
    if not data.startswith(b"ply"):
        raise PlyParseError("missing 'ply' magic number", 0)

    fmt: str | None = None
    elements: list[_ElementHeader] = []
    comments: list[str] = []
    offset = 0
    first = True

    while True:
        end = data.find(b"\n", offset)
        if end < 0:
            raise PlyParseError("header is not terminated by end_header", len(data))
        line_start = offset
        offset = end + 1
        try:
            line = data[line_start:end].decode("ascii").strip()
        except UnicodeDecodeError:
            raise PlyParseError("header contains non-ASCII bytes", line_start) from None
        words = line.split()
        if first:
            first = False
            if words != ["ply"]:
                raise PlyParseError("first header line must be 'ply'", line_start)
            continue
        if not words:
            continue

        keyword = words[0]
        if keyword == "format":
            if len(words) != 3 or words[2] != "1.0":
                raise PlyParseError(f"malformed format line: {line!r}", line_start)
            if words[1] not in ("ascii", "binary_little_endian"):
                raise PlyParseError(f"unsupported PLY format {words[1]!r}", line_start)
            fmt = words[1]
        elif keyword in ("comment", "obj_info"):
            comments.append(line[len(keyword) :].strip())
        elif keyword == "element":
            if len(words) != 3 or not words[2].isdigit():
                raise PlyParseError(f"malformed element line: {line!r}", line_start)
            elements.append(_ElementHeader(words[1], int(words[2]), line_start))
        elif keyword == "property":
            if not elements:
                raise PlyParseError("property declared before any element", line_start)
            if len(words) >= 2 and words[1] == "list":
                if len(words) != 5:
                    raise PlyParseError(f"malformed list property: {line!r}", line_start)
                elements[-1].has_list = True
                continue
            if len(words) != 3:
                raise PlyParseError(f"malformed property line: {line!r}", line_start)
            if words[1] not in PLY_TYPE_SIZES:
                raise PlyParseError(f"unsupported property type {words[1]!r}", line_start)
            elements[-1].properties.append((words[2], words[1]))
        elif keyword == "end_header":
            break
        else:
            raise PlyParseError(f"unexpected header keyword {keyword!r}", line_start)

    if fmt is None:
        raise PlyParseError("header has no format line", 0)
    return _Header(fmt=fmt, length=offset, elements=elements, comments=comments)


def _vertex_element(header: _Header) -> _ElementHeader:
    for element in header.elements:
        if element.name == "vertex":
            break
    else:
        raise PlyParseError("no vertex element declared", header.length)

    if element.has_list:
        raise PlyParseError("list properties on vertex elements are not supported", element.line_offset)
    for prop in POSITION_PROPS:
        if element.prop_type(prop) is None:
            raise PlyParseError(f"vertex element lacks property {prop!r}", element.line_offset)
    for group in (COLOR_PROPS, NORMAL_PROPS):
        present = [element.prop_type(p) is not None for p in group]
        if any(present) and not all(present):
            raise PlyParseError(f"vertex element declares only part of {group}", element.line_offset)
    for prop in COLOR_PROPS:
        kind = element.prop_type(prop)
        if kind is not None and kind not in COLOR_TYPES:
            raise PlyParseError(f"unsupported property type {kind!r} for {prop}", element.line_offset)
    return element


def _check_body_length(data: bytes, header: _Header, vertex: _ElementHeader) -> None:
    """Detect truncation up to the end of the vertex element."""
    if header.fmt == "binary_little_endian":
        need = header.length
        for element in header.elements:
            if element.has_list:
                # Variable-size rows; leave the check to the element reader
                return
            need += element.count * element.row_size
            if element is vertex:
                break
        if len(data) < need:
            raise PlyParseError(
                f"truncated body: vertex data needs {need} bytes, stream has {len(data)}",
                len(data),
            )
        return

    rows_before = 0
    for element in header.elements:
        if element is vertex:
            break
        rows_before += element.count

    offset = header.length
    rows_seen = 0
    n_props = len(vertex.properties)
    while rows_seen < rows_before + vertex.count:
        end = data.find(b"\n", offset)
        if end < 0:
            end = len(data)
        line = data[offset:end].strip()
        if not line:
            if end >= len(data):
                raise PlyParseError(
                    f"truncated body: expected {vertex.count} vertices, "
                    f"found {max(rows_seen - rows_before, 0)}",
                    len(data),
                )
            offset = end + 1
            continue
        if rows_seen >= rows_before and len(line.split()) != n_props:
            raise PlyParseError(
                f"vertex row {rows_seen - rows_before} has {len(line.split())} values, expected {n_props}",
                offset,
            )
        rows_seen += 1
        offset = end + 1


def _bit_depth_from_comments(comments: list[str]) -> int | None:
    for comment in comments:
        words = comment.split()
        if len(words) == 2 and words[0] == BIT_DEPTH_COMMENT and words[1].isdigit():
            return int(words[1])
    return None


def parse_ply(data: bytes, bit_depth: int | None = None) -> PointCloud:
    """Parse an ASCII or binary little-endian PLY stream into a cloud.

    Args:
        data: Complete PLY file contents.
        bit_depth: Geometry precision. Defaults to a ``bit_depth N`` header
            comment when present, otherwise 10.

    Raises:
        PlyParseError: Malformed header, truncated body or unsupported type.
    """
    header = _scan_header(data)
    vertex = _vertex_element(header)
    _check_body_length(data, header, vertex)

    for element in header.elements:
        if element.name != "vertex":
            logger.warning("Ignoring PLY element %r with %d entries", element.name, element.count)

    try:
        ply = PlyData.read(io.BytesIO(data), mmap=False)
    except (PlyfileParseError, ValueError) as exc:
        raise PlyParseError(f"unreadable PLY body: {exc}", header.length) from exc

    rows = ply["vertex"].data
    positions = np.column_stack([np.asarray(rows[p], dtype=np.float64) for p in POSITION_PROPS])
    if not np.all(np.isfinite(positions)):
        raise PlyParseError("vertex positions contain NaN or infinity", header.length)

    colors = None
    if vertex.prop_type("red") is not None:
        colors = np.column_stack([np.asarray(rows[p], dtype=np.uint8) for p in COLOR_PROPS])
    normals = None
    if vertex.prop_type("nx") is not None:
        normals = np.column_stack([np.asarray(rows[p], dtype=np.float64) for p in NORMAL_PROPS])

    if bit_depth is None:
        bit_depth = _bit_depth_from_comments(header.comments) or DEFAULT_BIT_DEPTH

    logger.debug(
        "Parsed %d vertices (%s, colors=%s, normals=%s)",
        len(positions),
        header.fmt,
        colors is not None,
        normals is not None,
    )
    return PointCloud(positions=positions, colors=colors, normals=normals, bit_depth=bit_depth)


def _exact_dtype(values: np.ndarray, allow_int: bool) -> str:
    """Narrowest PLY-storable dtype that reproduces values exactly."""
    if values.size == 0:
        return "i4" if allow_int else "f4"
    if allow_int and np.all(values == np.round(values)) and np.all(np.abs(values) < 2**31):
        return "i4"
    if np.array_equal(values.astype(np.float32).astype(np.float64), values):
        return "f4"
    return "f8"


def write_ply(cloud: PointCloud, encoding: PlyEncoding | str = PlyEncoding.BINARY_LE) -> bytes:
    """Serialize a cloud so that parse_ply reproduces it exactly."""
    encoding = PlyEncoding(encoding)
    position_dtype = _exact_dtype(cloud.positions, allow_int=True)
    fields: list[tuple[str, str]] = [(p, position_dtype) for p in POSITION_PROPS]
    if cloud.colors is not None:
        fields += [(p, "u1") for p in COLOR_PROPS]
    if cloud.normals is not None:
        normal_dtype = _exact_dtype(cloud.normals, allow_int=False)
        fields += [(p, normal_dtype) for p in NORMAL_PROPS]

    rows = np.empty(len(cloud), dtype=fields)
    for axis, prop in enumerate(POSITION_PROPS):
        rows[prop] = cloud.positions[:, axis]
    if cloud.colors is not None:
        for axis, prop in enumerate(COLOR_PROPS):
            rows[prop] = cloud.colors[:, axis]
    if cloud.normals is not None:
        for axis, prop in enumerate(NORMAL_PROPS):
            rows[prop] = cloud.normals[:, axis]

    ply = PlyData(
        [PlyElement.describe(rows, "vertex")],
        text=encoding is PlyEncoding.ASCII,
        byte_order="<",
        comments=[f"{BIT_DEPTH_COMMENT} {cloud.bit_depth}"],
    )
    output = io.BytesIO()
    ply.write(output)
    return output.getvalue()


def read_cloud(path: Path | str, bit_depth: int | None = None) -> PointCloud:
    """Read a PLY file from disk."""
    path = Path(path)
    if not path.is_file():
        raise UsageError(f"Point cloud file not found: {path}")
    logger.info("Reading %s", path)
    return parse_ply(path.read_bytes(), bit_depth=bit_depth)


def write_cloud(path: Path | str, cloud: PointCloud, encoding: PlyEncoding | str = PlyEncoding.BINARY_LE) -> Path:
    """Write a cloud to disk, creating parent directories."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(write_ply(cloud, encoding))
    logger.info("Wrote %d points to %s", len(cloud), path)
    return path
