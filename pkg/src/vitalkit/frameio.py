"""Frame loading, validation and (de)serialization.

Frames are binary P6 PPM images (maxval 255). Sequences live on disk as
directories of files named ``frame_%06d.ppm``, consecutively numbered from
``frame_000000.ppm``. Single frames also travel as base64 payloads of the
same P6 bytes (RFC 4648 standard alphabet, no line breaks).
"""

from __future__ import annotations

import base64
import binascii
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import FrameError

FRAME_NAME_RE = re.compile(r"^frame_(\d{6})\.ppm$")


@dataclass(frozen=True)
class Frame:
    """A single RGB image, 8 bits per channel.

    ``pixels`` is a read-only uint8 array of shape (height, width, 3),
    row-major.
    """

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels, dtype=np.uint8)
        if px.ndim != 3 or px.shape[2] != 3:
            raise FrameError("bad frame file")
        if px.shape[0] < 1 or px.shape[1] < 1:
            raise FrameError("bad frame file")
        px = np.ascontiguousarray(px)
        px.flags.writeable = False
        object.__setattr__(self, "pixels", px)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def __eq__(self, other) -> bool:
        return isinstance(other, Frame) and np.array_equal(self.pixels, other.pixels)


@dataclass(frozen=True)
class FrameSequence:
    """Ordered frames sharing one geometry, captured at a fixed frame rate."""

    frames: tuple[Frame, ...]
    fps: float
    source_id: str = ""

    def __post_init__(self):
        frames = tuple(self.frames)
        if len(frames) < 2:
            raise FrameError("non-contiguous sequence")
        if self.fps <= 0:
            raise FrameError("fps must be positive")
        w, h = frames[0].width, frames[0].height
        for f in frames[1:]:
            if f.width != w or f.height != h:
                raise FrameError("heterogeneous frames")
        object.__setattr__(self, "frames", frames)

    def __len__(self) -> int:
        return len(self.frames)

    @property
    def width(self) -> int:
        return self.frames[0].width

    @property
    def height(self) -> int:
        return self.frames[0].height

    @property
    def duration(self) -> float:
        """Sequence length in seconds."""
        return len(self.frames) / self.fps


def _parse_p6(data: bytes) -> Frame:
    """Parse binary P6 bytes into a Frame. Raises FrameError on anything off."""
    if not data.startswith(b"P6"):
        raise FrameError("bad frame payload")
    # Header: magic, width, height, maxval, each separated by whitespace;
    # '#' starts a comment running to end of line.
    pos = 2
    fields = []
    while len(fields) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos] != 0x0A:
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        token = data[start:pos]
        if not token.isdigit():
            raise FrameError("bad frame file")
        fields.append(int(token))
    if pos >= len(data):
        raise FrameError("bad frame file")
    pos += 1  # single whitespace byte terminates the header
    width, height, maxval = fields
    if maxval != 255 or width < 1 or height < 1:
        raise FrameError("bad frame file")
    raster = data[pos : pos + width * height * 3]
    if len(raster) != width * height * 3:
        raise FrameError("bad frame file")
    pixels = np.frombuffer(raster, dtype=np.uint8).reshape(height, width, 3)
    return Frame(pixels)


def _to_p6(frame: Frame) -> bytes:
    header = f"P6\n{frame.width} {frame.height}\n255\n".encode("ascii")
    return header + frame.pixels.tobytes()


def read_frame(path: Path | str) -> Frame:
    """Read one binary P6 PPM file."""
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise FrameError("bad frame file") from exc
    try:
        return _parse_p6(data)
    except FrameError:
        raise FrameError("bad frame file") from None


def write_frame(frame: Frame, path: Path | str) -> None:
    Path(path).write_bytes(_to_p6(frame))


def load_sequence(dir_path: Path | str, fps: float, source_id: str | None = None) -> FrameSequence:
    """Load ``frame_%06d.ppm`` files from a directory into a FrameSequence.

    Files must be numbered consecutively from 000000; a gap (or fewer than
    two frames) raises "non-contiguous sequence", mixed dimensions raise
    "heterogeneous frames".
    """
    dir_path = Path(dir_path)
    indices = {}
    if dir_path.is_dir():
        for entry in dir_path.iterdir():
            m = FRAME_NAME_RE.match(entry.name)
            if m:
                indices[int(m.group(1))] = entry
    if len(indices) < 2:
        raise FrameError("non-contiguous sequence")
    expected = range(len(indices))
    if sorted(indices) != list(expected):
        raise FrameError("non-contiguous sequence")
    frames = [read_frame(indices[i]) for i in expected]
    widths = {f.width for f in frames}
    heights = {f.height for f in frames}
    if len(widths) > 1 or len(heights) > 1:
        raise FrameError("heterogeneous frames")
    if fps <= 0:
        raise FrameError("fps must be positive")
    return FrameSequence(tuple(frames), float(fps), source_id or dir_path.name)


def write_sequence(seq: FrameSequence, dir_path: Path | str) -> None:
    """Write a sequence back to disk as frame_%06d.ppm files."""
    dir_path = Path(dir_path)
    dir_path.mkdir(parents=True, exist_ok=True)
    for i, frame in enumerate(seq.frames):
        write_frame(frame, dir_path / f"frame_{i:06d}.ppm")


def encode_frame(frame: Frame) -> str:
    """Encode a frame as base64 of its P6 bytes (standard alphabet, no breaks)."""
    return base64.b64encode(_to_p6(frame)).decode("ascii")


def decode_base64_frame(payload: str) -> Frame:
    """Decode a base64 P6 payload into a Frame.

    Raises "bad encoding" for invalid base64 and "bad frame payload" when the
    decoded bytes are not a valid P6 image.
    """
    try:
        data = base64.b64decode(payload, validate=True)
    except (binascii.Error, ValueError) as exc:
        raise FrameError("bad encoding") from exc
    return _parse_p6(data)


def resize_bilinear(frame: Frame, out_w: int, out_h: int) -> Frame:
    """Resize with corner-aligned bilinear interpolation.

    Output samples map onto the input grid so that the first and last
    samples of each axis coincide with the input corners; each channel is
    rounded half-up into [0, 255]. Resizing to the original dimensions is
    the identity, and constant images stay constant.
    """
    if out_w < 1 or out_h < 1:
        raise FrameError("output dimensions must be at least 1x1")
    in_h, in_w = frame.height, frame.width

    def grid(n_out: int, n_in: int) -> np.ndarray:
        if n_out == 1 or n_in == 1:
            return np.zeros(n_out)
        # multiply before dividing: the integer product is exact in float64,
        # so the position is correctly rounded
        return np.arange(n_out) * (n_in - 1) / (n_out - 1)

    xs = grid(out_w, in_w)
    ys = grid(out_h, in_h)
    x0 = np.minimum(np.floor(xs).astype(np.int64), in_w - 1)
    y0 = np.minimum(np.floor(ys).astype(np.int64), in_h - 1)
    x1 = np.minimum(x0 + 1, in_w - 1)
    y1 = np.minimum(y0 + 1, in_h - 1)
    fx = (xs - x0)[np.newaxis, :, np.newaxis]
    fy = (ys - y0)[:, np.newaxis, np.newaxis]

    px = frame.pixels.astype(np.float64)
    top = px[y0][:, x0] * (1 - fx) + px[y0][:, x1] * fx
    bottom = px[y1][:, x0] * (1 - fx) + px[y1][:, x1] * fx
    out = top * (1 - fy) + bottom * fy
    out = np.clip(np.floor(out + 0.5), 0, 255).astype(np.uint8)
    return Frame(out)
