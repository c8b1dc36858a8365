"""
Coded frame files.

Layout: one JSON header line, then every frame bit-packed (numpy packbits,
MSB first) as systematic | parity1 | parity2, each frame padded to whole
bytes. The header carries the params hash so a file is only decoded with the
configuration that wrote it.
"""

import json
import logging
from pathlib import Path
from typing import Dict, List, Tuple, Union

import numpy as np
from numpy.typing import NDArray

from core.errors import FrameFormatError
from core.scpcc.codec import CodedFrame
from core.scpcc.params import ScPccParams

logger = logging.getLogger(__name__)

FORMAT_NAME = "scpcc-frames"
FORMAT_VERSION = 1


def bytes_to_source_blocks(data: bytes, params: ScPccParams) -> NDArray[np.uint8]:
    """Split a byte string into (n_frames, L, T) source bits, zero padded; at least one frame."""
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8))
    per_frame = params.frame_length * params.block_size
    n_frames = max(1, -(-bits.size // per_frame))
    padded = np.zeros(n_frames * per_frame, dtype=np.uint8)
    padded[:bits.size] = bits
    return padded.reshape(n_frames, params.frame_length, params.block_size)


def source_blocks_to_bytes(blocks: NDArray[np.uint8], payload_bytes: int) -> bytes:
    bits = np.asarray(blocks, dtype=np.uint8).reshape(-1)[:payload_bytes * 8]
    return np.packbits(bits).tobytes()


def _frame_bits(params: ScPccParams) -> Tuple[int, int]:
    systematic = params.frame_length * params.block_size
    parity = params.coupled_blocks * params.encoded_length
    return systematic, parity


def write_frames(path: Union[str, Path], params: ScPccParams, frames: List[CodedFrame],
                 payload_bytes: int) -> Path:
    path = Path(path)
    systematic_bits, parity_bits = _frame_bits(params)
    header = {
        'format': FORMAT_NAME,
        'version': FORMAT_VERSION,
        'config_hash': params.config_hash(),
        'frames': len(frames),
        'payload_bytes': int(payload_bytes),
        'systematic_bits': systematic_bits,
        'parity_bits': parity_bits
    }
    with path.open("wb") as handle:
        handle.write((json.dumps(header, sort_keys=True) + "\n").encode("utf-8"))
        for frame in frames:
            bits = np.concatenate([frame.systematic.ravel(), frame.parity1.ravel(), frame.parity2.ravel()])
            handle.write(np.packbits(bits.astype(np.uint8)).tobytes())
    logger.info(f"Wrote {len(frames)} coded frames to {path}")
    return path


def read_frames(path: Union[str, Path], params: ScPccParams) -> Tuple[List[CodedFrame], Dict]:
    """Read a frame file written with `params`; returns the frames and the header."""
    path = Path(path)
    raw = path.read_bytes()
    newline = raw.find(b"\n")
    if newline < 0:
        raise FrameFormatError(f"{path}: missing header line")
    try:
        header = json.loads(raw[:newline].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FrameFormatError(f"{path}: unreadable header ({exc})") from exc

    if header.get('format') != FORMAT_NAME or header.get('version') != FORMAT_VERSION:
        raise FrameFormatError(f"{path}: not a {FORMAT_NAME} v{FORMAT_VERSION} file")
    if header.get('config_hash') != params.config_hash():
        raise FrameFormatError(f"{path}: frames were written with a different configuration")

    systematic_bits, parity_bits = _frame_bits(params)
    frame_bits = systematic_bits + 2 * parity_bits
    frame_bytes = -(-frame_bits // 8)
    body = np.frombuffer(raw[newline + 1:], dtype=np.uint8)
    n_frames = int(header.get('frames', -1))
    if n_frames < 0 or body.size != n_frames * frame_bytes:
        raise FrameFormatError(
            f"{path}: body holds {body.size} bytes, expected {n_frames} frames of {frame_bytes}"
        )

    frames = []
    parity_shape = (params.coupled_blocks, params.encoded_length)
    for index in range(n_frames):
        chunk = body[index * frame_bytes:(index + 1) * frame_bytes]
        bits = np.unpackbits(chunk)[:frame_bits]
        frames.append(CodedFrame(
            systematic=bits[:systematic_bits].reshape(params.frame_length, params.block_size),
            parity1=bits[systematic_bits:systematic_bits + parity_bits].reshape(parity_shape),
            parity2=bits[systematic_bits + parity_bits:].reshape(parity_shape)
        ))
    return frames, header
