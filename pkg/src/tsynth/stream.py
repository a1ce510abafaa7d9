"""Unlimited synthesis: framed epoch streaming over any writable byte sink.

Each epoch e emits one epoch-header frame followed by epoch_size sample
frames. Sample stream ids come from a 64-bit mix of (epoch, index), so no
epoch recycles the base dataset's ids (plain sample indices) or another
epoch's, yet any single epoch is replayable from (seed, e) alone.

Frames are length-self-describing:

    epoch header:  "TSE0" | epoch u32 | count u32 | C u32 | N u32
    sample:        "TSS0" | epoch u32 | index u32 | C u32 | N u32
                   | composite N f32 | labels C*N f32   (little-endian)

Generation runs on a producer thread feeding a bounded queue; a slow sink
therefore blocks generation (backpressure) instead of buffering without
limit. A sink that raises on write tears the stream down as StreamClosed.
"""

from __future__ import annotations

import queue
import struct
import threading
from typing import BinaryIO, Iterator

import numpy as np

from .core import EngineConfig, epoch_stream_id
from .errors import ParseError, StreamClosed
from .labels import NUM_CHANNELS
from .mixer import synthesize

FRAME_EPOCH = b"TSE0"
FRAME_SAMPLE = b"TSS0"
FRAME_HEAD = struct.Struct("<4sIIII")


def epoch_header_bytes(epoch: int, count: int, n: int) -> bytes:
    return FRAME_HEAD.pack(FRAME_EPOCH, epoch, count, NUM_CHANNELS, n)


def sample_frame_bytes(
    seed: int, epoch: int, index: int, n: int, config: EngineConfig | None = None
) -> bytes:
    s = synthesize(seed, epoch_stream_id(epoch, index), n, config)
    head = FRAME_HEAD.pack(FRAME_SAMPLE, epoch, index, NUM_CHANNELS, n)
    payload = np.concatenate([s.composite, s.labels.ravel()]).astype("<f4")
    return head + payload.tobytes()


def iter_epoch_frames(
    seed: int, epoch: int, epoch_size: int, n: int, config: EngineConfig | None = None
) -> Iterator[bytes]:
    """All frames of one epoch, in emission order; replay-identical."""
    yield epoch_header_bytes(epoch, epoch_size, n)
    for index in range(epoch_size):
        yield sample_frame_bytes(seed, epoch, index, n, config)


def stream_unlimited(
    sink: BinaryIO,
    seed: int,
    epoch_size: int,
    n: int,
    config: EngineConfig | None = None,
    epochs: int | None = None,
    queue_size: int = 64,
) -> int:
    """Write epoch frames to the sink until `epochs` runs out (None = forever).

    Returns the number of frames written. A broken sink raises StreamClosed.
    """
    frames = queue.Queue(maxsize=queue_size)
    stop = threading.Event()

    def produce() -> None:
        epoch = 0
        while not stop.is_set() and (epochs is None or epoch < epochs):
            for frame in iter_epoch_frames(seed, epoch, epoch_size, n, config):
                while not stop.is_set():
                    try:
                        frames.put(frame, timeout=0.1)
                        break
                    except queue.Full:
                        continue
                if stop.is_set():
                    return
            epoch += 1
        while not stop.is_set():
            try:
                frames.put(None, timeout=0.1)
                return
            except queue.Full:
                continue

    producer = threading.Thread(target=produce, daemon=True)
    producer.start()
    written = 0
    try:
        while True:
            frame = frames.get()
            if frame is None:
                break
            try:
                sink.write(frame)
            except (OSError, ValueError) as exc:
                raise StreamClosed(f"sink rejected frame {written}: {exc}") from exc
            written += 1
    finally:
        stop.set()
        while True:  # unblock a producer stuck on a full queue
            try:
                frames.get_nowait()
            except queue.Empty:
                break
        producer.join(timeout=5.0)
    try:
        sink.flush()
    except (OSError, ValueError) as exc:
        raise StreamClosed(f"sink failed on flush: {exc}") from exc
    return written


def _read_exact(source: BinaryIO, size: int) -> bytes:
    blob = b""
    while len(blob) < size:
        chunk = source.read(size - len(blob))
        if not chunk:
            raise ParseError(
                f"stream truncated: wanted {size} bytes, got {len(blob)}", line=0
            )
        blob += chunk
    return blob


def parse_frames(source: BinaryIO) -> Iterator[dict]:
    """Decode a frame stream; yields dicts until the source is exhausted."""
    while True:
        head = source.read(FRAME_HEAD.size)
        if not head:
            return
        if len(head) < FRAME_HEAD.size:
            raise ParseError("stream truncated mid-header", line=0)
        magic, epoch, second, channels, n = FRAME_HEAD.unpack(head)
        if magic == FRAME_EPOCH:
            yield {"kind": "epoch", "epoch": epoch, "count": second, "channels": channels, "window_len": n}
        elif magic == FRAME_SAMPLE:
            payload = _read_exact(source, 4 * n * (1 + channels))
            values = np.frombuffer(payload, dtype="<f4")
            yield {
                "kind": "sample",
                "epoch": epoch,
                "index": second,
                "channels": channels,
                "window_len": n,
                "composite": values[:n],
                "labels": values[n:].reshape(channels, n),
            }
        else:
            raise ParseError(f"unknown frame magic {magic!r}", line=0)
