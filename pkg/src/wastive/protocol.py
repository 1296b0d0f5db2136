"""Host <-> servo-controller wire protocol and device reference model.

Frame layout, byte-exact:

    0xAA | msg_type | seq | len | payload[len] | crc

crc is CRC-8 (poly 0x07, init 0x00, MSB-first, no reflection, no final
xor) over msg_type..payload. SET_TARGETS carries n 16-bit little-endian
pulse widths in microseconds (len = 2n, at most 64 bytes of payload).
ACK frames echo the acknowledged sequence number in their own seq field
with an empty payload.

The decoder is an incremental resynchronizing parser: anything that is
not a complete, CRC-valid, grammatically sane frame makes it advance one
byte and rescan for 0xAA. It never consumes a partial trailing frame, so
callers can keep appending bytes from the wire.

DeviceModel is a behavioral stand-in for the microcontroller firmware:
it applies SET_TARGETS, answers with ACKs, and drops the panel to its
rest pose if valid traffic stops for failsafe_timeout_ms (sensible for a
public installation; a crashed host must not leave panels raised).
"""

from __future__ import annotations

from dataclasses import dataclass, field

SYNC = 0xAA
MSG_SET_TARGETS = 0x01
MSG_HEARTBEAT = 0x02
MSG_ACK = 0x81
MSG_FAILSAFE_TRIGGERED = 0x82

KNOWN_TYPES = (MSG_SET_TARGETS, MSG_HEARTBEAT, MSG_ACK, MSG_FAILSAFE_TRIGGERED)
MAX_PAYLOAD = 64
HEADER_LEN = 4  # sync, type, seq, len
OVERHEAD = HEADER_LEN + 1  # plus crc


def _make_crc_table(poly: int = 0x07) -> list[int]:
    table = []
    for byte in range(256):
        crc = byte
        for _ in range(8):
            crc = ((crc << 1) ^ poly) & 0xFF if crc & 0x80 else (crc << 1) & 0xFF
        table.append(crc)
    return table


_CRC_TABLE = _make_crc_table()


def crc8(data: bytes) -> int:
    """CRC-8, poly 0x07, init 0x00, no reflection, no final xor."""
    crc = 0
    for b in data:
        crc = _CRC_TABLE[crc ^ b]
    return crc


@dataclass(frozen=True)
class DeviceFrame:
    msg_type: int
    seq: int
    payload: bytes = b""


def _payload_ok(msg_type: int, length: int) -> bool:
    if length > MAX_PAYLOAD:
        return False
    if msg_type == MSG_SET_TARGETS:
        return length % 2 == 0
    if msg_type in (MSG_HEARTBEAT, MSG_ACK, MSG_FAILSAFE_TRIGGERED):
        return length <= 1
    return False


def encode(msg_type: int, seq: int, payload: bytes = b"") -> bytes:
    if msg_type not in KNOWN_TYPES:
        raise ValueError(f"unknown msg_type 0x{msg_type:02X}")
    if not 0 <= seq <= 0xFF:
        raise ValueError(f"seq must fit one byte, got {seq}")
    if not _payload_ok(msg_type, len(payload)):
        raise ValueError(
            f"payload length {len(payload)} invalid for msg_type 0x{msg_type:02X}"
        )
    body = bytes([msg_type, seq, len(payload)]) + payload
    return bytes([SYNC]) + body + bytes([crc8(body)])


def encode_frame(frame: DeviceFrame) -> bytes:
    return encode(frame.msg_type, frame.seq, frame.payload)


def pack_pulses(pulses) -> bytes:
    out = bytearray()
    for p in pulses:
        p = int(p)
        if not 0 <= p <= 0xFFFF:
            raise ValueError(f"pulse {p} does not fit 16 bits")
        out += p.to_bytes(2, "little")
    return bytes(out)


def unpack_pulses(payload: bytes) -> list[int]:
    if len(payload) % 2:
        raise ValueError("SET_TARGETS payload length must be even")
    return [
        int.from_bytes(payload[i : i + 2], "little") for i in range(0, len(payload), 2)
    ]


def decode(stream: bytes) -> tuple[list[DeviceFrame], int, int]:
    """Parse as many complete frames as the stream holds.

    Returns (frames, consumed, errors_skipped). errors_skipped counts
    bytes that were consumed without belonging to a decoded frame (noise,
    corrupt frames, bad sync). Bytes of an incomplete trailing frame are
    left unconsumed so the caller can retry with more data.
    """
    frames: list[DeviceFrame] = []
    i = 0
    skipped = 0
    n = len(stream)
    while i < n:
        if stream[i] != SYNC:
            i += 1
            skipped += 1
            continue
        if i + HEADER_LEN > n:
            break  # header not complete yet
        msg_type = stream[i + 1]
        seq = stream[i + 2]
        length = stream[i + 3]
        if not _payload_ok(msg_type, length):
            i += 1
            skipped += 1
            continue
        end = i + OVERHEAD + length
        if end > n:
            break  # frame not complete yet
        body = stream[i + 1 : i + HEADER_LEN + length]
        if crc8(body) != stream[end - 1]:
            i += 1
            skipped += 1
            continue
        frames.append(
            DeviceFrame(msg_type=msg_type, seq=seq, payload=bytes(stream[i + HEADER_LEN : i + HEADER_LEN + length]))
        )
        i = end
    return frames, i, skipped


@dataclass
class DeviceModel:
    """Reference model of the controller's receive loop and watchdog."""

    rest_pulses: list[int]
    current_pulses: list[int] = field(default_factory=list)
    last_valid_rx_ms: float = 0.0
    failsafe_engaged: bool = False
    failsafe_timeout_ms: float = 500.0
    rx_buffer: bytes = b""
    tx_seq: int = 0

    def __post_init__(self):
        if not self.current_pulses:
            self.current_pulses = list(self.rest_pulses)


def device_step(model: DeviceModel, rx: bytes, now: float) -> tuple[DeviceModel, bytes]:
    """Feed received bytes to the device and advance its clock.

    Valid SET_TARGETS frames move the servos and are ACKed (seq echoed);
    any valid frame feeds the watchdog and disengages an active failsafe.
    Once now - last_valid_rx exceeds the timeout the model drops to its
    rest pose and emits FAILSAFE_TRIGGERED exactly once per engagement.
    Mutates and returns the model for convenience.
    """
    tx = bytearray()
    model.rx_buffer += rx
    frames, consumed, _skipped = decode(model.rx_buffer)
    # decode never retains more than one incomplete frame (<= 69 bytes),
    # so the buffer cannot grow without bound
    model.rx_buffer = model.rx_buffer[consumed:]

    for frame in frames:
        if frame.msg_type == MSG_SET_TARGETS:
            model.current_pulses = unpack_pulses(frame.payload)
            model.last_valid_rx_ms = now
            model.failsafe_engaged = False
            tx += encode(MSG_ACK, frame.seq)
        elif frame.msg_type == MSG_HEARTBEAT:
            model.last_valid_rx_ms = now
            model.failsafe_engaged = False
        # ACK/FAILSAFE arriving at the device are ignored

    if (
        not model.failsafe_engaged
        and now - model.last_valid_rx_ms > model.failsafe_timeout_ms
    ):
        model.failsafe_engaged = True
        model.current_pulses = list(model.rest_pulses)
        tx += encode(MSG_FAILSAFE_TRIGGERED, model.tx_seq)
        model.tx_seq = (model.tx_seq + 1) & 0xFF

    return model, bytes(tx)
