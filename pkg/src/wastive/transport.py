"""Byte transports between the host pipeline and the servo controller.

All transports share a two-call contract driven once per tick:
write(data, now_ms) pushes host bytes toward the device and reports link
health; poll(now_ms) advances/drains the device side and returns whatever
it sent back. The loopback transport embeds the protocol's DeviceModel so
the full host-device conversation runs in-process; serial talks to a real
character device via stdlib termios; file is a write-only sink for
capture.
"""

from __future__ import annotations

import os

from .config import RuntimeConfig, TransportSpec
from .errors import TransportError
from .protocol import DeviceModel, device_step


class LoopbackTransport:
    """In-process link to a DeviceModel; the hardware-free default."""

    def __init__(self, rest_pulses, failsafe_timeout_ms: float = 500.0):
        self.device = DeviceModel(
            rest_pulses=list(rest_pulses), failsafe_timeout_ms=failsafe_timeout_ms
        )
        self._pending = b""

    def write(self, data: bytes, now_ms: float) -> bool:
        self._pending += data
        return True

    def poll(self, now_ms: float) -> bytes:
        rx, self._pending = self._pending, b""
        _, tx = device_step(self.device, rx, now_ms)
        return tx

    def close(self) -> None:
        pass


class SerialTransport:
    """Raw serial character device, 8N1, configured via termios.

    Non-tty paths (fifos, regular files under test) skip the termios
    setup and just read/write.
    """

    def __init__(self, path: str, baud: int = 115200):
        try:
            self.fd = os.open(path, os.O_RDWR | os.O_NOCTTY | os.O_NONBLOCK)
        except OSError as exc:
            raise TransportError(f"cannot open serial device {path}: {exc}") from None
        if os.isatty(self.fd):
            self._setup_tty(baud)

    def _setup_tty(self, baud: int) -> None:
        import termios

        rate = getattr(termios, f"B{baud}", None)
        if rate is None:
            raise TransportError(f"unsupported baud rate {baud}")
        attrs = termios.tcgetattr(self.fd)
        iflag, oflag, cflag, lflag, _, _, cc = attrs
        cflag = (cflag & ~termios.CSIZE & ~termios.PARENB & ~termios.CSTOPB) | (
            termios.CS8 | termios.CREAD | termios.CLOCAL
        )
        lflag &= ~(termios.ICANON | termios.ECHO | termios.ECHOE | termios.ISIG)
        iflag &= ~(termios.IXON | termios.IXOFF | termios.IXANY | termios.ICRNL)
        oflag &= ~termios.OPOST
        cc[termios.VMIN] = 0
        cc[termios.VTIME] = 0
        termios.tcsetattr(
            self.fd, termios.TCSANOW, [iflag, oflag, cflag, lflag, rate, rate, cc]
        )

    def write(self, data: bytes, now_ms: float) -> bool:
        try:
            os.write(self.fd, data)
            return True
        except OSError:
            return False

    def poll(self, now_ms: float) -> bytes:
        try:
            return os.read(self.fd, 4096)
        except BlockingIOError:
            return b""
        except OSError:
            return b""

    def close(self) -> None:
        os.close(self.fd)


class FileTransport:
    """Append-only capture of the host's wire traffic; nothing comes back."""

    def __init__(self, path: str):
        try:
            self._fh = open(path, "ab")
        except OSError as exc:
            raise TransportError(f"cannot open sink file {path}: {exc}") from None

    def write(self, data: bytes, now_ms: float) -> bool:
        self._fh.write(data)
        return True

    def poll(self, now_ms: float) -> bytes:
        return b""

    def close(self) -> None:
        self._fh.close()


class BackoffRetry:
    """Write-retry policy around a flaky transport.

    After a failed write, further attempts are suppressed for an
    exponentially growing number of ticks (1, 2, 4, ... up to max_gap);
    one probe write goes through when the gap expires. A successful write
    resets the policy. poll() always passes through, so anything the
    device says during an outage still arrives, and the device-side
    watchdog covers the silent stretch.
    """

    def __init__(self, inner, max_gap: int = 64):
        self.inner = inner
        self.max_gap = max_gap
        self._gap = 0
        self._wait = 0

    def write(self, data: bytes, now_ms: float) -> bool:
        if self._wait > 0:
            self._wait -= 1
            return False
        ok = self.inner.write(data, now_ms)
        if ok:
            self._gap = 0
        else:
            self._gap = min(self.max_gap, self._gap * 2 if self._gap else 1)
            self._wait = self._gap
        return ok

    def poll(self, now_ms: float) -> bytes:
        return self.inner.poll(now_ms)

    def close(self) -> None:
        self.inner.close()


def open_transport(config: RuntimeConfig):
    spec: TransportSpec = config.transport
    if spec.kind == "loopback":
        return LoopbackTransport(config.rest_pulses())
    if spec.kind == "serial":
        return SerialTransport(spec.path, spec.baud)
    if spec.kind == "file":
        return FileTransport(spec.path)
    raise TransportError(f"unknown transport kind {spec.kind!r}")
