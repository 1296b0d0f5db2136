"""Hardware-free host software for a presence-driven kinetic wave panel.

Camera frames in, CRC-8 framed servo pulses out: presence sensing by
background subtraction, debounced region dwell, dwell-driven wave
dynamics, calibrated slew-limited actuation, a behavioral device model
for loopback testing, a deterministic scenario simulator, and a live
runtime with a WebSocket operator console.
"""

__version__ = "0.1.0"

from .config import RuntimeConfig, load_config
from .simulator import Scenario, export_trace, load_scenario, run_scenario

__all__ = [
    "RuntimeConfig",
    "load_config",
    "Scenario",
    "load_scenario",
    "run_scenario",
    "export_trace",
    "__version__",
]
