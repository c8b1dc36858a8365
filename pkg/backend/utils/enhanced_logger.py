import logging
import logging.handlers
import json
import sys
import traceback
from collections import Counter
from datetime import datetime
from pathlib import Path
from typing import Dict, Optional, Any, List


class EnhancedLogger:
    """Structured logging for coding runs: optional file rotation, error ids, recent-entry ring"""

    def __init__(self, log_dir: Optional[str] = None, console_level: int = logging.INFO):
        self.log_dir = Path(log_dir) if log_dir else None
        if self.log_dir is not None:
            self.log_dir.mkdir(parents=True, exist_ok=True)
        self.console_level = console_level

        self.app_logger = self._setup_logger("scpcc.app", "app.log", logging.INFO)
        self.error_logger = self._setup_logger("scpcc.error", "error.log", logging.ERROR)
        self.debug_logger = self._setup_logger("scpcc.debug", "debug.log", logging.DEBUG)

        # In-memory storage for recent entries (API debug view, CLI summaries)
        self.recent_logs: List[Dict] = []
        self.max_recent_logs = 1000

    def _setup_logger(self, name: str, filename: str, level: int) -> logging.Logger:
        """Setup a logger with optional rotation and shared formatting"""
        logger = logging.getLogger(name)
        logger.setLevel(level)
        logger.propagate = False

        # Clear existing handlers so reconfiguration does not duplicate output
        logger.handlers.clear()

        formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        )

        if self.log_dir is not None:
            # 10MB max, keep 7 files
            handler = logging.handlers.RotatingFileHandler(
                self.log_dir / filename,
                maxBytes=10 * 1024 * 1024,
                backupCount=7,
                encoding='utf-8'
            )
            handler.setFormatter(formatter)
            logger.addHandler(handler)

        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(max(level, self.console_level))
        console_handler.setFormatter(formatter)
        logger.addHandler(console_handler)

        return logger

    def log_error(self, error: Exception, context: str,
                  additional_info: Optional[Dict] = None) -> str:
        """Log error with full context and return error ID"""
        error_id = f"ERR_{datetime.now().strftime('%Y%m%d_%H%M%S_%f')}"

        error_details = {
            "error_id": error_id,
            "timestamp": datetime.now().isoformat(),
            "context": context,
            "error_type": type(error).__name__,
            "error_message": str(error),
            "traceback": traceback.format_exc(),
            "additional_info": additional_info or {}
        }

        self.error_logger.error(
            f"Error {error_id} in {context}: {type(error).__name__}: {str(error)}"
        )
        self.debug_logger.debug(json.dumps(error_details, indent=2, default=str))

        self._add_to_recent(error_details, "error")

        return error_id

    def log_processing_step(self, step_name: str, status: str,
                            duration_ms: Optional[float] = None,
                            details: Optional[Dict] = None) -> None:
        """Log individual processing steps (code search, encode, decode, sweep point)"""
        log_entry = {
            "timestamp": datetime.now().isoformat(),
            "step": step_name,
            "status": status,
            "duration_ms": duration_ms,
            "details": details
        }

        level = logging.INFO if status == "success" else logging.WARNING
        timing = f" ({duration_ms:.2f}ms)" if duration_ms is not None else ""
        self.app_logger.log(level, f"Processing step '{step_name}': {status}{timing}")

        if details:
            self.debug_logger.debug(json.dumps(details, indent=2, default=str))

        self._add_to_recent(log_entry, "processing_step")

    def log_simulation_point(self, ebno_db: float, frames: int, bit_errors: int,
                             ber: float, fer: float, elapsed_s: float) -> None:
        """Log one finished (or flushed) SNR point of a BER sweep"""
        log_entry = {
            "timestamp": datetime.now().isoformat(),
            "ebno_db": ebno_db,
            "frames": frames,
            "bit_errors": bit_errors,
            "ber": ber,
            "fer": fer,
            "elapsed_s": elapsed_s
        }

        self.app_logger.info(
            f"Eb/N0 {ebno_db:.2f} dB: {frames} frames, {bit_errors} bit errors, "
            f"BER {ber:.3e}, FER {fer:.3e} in {elapsed_s:.1f}s"
        )
        self._add_to_recent(log_entry, "simulation_point")

    def _add_to_recent(self, entry: Dict, entry_type: str) -> None:
        """Add log entry to in-memory storage"""
        entry["log_type"] = entry_type
        self.recent_logs.append(entry)

        if len(self.recent_logs) > self.max_recent_logs:
            self.recent_logs = self.recent_logs[-self.max_recent_logs:]

    def get_recent_logs(self, log_type: Optional[str] = None,
                        limit: int = 100) -> List[Dict]:
        """Get recent structured entries"""
        logs = self.recent_logs

        if log_type:
            logs = [log for log in logs if log.get("log_type") == log_type]

        return logs[-limit:]

    def get_error_summary(self) -> Dict[str, Any]:
        """Error counts by type plus the last five errors"""
        errors = [log for log in self.recent_logs if log.get("log_type") == "error"]
        return {
            "total_errors": len(errors),
            "error_types": dict(Counter(error.get("error_type", "Unknown") for error in errors)),
            "recent_errors": errors[-5:]
        }


# Global logger instance; reconfigured by configure_logging()
enhanced_logger = EnhancedLogger()


def configure_logging(log_dir: Optional[str] = None, verbose: bool = False) -> EnhancedLogger:
    """Rebuild the global structured logger, e.g. once the CLI knows --log-dir"""
    global enhanced_logger
    enhanced_logger = EnhancedLogger(
        log_dir=log_dir,
        console_level=logging.DEBUG if verbose else logging.INFO
    )
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )
    return enhanced_logger


# Convenience functions
def log_error(error: Exception, context: str, additional_info=None, **kwargs) -> str:
    if kwargs:
        additional_info = {**(additional_info or {}), **kwargs}
    return enhanced_logger.log_error(error, context, additional_info)


def log_processing_step(step_name: str, status: str, **kwargs):
    return enhanced_logger.log_processing_step(step_name, status, **kwargs)


def log_simulation_point(**kwargs):
    return enhanced_logger.log_simulation_point(**kwargs)
