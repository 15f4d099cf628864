"""
Run logger for the isothermic meshing toolkit.
Console output plus an optional daily log file (logs/isomesh_YYYY-MM-DD.log).
"""

import logging
import time
from datetime import datetime, timezone, timedelta
from pathlib import Path
from typing import Optional, Tuple

from ..config.settings import logging_config

LOG_PREFIX = "isomesh_"


def _utc_date() -> str:
    return datetime.now(timezone.utc).strftime('%Y-%m-%d')


def _context(fields: dict) -> str:
    if not fields:
        return ""
    return " [" + ", ".join(f"{k}={v}" for k, v in fields.items()) + "]"


class SystemLogger:
    """
    Logger shared by the CLI and the library orchestration points (mesh
    building, existence sweeps, exports). With file logging on, a new file
    is opened on the first message after midnight UTC and files older than
    LOG_RETENTION_DAYS are removed at start-up.
    """

    def __init__(self, to_file: Optional[bool] = None):
        self.logs_dir = Path(logging_config.LOGS_DIRECTORY)
        self.to_file = logging_config.LOG_TO_FILE if to_file is None else to_file

        self.logger = logging.getLogger('IsoMesh')
        self.logger.setLevel(getattr(logging, logging_config.LOG_LEVEL))
        self.logger.propagate = False
        for handler in list(self.logger.handlers):
            self.logger.removeHandler(handler)

        self._file_handler: Optional[logging.Handler] = None
        self._console_handler: Optional[logging.Handler] = None
        self._log_date: Optional[str] = None

        if self.to_file:
            self._open_log_file()
            self.cleanup_old_logs()
        if logging_config.CONSOLE_LOGGING_ENABLED:
            self._console_handler = self._attach(
                logging.StreamHandler(), logging_config.CONSOLE_LOG_LEVEL,
                logging_config.CONSOLE_LOG_FORMAT, '%H:%M:%S')

    def _attach(self, handler: logging.Handler, level: str, fmt: str,
                datefmt: str) -> logging.Handler:
        formatter = logging.Formatter(fmt=fmt, datefmt=datefmt)
        formatter.converter = time.gmtime
        handler.setLevel(getattr(logging, level))
        handler.setFormatter(formatter)
        self.logger.addHandler(handler)
        return handler

    def _open_log_file(self):
        self.logs_dir.mkdir(parents=True, exist_ok=True)
        self._log_date = _utc_date()
        path = self.logs_dir / f"{LOG_PREFIX}{self._log_date}.log"
        self._file_handler = self._attach(
            logging.FileHandler(path, encoding='utf-8'), logging_config.LOG_LEVEL,
            logging_config.LOG_FORMAT, logging_config.LOG_DATE_FORMAT)

    def _rotate_if_needed(self):
        if self._file_handler is None or _utc_date() == self._log_date:
            return
        self.logger.removeHandler(self._file_handler)
        self._file_handler.close()
        self._open_log_file()
        self.logger.info(f"Rotated to new daily log file for {self._log_date}")

    def set_level(self, level: str):
        """Runtime level change for the logger and the console (--log-level)"""
        numeric = getattr(logging, level.upper())
        self.logger.setLevel(numeric)
        if self._console_handler is not None:
            self._console_handler.setLevel(numeric)

    def _log(self, level: str, message: str, **fields):
        self._rotate_if_needed()
        stamp = datetime.now(timezone.utc).strftime('%H:%M:%S.%f')[:-3]
        getattr(self.logger, level)(f"[{stamp}] {message}{_context(fields)}")

    def debug(self, message, **fields):
        self._log('debug', message, **fields)

    def info(self, message, **fields):
        self._log('info', message, **fields)

    def warning(self, message, **fields):
        self._log('warning', message, **fields)

    def error(self, message, **fields):
        self._log('error', message, **fields)

    # ─── meshing events ──────────────────────────────────────────────────

    def log_surface_loaded(self, name: str, kind: str, domain: Tuple[float, ...]):
        self.info(f"SURFACE LOADED: {name} ({kind})",
                  surface=name, kind=kind, domain=domain, event_type="surface")

    def log_umbilic(self, point: Tuple[float, float], context: str):
        self.debug(f"UMBILIC: ({point[0]:.6g}, {point[1]:.6g}) during {context}",
                   event_type="umbilic", context=context)

    def log_march_stopped(self, line: str, index: int, reason: str):
        """A trajectory truncated by an umbilic or a domain exit"""
        self.warning(f"MARCH STOPPED: {line} at step {index} - {reason}",
                     line=line, index=index, event_type="truncation")

    def log_mesh_built(self, shape: Tuple[int, int], valid: int, elapsed: float):
        self.info(f"MESH BUILT: {shape[0]}x{shape[1]} grid, {valid} valid nodes in {elapsed:.2f}s",
                  valid=valid, event_type="mesh")

    def log_residual(self, name: str, value: Optional[float], threshold: float):
        if value is None:
            self.warning(f"RESIDUAL MISSING: {name}", residual=name, event_type="residual")
            return
        status = "OK" if value <= threshold else "OVER"
        self.info(f"RESIDUAL {status}: {name} = {value:.3e} (threshold {threshold:.1e})",
                  residual=name, event_type="residual")

    def log_verdict(self, command: str, verdict: str, exit_code: int):
        self.info(f"VERDICT: {command} -> {verdict} (exit {exit_code})",
                  command=command, event_type="verdict")

    def log_export(self, kind: str, path):
        self.info(f"EXPORT: {kind} -> {path}", kind=kind, event_type="export")

    def log_system_event(self, event_type: str, details: str):
        """Start-up, command dispatch and similar process-level events"""
        self.info(f"SYSTEM: {event_type} - {details}",
                  event_type="system", system_event=event_type)

    def cleanup_old_logs(self, days_to_keep: Optional[int] = None) -> int:
        """Delete daily files older than the retention window; returns the count"""
        days = logging_config.LOG_RETENTION_DAYS if days_to_keep is None else days_to_keep
        cutoff = datetime.now(timezone.utc) - timedelta(days=days)
        removed = 0
        for log_file in self.logs_dir.glob(f"{LOG_PREFIX}*.log"):
            try:
                stamp = datetime.strptime(log_file.stem[len(LOG_PREFIX):], '%Y-%m-%d')
            except ValueError:
                continue
            if stamp.replace(tzinfo=timezone.utc) < cutoff:
                log_file.unlink()
                removed += 1
        if removed:
            self.info(f"Removed {removed} expired log files", event_type="cleanup")
        return removed


system_logger = SystemLogger()
