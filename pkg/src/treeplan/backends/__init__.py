from .http import HttpBackend, HttpBackendConfig
from .oracle import OracleBackend, OracleConfig

__all__ = ["HttpBackend", "HttpBackendConfig", "OracleBackend", "OracleConfig"]
