"""Domain exceptions. Every error carries a machine-readable code."""

from __future__ import annotations


class RegistryError(Exception):
    """Base class; `code` is stable and documented, `message` is for humans."""

    code = "registry_error"
    http_status = 400

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message

    def body(self) -> dict:
        return {"error": {"code": self.code, "message": self.message}}


class NotFound(RegistryError):
    code = "not_found"
    http_status = 404


class Conflict(RegistryError):
    code = "conflict"
    http_status = 409


class PermissionDenied(RegistryError):
    code = "permission_denied"
    http_status = 403


class ValidationFailed(RegistryError):
    code = "validation_failed"
    http_status = 422


class AuthenticationFailed(RegistryError):
    code = "authentication_failed"
    http_status = 401


class TokenExpired(AuthenticationFailed):
    code = "token_expired"
    http_status = 401


class ParseFailure(RegistryError):
    """Malformed input document; carries line/column when known."""

    code = "parse_failure"
    http_status = 400

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        if line is not None:
            message = f"{message} (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(message)
        self.line = line
        self.column = column


class UnsupportedFormat(RegistryError):
    code = "unsupported_format"
    http_status = 422


class EmptyImport(RegistryError):
    code = "empty_import"
    http_status = 422


class ConfigurationError(RegistryError):
    code = "configuration_error"
    http_status = 500
