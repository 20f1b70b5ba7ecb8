"""Local credential handling and bearer sessions: salted PBKDF2 secrets,
opaque tokens with configurable expiry, clock-injectable for tests.
"""

from __future__ import annotations

import hashlib
import hmac
import secrets
from datetime import timedelta

from .errors import AuthenticationFailed, TokenExpired
from .models import User
from .store import Store

_ITERATIONS = 50_000


def _digest(secret: str, salt: str) -> str:
    return hashlib.pbkdf2_hmac("sha256", secret.encode(), bytes.fromhex(salt), _ITERATIONS).hex()


def set_credential(store: Store, user_id: str, secret: str) -> None:
    salt = secrets.token_hex(16)
    store.credentials[user_id] = (salt, _digest(secret, salt))


def authenticate(store: Store, handle: str, secret: str, ttl_hours: float = 24.0) -> str:
    """Exchange handle+secret for an opaque bearer token."""
    user = store.user_by_handle(handle)
    if user is None or user.id not in store.credentials:
        raise AuthenticationFailed("unknown handle or no credential on file")
    salt, stored = store.credentials[user.id]
    if not hmac.compare_digest(stored, _digest(secret, salt)):
        raise AuthenticationFailed("bad credential")
    token = secrets.token_urlsafe(32)
    store.sessions[token] = (user.id, store.clock() + timedelta(hours=ttl_hours))
    user.last_seen = store.clock()
    return token


def user_for_token(store: Store, token: str) -> User:
    entry = store.sessions.get(token or "")
    if entry is None:
        raise AuthenticationFailed("invalid or missing bearer token")
    user_id, expiry = entry
    if store.clock() > expiry:
        del store.sessions[token]
        raise TokenExpired("session has expired; authenticate again")
    return store.user(user_id)
