"""HTTP plumbing shared by the LLM gateway and the embedding-service client:
one retry policy, one status classification, bearer auth from the process
environment only."""

from __future__ import annotations

import logging
import os
import time
from dataclasses import dataclass
from typing import Callable

import requests

from .errors import AuthError, TransportError

log = logging.getLogger(__name__)

LLM_API_KEY_VAR = "LLM_API_KEY"
EMBEDDING_API_KEY_VAR = "EMBEDDING_API_KEY"


@dataclass(frozen=True)
class RetryPolicy:
    max_attempts: int = 3
    backoff_s: float = 0.5

    def __post_init__(self) -> None:
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be >= 1")


def bearer_headers(env_var: str) -> dict[str, str]:
    token = os.environ.get(env_var, "").strip()
    return {"Authorization": f"Bearer {token}"} if token else {}


def retry_call(
    send: Callable[[], tuple[int, object]],
    policy: RetryPolicy,
    sleep: Callable[[float], None] = time.sleep,
) -> tuple[object, int]:
    """Run `send` with exponential backoff on 429/5xx/transport failures.

    Returns (payload, attempts). 401/403 raise AuthError immediately; other
    non-retryable statuses raise TransportError on the spot; exhausting the
    budget raises TransportError carrying the last status. The request is
    built once by the caller, so a resend never mutates the body.
    """
    last: str = "no attempt made"
    last_status: int | None = None
    for attempt in range(1, policy.max_attempts + 1):
        try:
            status, payload = send()
        except (requests.Timeout, requests.ConnectionError) as exc:
            last = f"transport failure: {exc.__class__.__name__}"
            last_status = None
            log.warning("attempt %d/%d failed: %s", attempt, policy.max_attempts, last)
        else:
            if status in (401, 403):
                raise AuthError(f"authentication rejected (HTTP {status})", status=status)
            if 200 <= status < 300:
                return payload, attempt
            last = f"HTTP {status}"
            last_status = status
            if status != 429 and not 500 <= status < 600:
                raise TransportError(f"non-retryable {last}", status=status)
            log.warning("attempt %d/%d failed: %s", attempt, policy.max_attempts, last)
        if attempt < policy.max_attempts:
            sleep(policy.backoff_s * (2 ** (attempt - 1)))
    raise TransportError(
        f"exhausted {policy.max_attempts} attempts; last failure: {last}", status=last_status
    )


def post_json(
    url: str,
    body: dict,
    timeout_s: float,
    headers: dict[str, str] | None = None,
) -> tuple[int, object]:
    resp = requests.post(url, json=body, timeout=timeout_s, headers=headers or {})
    try:
        payload: object = resp.json()
    except ValueError:
        payload = resp.text
    return resp.status_code, payload
