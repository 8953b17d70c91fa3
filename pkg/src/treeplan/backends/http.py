"""Chat-completion client for live runs.

Sends one user message per call and never retries; the engine owns the
retry policy so call counts stay exact.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import httpx

from ..protocol import (
    DEFAULT_SAMPLING,
    AgentRole,
    BackendTimeout,
    HttpStatusError,
    MalformedResponse,
    SamplingParams,
    UsageCounters,
    estimate_tokens,
)


@dataclass
class HttpBackendConfig:
    endpoint: str
    model: str
    api_key_env: str = "TREEPLAN_API_KEY"
    timeout: float = 60.0
    max_output: int = 256
    sampling: dict[AgentRole, SamplingParams] = field(default_factory=lambda: dict(DEFAULT_SAMPLING))

    def __post_init__(self) -> None:
        if not self.endpoint.startswith(("http://", "https://")):
            raise ValueError(f"endpoint must be an http(s) URL, got {self.endpoint!r}")
        if not self.model:
            raise ValueError("model must be set")

    @classmethod
    def from_dict(cls, data: dict) -> HttpBackendConfig:
        sampling = dict(DEFAULT_SAMPLING)
        for role, params in (data.get("sampling") or {}).items():
            sampling[AgentRole(role)] = SamplingParams(**params)
        return cls(
            endpoint=data["endpoint"],
            model=data["model"],
            api_key_env=data.get("api_key_env", "TREEPLAN_API_KEY"),
            timeout=float(data.get("timeout", 60.0)),
            max_output=int(data.get("max_output", 256)),
            sampling=sampling,
        )


class HttpBackend:
    def __init__(self, config: HttpBackendConfig, client: httpx.Client | None = None) -> None:
        self.config = config
        self._client = client or httpx.Client(timeout=config.timeout)

    def close(self) -> None:
        self._client.close()

    def _headers(self) -> dict[str, str]:
        headers = {"Content-Type": "application/json"}
        token = os.environ.get(self.config.api_key_env)
        if token:
            headers["Authorization"] = f"Bearer {token}"
        return headers

    def complete(self, role: AgentRole, prompt: str, sampling: SamplingParams) -> tuple[str, UsageCounters]:
        payload = {
            "model": self.config.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": sampling.temperature,
            # the config value caps whatever a caller asks for
            "max_tokens": min(sampling.max_output, self.config.max_output),
        }
        try:
            response = self._client.post(
                self.config.endpoint, json=payload, headers=self._headers(), timeout=self.config.timeout
            )
        except httpx.TimeoutException as exc:
            raise BackendTimeout(f"{role.value} call timed out: {exc}") from exc
        except httpx.HTTPError as exc:
            raise MalformedResponse(f"transport error: {exc}") from exc
        if response.status_code >= 400:
            raise HttpStatusError(response.status_code, response.text[:500])
        try:
            body = response.json()
            text = body["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise MalformedResponse(f"unexpected response shape: {exc!r}") from exc
        if not isinstance(text, str):
            raise MalformedResponse("message content is not text")
        return text, _usage(body.get("usage"), prompt, text)


def _usage(block, prompt: str, text: str) -> UsageCounters:
    if isinstance(block, dict):
        try:
            return UsageCounters(int(block["prompt_tokens"]), int(block["completion_tokens"]), 1)
        except (KeyError, TypeError, ValueError):
            pass
    return UsageCounters(estimate_tokens(prompt), estimate_tokens(text), 1)
