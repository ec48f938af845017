"""Client for chat-completion endpoints, and the remote rollout pipeline.

The retraced prefix travels as a trailing assistant message so the
server resumes generation mid-response (continuation mode).  Word-level
prefixes are rejoined with single spaces: tokenizer-exact truncation is
not expressible over a wire API.

Per-request failures never change group shape: a rollout that
ultimately fails keeps its slot with the unextractable sentinel answer,
so downstream frequency denominators stay fixed.
"""
from __future__ import annotations

import base64
import hashlib
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import httpx
import numpy as np

from .answers import (
    Origin,
    Trajectory,
    UNEXTRACTABLE,
    extract_boxed_answer,
    normalize_answer,
)
from .errors import (
    AuthFailure,
    MalformedResponse,
    RemoteError,
    Timeout,
    UnextractableAnswer,
)
from .perturb import PerturbConfig, RasterImage, gaussian_perturb, image_bytes
from .retrace import RetraceConfig, retrace
from .reward import RewardConfig

_FAILED_TOKENS = ("<failed>", "<failed>")


@dataclass(frozen=True)
class RemoteConfig:
    base_url: str
    model_name: str
    api_key_env: str | None = None
    temperature: float = 1.0
    top_p: float = 1.0
    max_tokens: int = 512
    timeout_s: float = 30.0
    max_concurrency: int = 4
    retries: int = 2
    backoff_s: float = 0.25

    def __post_init__(self) -> None:
        if self.max_concurrency < 1:
            raise ValueError(f"max_concurrency must be >= 1, got {self.max_concurrency}")
        if self.timeout_s <= 0:
            raise ValueError(f"timeout_s must be > 0, got {self.timeout_s}")
        if self.retries < 0:
            raise ValueError(f"retries must be >= 0, got {self.retries}")


@dataclass(frozen=True)
class GenerationRequest:
    user_text: str
    system_text: str | None = None
    assistant_prefix: str | None = None
    image: RasterImage | None = None

    def __post_init__(self) -> None:
        if not self.user_text:
            raise ValueError("user_text must be non-empty")


def resolve_api_key(config: RemoteConfig) -> str | None:
    """Environment lookup; None config means unauthenticated endpoints."""
    if config.api_key_env is None:
        return None
    key = os.environ.get(config.api_key_env)
    if not key:
        raise AuthFailure(f"environment variable {config.api_key_env} is not set")
    return key


def _mime(image: RasterImage) -> str:
    return "image/x-portable-graymap" if image.channels == 1 else "image/x-portable-pixmap"


def build_messages(request: GenerationRequest) -> list[dict]:
    messages: list[dict] = []
    if request.system_text:
        messages.append({"role": "system", "content": request.system_text})
    if request.image is not None:
        data = image_bytes(request.image)
        encoded = base64.b64encode(data).decode()
        messages.append(
            {
                "role": "user",
                "content": [
                    {"type": "text", "text": request.user_text},
                    {
                        "type": "image_url",
                        "image_url": {"url": f"data:{_mime(request.image)};base64,{encoded}"},
                    },
                ],
            }
        )
    else:
        messages.append({"role": "user", "content": request.user_text})
    if request.assistant_prefix is not None:
        # continuation mode: the partial assistant turn asks the server
        # to resume from the retraced anchor
        messages.append({"role": "assistant", "content": request.assistant_prefix})
    return messages


def _redact(payload: dict) -> dict:
    # wire logs keep full text but swap base64 image data for a digest
    out = dict(payload)
    messages = []
    for msg in payload.get("messages", []):
        content = msg.get("content")
        if isinstance(content, list):
            parts = []
            for part in content:
                if part.get("type") == "image_url":
                    url = part["image_url"]["url"]
                    digest = hashlib.sha256(url.encode()).hexdigest()
                    parts.append({"type": "image_url", "image_sha256": digest})
                else:
                    parts.append(part)
            messages.append({**msg, "content": parts})
        else:
            messages.append(msg)
    out["messages"] = messages
    return out


def complete(
    request: GenerationRequest,
    config: RemoteConfig,
    client: httpx.Client | None = None,
    wire: list[dict] | None = None,
) -> str:
    """Issue one completion; returns the generated continuation text.

    Retries with exponential backoff on timeouts, connection failures,
    and 408/429/5xx statuses, up to config.retries extra attempts.
    Credential rejections (401/403) and protocol violations fail fast.
    """
    key = resolve_api_key(config)
    headers = {"Content-Type": "application/json"}
    if key is not None:
        headers["Authorization"] = f"Bearer {key}"
    payload = {
        "model": config.model_name,
        "messages": build_messages(request),
        "temperature": config.temperature,
        "top_p": config.top_p,
        "max_tokens": config.max_tokens,
    }
    url = config.base_url.rstrip("/") + "/v1/chat/completions"
    owned = client is None
    http = client or httpx.Client(timeout=config.timeout_s)
    last_err: RemoteError | None = None
    try:
        for attempt in range(config.retries + 1):
            if attempt > 0:
                time.sleep(config.backoff_s * (2 ** (attempt - 1)))
            try:
                response = http.post(url, json=payload, headers=headers, timeout=config.timeout_s)
            except httpx.TimeoutException as exc:
                last_err = Timeout(f"no answer within {config.timeout_s}s: {exc}")
                continue
            except httpx.TransportError as exc:
                last_err = RemoteError(f"transport failure: {exc}")
                continue

            if response.status_code in (401, 403):
                raise AuthFailure(f"HTTP {response.status_code}: credentials rejected")
            if response.status_code in (408, 429) or response.status_code >= 500:
                last_err = RemoteError(f"HTTP {response.status_code} from server")
                continue
            if response.status_code != 200:
                raise MalformedResponse(f"unexpected HTTP {response.status_code}")
            try:
                body = response.json()
                text = body["choices"][0]["message"]["content"]
            except (ValueError, KeyError, IndexError, TypeError) as exc:
                raise MalformedResponse(f"unparseable completion body: {exc}") from exc
            if not isinstance(text, str):
                raise MalformedResponse(f"completion content is {type(text).__name__}, not str")
            if wire is not None:
                wire.append(
                    {
                        "request": _redact(payload),
                        "response_text": text,
                        "attempts": attempt + 1,
                        "status": response.status_code,
                    }
                )
            return text
        assert last_err is not None
        if wire is not None:
            wire.append(
                {
                    "request": _redact(payload),
                    "response_text": None,
                    "attempts": config.retries + 1,
                    "status": None,
                    "error": str(last_err),
                }
            )
        raise last_err
    finally:
        if owned:
            http.close()


def _noise_seed(seed: int, *key: int) -> int:
    ss = np.random.SeedSequence((seed,) + key)
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _answer_of_text(text: str):
    raw = extract_boxed_answer(text)
    if raw is None:
        return UNEXTRACTABLE
    try:
        return normalize_answer(raw)
    except UnextractableAnswer:
        return UNEXTRACTABLE


def generate_group(
    prompt: str,
    image: RasterImage | None,
    n: int,
    m: int,
    retrace_config: RetraceConfig,
    perturb_config: PerturbConfig | None,
    reward_config: RewardConfig | None,
    remote_config: RemoteConfig,
    seed: int,
    system_text: str | None = None,
    noise_per_rollout: bool = True,
    wire: list[dict] | None = None,
) -> tuple[list[Trajectory], list[Trajectory]]:
    """Run one full rollout group against a live endpoint.

    Issues n maternal completions, retraces each, then issues m
    re-inference completions per maternal with the prefix in
    continuation mode, perturbing the image freshly per rollout (or once
    per prompt with noise_per_rollout=False).  Always returns exactly n
    maternal and m*n re-inference trajectories.
    """
    if n < 1 or m < 1:
        raise ValueError(f"n and m must be positive, got n={n} m={m}")
    if retrace_config.m != m:
        raise ValueError(f"retrace config m={retrace_config.m} disagrees with m={m}")
    if reward_config is not None and (reward_config.n != n or reward_config.m != m):
        raise ValueError(
            f"reward config (n={reward_config.n}, m={reward_config.m}) "
            f"disagrees with group shape (n={n}, m={m})"
        )
    resolve_api_key(remote_config)  # fail before any traffic if the env var is missing

    sigma = perturb_config.sigma if perturb_config is not None else 0.0
    prompt_image = image
    if image is not None and sigma > 0.0 and not noise_per_rollout:
        shared = gaussian_perturb(image, PerturbConfig(sigma, _noise_seed(seed, 1)))
    else:
        shared = None

    with httpx.Client(timeout=remote_config.timeout_s) as client, ThreadPoolExecutor(
        max_workers=remote_config.max_concurrency
    ) as pool:

        def run_maternal(i: int) -> Trajectory:
            request = GenerationRequest(
                user_text=prompt, system_text=system_text, image=prompt_image
            )
            try:
                text = complete(request, remote_config, client=client, wire=wire)
            except RemoteError:
                return Trajectory(
                    prompt_id=str(i),
                    tokens=_FAILED_TOKENS,
                    origin=Origin.MATERNAL,
                    answer=UNEXTRACTABLE,
                )
            tokens = tuple(text.split()) or ("<empty>", "<empty>")
            if len(tokens) < 2:
                tokens = tokens + ("<pad>",)
            return Trajectory(
                prompt_id=str(i),
                tokens=tokens,
                origin=Origin.MATERNAL,
                answer=_answer_of_text(text),
            )

        maternal = list(pool.map(run_maternal, range(n)))

        plans = []
        for i, parent in enumerate(maternal):
            rng = np.random.default_rng(np.random.SeedSequence((seed, 0, i)))
            prefix, anchor = retrace(parent, retrace_config, rng)
            prefix_text = " ".join(str(t) for t in prefix)
            for j in range(m):
                plans.append((i, j, parent, prefix, anchor, prefix_text))

        def run_child(plan) -> Trajectory:
            i, j, parent, prefix, anchor, prefix_text = plan
            failed_parent = parent.tokens == _FAILED_TOKENS
            if failed_parent:
                # no point querying the server with a placeholder prefix
                return Trajectory(
                    prompt_id=parent.prompt_id,
                    tokens=tuple(prefix) + ("<failed>",),
                    origin=Origin.REINFERENCE,
                    parent_index=i,
                    anchor_index=anchor,
                    answer=UNEXTRACTABLE,
                )
            child_image = prompt_image
            if prompt_image is not None and sigma > 0.0:
                if shared is not None:
                    child_image = shared
                else:
                    child_image = gaussian_perturb(
                        prompt_image, PerturbConfig(sigma, _noise_seed(seed, 2, i, j))
                    )
            request = GenerationRequest(
                user_text=prompt,
                system_text=system_text,
                assistant_prefix=prefix_text,
                image=child_image,
            )
            try:
                continuation = complete(request, remote_config, client=client, wire=wire)
            except RemoteError:
                return Trajectory(
                    prompt_id=parent.prompt_id,
                    tokens=tuple(prefix) + ("<failed>",),
                    origin=Origin.REINFERENCE,
                    parent_index=i,
                    anchor_index=anchor,
                    answer=UNEXTRACTABLE,
                )
            full_text = prefix_text + " " + continuation
            tokens = tuple(prefix) + tuple(continuation.split())
            if len(tokens) == len(prefix):
                tokens = tokens + ("<empty>",)
            return Trajectory(
                prompt_id=parent.prompt_id,
                tokens=tokens,
                origin=Origin.REINFERENCE,
                parent_index=i,
                anchor_index=anchor,
                answer=_answer_of_text(full_text),
            )

        children = list(pool.map(run_child, plans))

    return maternal, children
