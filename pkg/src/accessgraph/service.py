"""HTTP JSON API over the engine.

Sessions hold one graph document each, in memory only (account structure
is sensitive; nothing is written to disk). Every mutation bumps a
revision counter; PUT accepts an If-Match revision for compare-and-set,
and analysis responses echo the revision they were computed from, so a
client can tell stale answers apart after concurrent edits.
"""

from __future__ import annotations

import re
import threading
import time
import uuid
from dataclasses import dataclass

from fastapi import Body, FastAPI, Header, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .accessibility import (
    accessibility_band,
    account_report,
    analyze_account,
    render_score,
    what_if,
)
from .errors import AagError, InvalidDocument
from .formulas import UnmappedLeafPolicy
from .graph import AccountAccessGraph, build_graph, serialize_graph
from .providers import (
    PROVIDERS,
    instantiate_user_graph,
    record_from_json,
    template_manifest,
)
from .security import ScoringPolicy

DEFAULT_SESSION_TTL_SECONDS = 3600.0
DEFAULT_MAX_BODY_BYTES = 1_000_000


class ServiceError(Exception):
    status = 500
    code = "internal"

    def __init__(self, message: str):
        super().__init__(message)


class UnknownSession(ServiceError):
    status = 404
    code = "unknown_session"

    def __init__(self, session_id: str):
        super().__init__(f"no such session: {session_id}")


class UnknownTemplate(ServiceError):
    status = 404
    code = "unknown_template"

    def __init__(self, provider: str):
        super().__init__(f"no template for provider: {provider}")


class StaleRevision(ServiceError):
    status = 409
    code = "stale_revision"

    def __init__(self, expected: int, actual: int):
        super().__init__(
            f"revision {expected} is stale, the session is at revision {actual}"
        )


@dataclass
class StoredGraph:
    document: dict
    graph: AccountAccessGraph
    revision: int
    touched: float


class GraphStore:
    """Session map with strictly increasing revisions and idle expiry.

    `get` hands out a consistent snapshot: replace() swaps in a fresh
    StoredGraph, so a snapshot never mixes one revision's document with
    another's graph.
    """

    def __init__(
        self,
        *,
        ttl_seconds: float = DEFAULT_SESSION_TTL_SECONDS,
        clock=time.monotonic,
    ):
        self._ttl = ttl_seconds
        self._clock = clock
        self._lock = threading.Lock()
        self._sessions: dict[str, StoredGraph] = {}

    def create(self, document: dict) -> tuple[str, StoredGraph]:
        graph = build_graph(document)
        session_id = uuid.uuid4().hex
        item = StoredGraph(
            document=serialize_graph(graph),
            graph=graph,
            revision=1,
            touched=self._clock(),
        )
        with self._lock:
            self._purge()
            self._sessions[session_id] = item
        return session_id, item

    def get(self, session_id: str) -> StoredGraph:
        with self._lock:
            self._purge()
            item = self._sessions.get(session_id)
            if item is None:
                raise UnknownSession(session_id)
            item.touched = self._clock()
            return item

    def replace(
        self, session_id: str, document: dict, expected_revision: int | None
    ) -> StoredGraph:
        graph = build_graph(document)
        with self._lock:
            self._purge()
            item = self._sessions.get(session_id)
            if item is None:
                raise UnknownSession(session_id)
            if expected_revision is not None and expected_revision != item.revision:
                raise StaleRevision(expected_revision, item.revision)
            replacement = StoredGraph(
                document=serialize_graph(graph),
                graph=graph,
                revision=item.revision + 1,
                touched=self._clock(),
            )
            self._sessions[session_id] = replacement
            return replacement

    def _purge(self) -> None:
        now = self._clock()
        for session_id in [
            sid for sid, item in self._sessions.items() if now - item.touched > self._ttl
        ]:
            del self._sessions[session_id]


def _error_body(code: str, message: str, path: str | None) -> dict:
    return {"code": code, "message": message, "path": path}


_CAMEL_BOUNDARY = re.compile(r"(?<!^)(?=[A-Z])")


def _error_code(exc: AagError) -> str:
    return _CAMEL_BOUNDARY.sub("_", type(exc).__name__).lower()


def _leaf_policy(options: dict) -> UnmappedLeafPolicy:
    token = options.get("leaf_policy", UnmappedLeafPolicy.ABSTRACT.value)
    try:
        return UnmappedLeafPolicy(token)
    except ValueError:
        raise InvalidDocument(f"unknown leaf_policy {token!r}") from None


def create_app(
    *,
    store: GraphStore | None = None,
    scoring_policy: ScoringPolicy | None = None,
    max_body_bytes: int = DEFAULT_MAX_BODY_BYTES,
) -> FastAPI:
    graphs = store if store is not None else GraphStore()
    policy = scoring_policy if scoring_policy is not None else ScoringPolicy()

    app = FastAPI(title="accessgraph", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.middleware("http")
    async def size_cap(request: Request, call_next):
        # Enforced via Content-Length; bodies without it pass through.
        declared = request.headers.get("content-length")
        if declared is not None and declared.isdigit() and int(declared) > max_body_bytes:
            return JSONResponse(
                status_code=413,
                content=_error_body(
                    "size_cap", f"request body exceeds {max_body_bytes} bytes", None
                ),
            )
        return await call_next(request)

    @app.exception_handler(AagError)
    async def on_engine_error(request: Request, exc: AagError):
        return JSONResponse(
            status_code=400,
            content=_error_body(_error_code(exc), str(exc), getattr(exc, "path", None)),
        )

    @app.exception_handler(ServiceError)
    async def on_service_error(request: Request, exc: ServiceError):
        return JSONResponse(
            status_code=exc.status,
            content=_error_body(exc.code, str(exc), None),
        )

    @app.exception_handler(RequestValidationError)
    async def on_request_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content=_error_body("invalid_request", str(exc.errors()[:1]), None),
        )

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.post("/graphs", status_code=201)
    def create_graph(document: dict = Body(...)):
        session_id, item = graphs.create(document)
        return {
            "id": session_id,
            "revision": item.revision,
            "warnings": list(item.graph.warnings),
        }

    @app.get("/graphs/{session_id}")
    def get_graph(session_id: str):
        item = graphs.get(session_id)
        return {"id": session_id, "revision": item.revision, "document": item.document}

    @app.put("/graphs/{session_id}")
    def put_graph(
        session_id: str,
        document: dict = Body(...),
        if_match: int | None = Header(default=None),
    ):
        item = graphs.replace(session_id, document, if_match)
        return {
            "id": session_id,
            "revision": item.revision,
            "warnings": list(item.graph.warnings),
        }

    @app.post("/graphs/{session_id}/analyze")
    def analyze(session_id: str, options: dict | None = Body(default=None)):
        options = options or {}
        leaf_policy = _leaf_policy(options)
        item = graphs.get(session_id)
        accounts = options.get("accounts") or list(item.graph.roots)
        if not accounts:
            raise InvalidDocument("graph has no root account to analyze")
        return {
            "revision": item.revision,
            "accounts": [
                account_report(
                    analyze_account(
                        item.graph, account,
                        scoring_policy=policy, leaf_policy=leaf_policy,
                    ),
                    include_legacy=True,
                )
                for account in accounts
            ],
        }

    @app.post("/graphs/{session_id}/what-if")
    def what_if_route(session_id: str, body: dict = Body(...)):
        lose = body.get("lose")
        if not isinstance(lose, list) or not all(isinstance(x, str) for x in lose):
            raise InvalidDocument("'lose' must be a list of access-method ids")
        leaf_policy = _leaf_policy(body)
        item = graphs.get(session_id)
        account = body.get("account")
        if account is None:
            if not item.graph.roots:
                raise InvalidDocument("graph has no root account to analyze")
            account = item.graph.roots[0]
        outcome = what_if(item.graph, account, set(lose), leaf_policy)
        return {
            "revision": item.revision,
            "account": account,
            "lost": sorted(outcome.lost),
            "accessible": outcome.accessible,
            "score": render_score(outcome.result.score),
            "score_decimal": float(outcome.result.score),
            "band": accessibility_band(outcome.result.score),
            "reduced_term": [sorted(imp) for imp in outcome.result.reduced.implicants],
            "lockout_sets": [sorted(s) for s in outcome.result.lockout_sets],
        }

    @app.get("/templates/{provider}")
    def template(provider: str):
        if provider not in PROVIDERS:
            raise UnknownTemplate(provider)
        return template_manifest(provider)

    @app.post("/instantiate")
    def instantiate(record: dict = Body(...)):
        graph = instantiate_user_graph(record_from_json(record))
        return serialize_graph(graph)

    return app
