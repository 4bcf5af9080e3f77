"""REST backend exposing the four query functions over a loaded store.

Every endpoint is a pure function of (store, request): the store is opened
once at startup, read on demand, and never mutated. Error bodies all share
the shape {"error": str, "detail": optional object}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from starlette.exceptions import HTTPException as StarletteHTTPException

from .errors import DegenerateVectorError, UnknownTermError
from .semnet import EmbeddingStore, adjacency_to_csv

DEFAULT_K = 20


@dataclass
class ServiceConfig:
    store_path: str | Path | None = None
    host: str = "127.0.0.1"
    port: int = 8756
    max_k: int = 100
    max_tree_nodes: int = 500
    max_text_bytes: int = 65536
    cors_origins: list[str] = field(default_factory=lambda: ["*"])
    on_demand: bool = True

    def __post_init__(self):
        if self.max_k < 1 or self.max_tree_nodes < 1 or self.max_text_bytes < 1:
            raise ValueError("service limits must be positive")


def _error(status: int, message: str, detail: dict | None = None) -> JSONResponse:
    body: dict = {"error": message}
    if detail is not None:
        body["detail"] = detail
    return JSONResponse(body, status_code=status)


def projected_tree_nodes(breadth: int, depth: int) -> int:
    """Upper bound on non-root nodes: sum of breadth^i for i in 1..depth."""
    return sum(breadth ** i for i in range(1, depth + 1))


def create_app(store: EmbeddingStore, config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    app = FastAPI(title="termnet", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=config.cors_origins,
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(UnknownTermError)
    async def _unknown_term(_request, exc: UnknownTermError):
        return _error(404, "term not found", {"term": exc.term})

    @app.exception_handler(DegenerateVectorError)
    async def _degenerate(_request, exc: DegenerateVectorError):
        return _error(400, "term has a zero-norm vector", {"term": exc.term})

    @app.exception_handler(RequestValidationError)
    async def _validation(_request, exc: RequestValidationError):
        return _error(400, "invalid request",
                      {"errors": [str(e.get("msg", e)) + ": " +
                                  ".".join(str(p) for p in e.get("loc", ()))
                                  for e in exc.errors()]})

    @app.exception_handler(StarletteHTTPException)
    async def _http_error(_request, exc: StarletteHTTPException):
        detail = exc.detail if isinstance(exc.detail, dict) else None
        message = exc.detail if isinstance(exc.detail, str) else "request failed"
        return _error(exc.status_code, message, detail)

    @app.get("/v1/health")
    async def health():
        return {"status": "ok", "term_count": len(store), "dim": store.dim}

    @app.get("/v1/similarity")
    async def similarity(t1: str = Query(...), t2: str = Query(...)):
        return {"t1": t1, "t2": t2, "relevance": store.relevance(t1, t2)}

    @app.get("/v1/neighbors")
    async def neighbors(
        term: str = Query(...),
        k: int = Query(DEFAULT_K),
        exclude: str | None = Query(None),
    ):
        if not 1 <= k <= config.max_k:
            return _error(400, "k out of range",
                          {"k": k, "max_k": config.max_k})
        excluded = [t for t in exclude.split(",") if t.strip()] \
            if exclude else None
        result = store.top_k(term, k, exclude=excluded)
        return {
            "term": term,
            "neighbors": [{"term": t, "relevance": r} for t, r in result],
        }

    @app.post("/v1/adjacency")
    async def adjacency(request: Request):
        body = await request.body()
        if len(body) > config.max_text_bytes:
            return _error(413, "text too large",
                          {"bytes": len(body),
                           "max_text_bytes": config.max_text_bytes})
        if not body:
            return _error(400, "empty body")
        try:
            payload = json.loads(body)
        except ValueError:
            return _error(400, "body must be JSON")
        if not isinstance(payload, dict) or not isinstance(
                payload.get("text"), str) or not payload["text"].strip():
            return _error(400, "body must carry a non-empty 'text' field")
        terms, matrix = store.subgraph_adjacency(payload["text"])
        if "text/csv" in request.headers.get("accept", ""):
            return PlainTextResponse(adjacency_to_csv(terms, matrix),
                                     media_type="text/csv")
        return {"terms": terms, "matrix": [list(map(float, row))
                                           for row in matrix]}

    @app.get("/v1/tree")
    async def tree(
        root: str = Query(...),
        breadth: int = Query(3),
        depth: int = Query(3),
    ):
        if breadth < 1 or depth < 0:
            return _error(400, "breadth must be >= 1 and depth >= 0",
                          {"breadth": breadth, "depth": depth})
        bound = projected_tree_nodes(breadth, depth)
        if bound > config.max_tree_nodes:
            return _error(400, "projected tree exceeds the node limit",
                          {"bound": bound,
                           "max_tree_nodes": config.max_tree_nodes})
        return store.expand_tree(root, breadth, depth).to_dict()

    return app


def load_app(config: ServiceConfig) -> FastAPI:
    """Open the configured store and build the app around it."""
    if config.store_path is None:
        raise ValueError("service config has no store_path")
    store = EmbeddingStore.load(config.store_path, on_demand=config.on_demand)
    return create_app(store, config)
