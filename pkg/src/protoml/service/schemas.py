"""Pydantic models and the response envelope for the local JSON API.

Every response — success or failure — is an envelope: ``{"schema": ...,
"data": ...}`` or ``{"schema": "error/1", "error": {"code", "message"}}``,
never both. Payload documents are the same versioned dicts the CLI emits.
"""

from __future__ import annotations

from typing import Any

from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

ERROR_SCHEMA = "error/1"


class CheckoutRequest(BaseModel):
    node_id: str = Field(..., min_length=1)


class AnnotateRequest(BaseModel):
    node_id: str = Field(..., min_length=1)
    comment: str


class ApiError(BaseModel):
    code: str
    message: str


def ok(schema: str, data: Any, status_code: int = 200) -> JSONResponse:
    return JSONResponse({"schema": schema, "data": data}, status_code=status_code)


def fail(status_code: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(
        {"schema": ERROR_SCHEMA, "error": ApiError(code=code, message=message).model_dump()},
        status_code=status_code,
    )
