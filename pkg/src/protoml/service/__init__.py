"""Local HTTP JSON API for the explorer UI."""

from .app import create_app
from .schemas import AnnotateRequest, ApiError, CheckoutRequest, fail, ok

__all__ = ["AnnotateRequest", "ApiError", "CheckoutRequest", "create_app", "fail", "ok"]
