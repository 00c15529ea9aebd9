"""HTTP service layer: request/response schemas, handlers, FastAPI app."""
