from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import ValidationError
import logging
import time
import traceback

from api.routers import analysis, codes, debug, simulations
from core.errors import ScPccError
from core.settings import get_settings
from utils.enhanced_logger import configure_logging, log_error

logger = logging.getLogger(__name__)

configure_logging(get_settings().log_dir)

app = FastAPI(
    title="SC-PCC Threshold Decoding API",
    description="Self-orthogonal code validation, complexity analysis and BER spot checks",
    version="1.0.0"
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["http://localhost:3000"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


@app.middleware("http")
async def log_requests(request: Request, call_next):
    """Log every request with its status and duration"""
    start_time = time.time()
    response = await call_next(request)
    process_time = time.time() - start_time
    logger.info(f"{request.method} {request.url.path} -> {response.status_code} ({process_time:.3f}s)")
    return response


@app.exception_handler(ScPccError)
async def domain_exception_handler(request: Request, exc: ScPccError):
    """Domain errors are caller errors"""
    return JSONResponse(status_code=400, content={"detail": str(exc), "error_type": type(exc).__name__})


@app.exception_handler(ValidationError)
async def validation_exception_handler(request: Request, exc: ValidationError):
    return JSONResponse(status_code=400, content={"detail": str(exc), "error_type": "ValidationError"})


@app.exception_handler(Exception)
async def global_exception_handler(request: Request, exc: Exception):
    """Catch all unhandled exceptions and return an error id"""
    error_id = log_error(exc, "global_exception_handler", additional_info={
        "path": request.url.path,
        "method": request.method,
        "traceback": traceback.format_exc()
    })
    return JSONResponse(
        status_code=500,
        content={
            "detail": f"Internal server error: {str(exc)}",
            "error_id": error_id,
            "path": request.url.path
        }
    )


app.include_router(codes.router, prefix="/api/codes", tags=["codes"])
app.include_router(analysis.router, prefix="/api/analysis", tags=["analysis"])
app.include_router(simulations.router, prefix="/api/simulations", tags=["simulations"])
app.include_router(debug.router, prefix="/api/debug", tags=["debug"])


@app.get("/")
async def root():
    return {"message": "SC-PCC API is running"}


@app.get("/health")
async def health_check():
    return {"status": "healthy"}


if __name__ == "__main__":
    import uvicorn

    uvicorn.run(app, host="127.0.0.1", port=8000, log_level="info")
