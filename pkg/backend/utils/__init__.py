# Utils package for backend utilities
# enhanced_logger itself is not re-exported; the name would shadow the submodule
from .enhanced_logger import (
    configure_logging,
    log_error,
    log_processing_step,
    log_simulation_point
)
