"""
Start the sheafcalc HTTP API.

Host and port come from API_HOST and PORT (see sheafcalc.config).
"""
import logging

import uvicorn

from sheafcalc import config
from sheafcalc.utils import setup_logging

logger = setup_logging()


def run_server():
    logger.info(f"Starting sheafcalc API on {config.API_HOST}:{config.API_PORT}")
    uvicorn.run("sheafcalc.main:app", host=config.API_HOST, port=config.API_PORT)


if __name__ == "__main__":
    try:
        run_server()
    except KeyboardInterrupt:
        logging.getLogger("sheafcalc").info("Server stopped by user")
