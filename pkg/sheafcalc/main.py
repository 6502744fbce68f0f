import uvicorn
from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

# Import our application modules
from . import config
from .api import (birkhoff_endpoint, cohomology_endpoint, cusp_matrix_endpoint, cusp_tf_endpoint,
                  describe_endpoint, dual_endpoint, fm_endpoint, hom_endpoint, isomorphic_endpoint,
                  pullback_endpoint, pushforward_endpoint, stable_seq_endpoint, tensor_endpoint,
                  triple_endpoint, verify_endpoint)
from .utils import setup_logging

# Set up logging
logger = setup_logging()

# Initialize FastAPI app
app = FastAPI(title="Sheaf Calculator API")

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Include API routes
app.post("/api/birkhoff")(birkhoff_endpoint)
app.post("/api/describe")(describe_endpoint)
app.post("/api/triple")(triple_endpoint)
app.post("/api/cohomology")(cohomology_endpoint)
app.post("/api/tensor")(tensor_endpoint)
app.post("/api/dual")(dual_endpoint)
app.post("/api/pullback")(pullback_endpoint)
app.post("/api/pushforward")(pushforward_endpoint)
app.get("/api/stable-seq")(stable_seq_endpoint)
app.get("/api/cusp-matrix")(cusp_matrix_endpoint)
app.get("/api/cusp-tf")(cusp_tf_endpoint)
app.post("/api/hom")(hom_endpoint)
app.post("/api/isomorphic")(isomorphic_endpoint)
app.post("/api/fm")(fm_endpoint)
app.get("/api/verify")(verify_endpoint)

# Endpoint for health check
@app.get("/health")
async def health_check():
    return {"status": "healthy"}

# For local development
if __name__ == "__main__":
    uvicorn.run("sheafcalc.main:app", host=config.API_HOST, port=config.API_PORT, reload=True)
