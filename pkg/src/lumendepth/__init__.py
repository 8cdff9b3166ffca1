"""Desk-scale workbench for single-shot monocular depth estimation in
endoscope-like scenes: procedural scene rendering, Lambertian surface
translation by unpaired domain adaptation, edge-aware depth-network
training, a classical shape-from-shading oracle, and an evaluation
harness with affine depth correction."""

__version__ = "0.1.0"
