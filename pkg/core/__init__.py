"""Core S-box primitives, spectral analysis and cryptographic properties."""
