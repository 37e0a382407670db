#!/usr/bin/env python3
"""
Butterfly Toolkit

Counts butterflies (2x2 bicliques) in bipartite graphs:
- Exact counting with degree-square side selection
- Per-vertex and per-edge local counts
- Vertex, edge, wedge and fast-edge sampling estimators
- One-shot edge and color sparsification
- Brute-force oracle with butterfly-pair types and variance bounds

Input: KONECT-style two-column edge lists
Output: JSON lines on standard output, diagnostics on standard error
"""

import sys
import os

# Add the app directory to Python path
app_dir = os.path.dirname(os.path.abspath(__file__))
if app_dir not in sys.path:
    sys.path.insert(0, app_dir)

from cli.app import main


if __name__ == "__main__":
    sys.exit(main())
