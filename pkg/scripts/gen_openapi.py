#!/usr/bin/env python3
"""Regenerate docs/openapi.json from the live FastAPI app."""
import json
from pathlib import Path

from ioha.service import create_app

out = Path(__file__).resolve().parent.parent / "docs" / "openapi.json"
out.write_text(json.dumps(create_app().openapi(), indent=2) + "\n")
print(f"wrote {out}")
