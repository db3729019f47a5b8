"""Under ctest, import the module from the build tree rather than any
installed copy."""

import os
import sys

_build = os.environ.get("TRAJHEDGE_PYTHON_DIR")
if _build:
    sys.path.insert(0, _build)
    # Editable installs register a finder ahead of sys.path.
    sys.meta_path[:] = [f for f in sys.meta_path if "ScikitBuild" not in type(f).__name__]
