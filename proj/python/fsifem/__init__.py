"""Finite element solver for coupled Stokes/wave and heat/wave systems.

Re-exports the compiled extension.  In an installed package the extension
sits next to this file; in a plain CMake build tree set FSIFEM_MODULE_DIR
to the directory containing the compiled module.
"""

import importlib
import importlib.machinery
import importlib.util
import os
import sys


def _load_extension():
    try:
        return importlib.import_module("._fsifem", __name__)
    except ImportError:
        pass
    module_dir = os.environ.get("FSIFEM_MODULE_DIR")
    if not module_dir:
        raise ImportError(
            "the compiled module _fsifem is not installed next to the package; "
            "set FSIFEM_MODULE_DIR to the build directory containing it"
        )
    for suffix in importlib.machinery.EXTENSION_SUFFIXES:
        candidate = os.path.join(module_dir, "_fsifem" + suffix)
        if os.path.exists(candidate):
            spec = importlib.util.spec_from_file_location(__name__ + "._fsifem", candidate)
            module = importlib.util.module_from_spec(spec)
            sys.modules[spec.name] = module
            spec.loader.exec_module(module)
            return module
    raise ImportError(f"no _fsifem extension found under {module_dir!r}")


_ext = _load_extension()

__version__ = _ext.__version__
case_names = _ext.case_names
mesh_info = _ext.mesh_info
run = _ext.run
verify_sources = _ext.verify_sources
convergence_space = _ext.convergence_space
convergence_time = _ext.convergence_time
self_convergence = _ext.self_convergence
ritz_sweep = _ext.ritz_sweep
fit_rate = _ext.fit_rate

__all__ = [
    "__version__",
    "case_names",
    "mesh_info",
    "run",
    "verify_sources",
    "convergence_space",
    "convergence_time",
    "self_convergence",
    "ritz_sweep",
    "fit_rate",
]
