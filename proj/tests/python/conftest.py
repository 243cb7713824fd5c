import os
import sys

# When the package is not installed, pick up the freshly built extension from
# the CMake build tree (ctest sets BELIEFSIM_CORE_DIR) and the python sources
# from the repo.
_core_dir = os.environ.get("BELIEFSIM_CORE_DIR")
_repo_root = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

try:
    import beliefsim  # noqa: F401
except ImportError:
    if _core_dir:
        sys.path.insert(0, os.path.join(_repo_root, "python"))
        import importlib.util

        for name in os.listdir(_core_dir):
            if name.startswith("_core.") and (name.endswith(".so") or name.endswith(".pyd")):
                spec = importlib.util.spec_from_file_location(
                    "beliefsim._core", os.path.join(_core_dir, name))
                module = importlib.util.module_from_spec(spec)
                sys.modules["beliefsim._core"] = module
                spec.loader.exec_module(module)
                break
