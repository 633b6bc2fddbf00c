"""Python front end for the chaoslab library."""

import json
from importlib import resources

from ._chaoslab import (
    ChaoslabError,
    __version__,
    generate_sequence,
    run,
    shift_metric,
    systems,
    torus_distance,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NEGATIVE = 2


def run_json(*args):
    """Run a command with its artifact sent to stdout; returns (exit_code, artifact or None, stderr)."""
    code, out, err = run([*map(str, args), "--out", "-"])
    return code, (json.loads(out) if code == EXIT_OK and out else None), err


def certify_bohr(system, seq="constant_one", n_max=1000, **options):
    argv = ["certify-bohr", "--system", system, "--seq", seq, "--n-max", n_max]
    for key, value in options.items():
        argv += ["--" + key.replace("_", "-"), value]
    return run_json(*argv)


def schema(name):
    """The versioned JSON schema shipped with the package, e.g. schema("bohr-certificate")."""
    return json.loads(resources.files(__name__).joinpath("schemas", f"{name}.schema.json").read_text())


__all__ = [
    "ChaoslabError",
    "EXIT_ERROR",
    "EXIT_NEGATIVE",
    "EXIT_OK",
    "__version__",
    "certify_bohr",
    "generate_sequence",
    "run",
    "run_json",
    "schema",
    "shift_metric",
    "systems",
    "torus_distance",
]
