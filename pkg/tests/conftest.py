import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import slicescale  # noqa: E402
from slicescale import cli, feasibility, newton  # noqa: E402

INFEASIBLE_SEEN = {"count": 0, "unsound": 0}

_original_check = feasibility.check_scalability


def _audited_check(B, s, *args, **kwargs):
    """Every Infeasible verdict produced anywhere in the run must carry a
    certificate that passes verify_certificate."""
    report = _original_check(B, s, *args, **kwargs)
    if not report.feasible:
        INFEASIBLE_SEEN["count"] += 1
        if report.certificate is None or not feasibility.verify_certificate(
            B, s, report.certificate
        ):
            INFEASIBLE_SEEN["unsound"] += 1
            raise AssertionError("Infeasible verdict without a valid certificate")
    return report


# Patched at import time, before test modules bind the name.
for _mod in (feasibility, newton, cli, slicescale):
    _mod.check_scalability = _audited_check


def pytest_terminal_summary(terminalreporter):
    terminalreporter.write_line(
        f"certificate audit: {INFEASIBLE_SEEN['count']} Infeasible verdicts, "
        f"{INFEASIBLE_SEEN['unsound']} without a valid certificate"
    )
