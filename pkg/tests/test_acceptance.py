"""Acceptance gate at full size: one line per criterion in the terminal summary.

Criteria 14 and 15 are informational and never fail.
"""

import pytest

from roughsupport import verification

PROFILE = verification.PROFILES["full"]


@pytest.mark.parametrize("cid", sorted(verification.CRITERIA))
def test_criterion(cid, acceptance_log):
    result = verification.CRITERIA[cid](PROFILE)
    line = verification.format_row(result)
    acceptance_log.append(line)
    print(line)
    assert result.passed, line
