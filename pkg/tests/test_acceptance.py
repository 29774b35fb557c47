"""One line per acceptance criterion; run with ``pytest -s`` to see them."""
import pytest

from dirac.acceptance import CRITERIA, run_one


@pytest.mark.parametrize("number", [n for n, _, _ in CRITERIA], ids=lambda n: f"criterion_{n}")
def test_criterion(number):
    result = run_one(number)
    print(result.line())
    assert result.passed, result.detail


def test_criterion_12_not_reproduced():
    line = ("[NOTE] criterion 12: the factorization theorem, the full etale equivalence and etale rigidity "
            "for ring spectra are out of reach; only the property suites cover them")
    print(line)
    pytest.skip("documented as not reproducible at desk scale")
