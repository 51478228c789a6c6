import pytest

from docstruct.testkit import figure3_document


@pytest.fixture(scope="session")
def report():
    """The 400-line bundled invoice-variance report and its truth."""
    return figure3_document()


@pytest.fixture(scope="session")
def report_lines(report):
    return report[0]


@pytest.fixture(scope="session")
def line(report_lines):
    """1-based line accessor."""
    return lambda n: report_lines[n - 1]


INVOICE_SERIES = [1, 2, 3, 3, 4, 5, 1, 2, 3, 3, 3, 3, 3, 3, 5, 1, 3, 3, 3, 3, 4, 5]
