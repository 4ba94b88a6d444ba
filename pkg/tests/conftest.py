import textwrap

import pytest

ATOMS = """
[atom_a]
name = A
omega = 2.0e15
dipole = 2.5e-29
linewidth = 1.0e9
mass = 1.4e-25

[atom_b]
name = B
omega = 1.96e15
dipole = 2.5e-29
linewidth = 1.0e9
mass = 1.4e-25
"""


def make_config(body, atoms=ATOMS):
    return textwrap.dedent(atoms) + textwrap.dedent(body)


@pytest.fixture
def write_config(tmp_path):
    def _write(body, name="run.ini", atoms=ATOMS):
        p = tmp_path / name
        p.write_text(make_config(body, atoms))
        return str(p)

    return _write


ACCEPTANCE_LINES = {}


@pytest.fixture
def acceptance(capsys):
    """Record and print one pass/fail line per acceptance criterion."""

    def report(number, passed, detail):
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'} {detail}"
        ACCEPTANCE_LINES[number] = line
        with capsys.disabled():
            print("\n" + line)
        return passed

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
