import pytest

# Hand-derived certificate data for H_n(3) at r = 2: level-1 bounds 1+3/n and
# 1+3/n+2/n^2 (k=2), level-0 bounds (3/4)n^3+(3/2)n^2+(25/12)n + 19/9 or 37/9
# (k=0), thresholds N1=1, N2=8, base window 5..8.
H3_HAND_CERT = {
    "r": 2,
    "rho": 1,
    "levels": [
        {"level": 1, "k": 2,
         "f": [[0, 1, "1/1"], [-1, 1, "3/1"]],
         "g": [[0, 1, "1/1"], [-1, 1, "3/1"], [-2, 1, "2/1"]]},
        {"level": 0, "k": 0,
         "f": [[3, 1, "3/4"], [2, 1, "3/2"], [1, 1, "25/12"], [0, 1, "19/9"]],
         "g": [[3, 1, "3/4"], [2, 1, "3/2"], [1, 1, "25/12"], [0, 1, "37/9"]]},
    ],
    "thresholds": {"N0": 5, "N1": 1, "N2": 8},
    "sign_pattern": [{"index": 0, "sign": "-", "from": 0}, {"index": 1, "sign": "+", "from": 0},
                     {"index": 2, "sign": "+", "from": 0}, {"index": 3, "sign": "+", "from": 0}],
    "base_window": [5, 8],
    "N": 8,
}


@pytest.fixture
def h3_hand_cert():
    import copy
    return copy.deepcopy(H3_HAND_CERT)


# -- acceptance reporting: one pass/fail line per criterion --------------------------

_CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    if rep.when == "call" or rep.failed:
        status = "PASS" if rep.passed else "FAIL"
        if _CRITERIA.get(number, ("PASS",))[0] != "FAIL":
            _CRITERIA[number] = (status, title)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        status, title = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {title}")
