from nonmarkov.validation import run_validation


def test_quick_suite_passes():
    results = run_validation(quick=True)
    assert results, "no checks ran"
    for r in results:
        assert r.passed, f"{r.name}: {r.detail}"
