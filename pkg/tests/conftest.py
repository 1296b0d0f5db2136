CRITERION_NAMES = {
    "test_region_transition_reproduction": "region-transition reproduction",
    "test_dwell_monotonicity": "dwell monotonicity",
    "test_bounds_and_safety_sweep": "bounds and safety sweep",
    "test_vision_oracle_equivalence": "vision oracle equivalence",
    "test_protocol_fuzz": "protocol fuzz",
    "test_failsafe_timing": "failsafe timing",
    "test_determinism": "determinism",
    "test_desk_scale_performance": "desk-scale performance",
}


def pytest_runtest_logreport(report):
    # one verdict line per acceptance criterion, pass or fail
    if report.when != "call" or "test_acceptance.py" not in report.nodeid:
        return
    test = report.nodeid.split("::")[-1]
    name = CRITERION_NAMES.get(test, test)
    print(f"\nACCEPTANCE {name}: {'PASS' if report.passed else 'FAIL'}")
