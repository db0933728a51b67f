from dataclasses import replace

from sdapsim.config import load_scenario
from sdapsim.sim import run_scenario
from sdapsim.validation import CHECKPOINTS, FAILED, PASSED, evaluate, format_checklist, run_checklist


def test_checklist_order_and_pass():
    report, results = run_checklist(load_scenario("table1_scenario.ini"))
    assert [r.name for r in results] == list(CHECKPOINTS)
    assert all(r.status == PASSED for r in results)
    text = format_checklist(results)
    assert text.splitlines()[1].startswith("QFI extraction from QosTagReq tag")


def test_tampered_log_is_detected():
    report = run_scenario(replace(load_scenario("table1_scenario.ini"), duration=0.1))
    report.event_log = [
        line.replace("Selected DRB = 1", "Selected DRB = 2") for line in report.event_log
    ]
    status = {r.name: r.status for r in evaluate(report)}
    assert status["QFI-to-DRB logical mapping"] == FAILED
    assert status["DRB mapping verification"] == PASSED


def test_lost_packets_fail_integrity():
    cfg = load_scenario("table1_scenario.ini")
    cfg = replace(cfg, duration=2, link=replace(cfg.link, service_rate=20_000, per_queue_capacity=1))
    status = {r.name: r.status for r in run_checklist(cfg)[1]}
    assert status["End-to-end packet integrity"] == FAILED
