from models.responses import RunRecord
from persistence import RunLog


def record(subcommand="census", code=0):
    return RunRecord(subcommand=subcommand, params={"input": "f6.json"}, version="1.0.0",
                     inputs={"f6.json": "ab" * 32}, exit_code=code, summary={"count": 45})


def test_append_writes_one_line_per_record(tmp_path):
    log = RunLog(tmp_path / "runs.jsonl")
    log.append(record())
    log.append(record("exclude", 2))
    lines = (tmp_path / "runs.jsonl").read_text().splitlines()
    assert len(lines) == 2
    assert [r.subcommand for r in log.read_all()] == ["census", "exclude"]
    assert log.last().exit_code == 2


def test_existing_lines_are_kept(tmp_path):
    path = tmp_path / "runs.jsonl"
    log = RunLog(path)
    log.append(record())
    first = path.read_text()
    log.append(record("gen"))
    assert path.read_text().startswith(first)


def test_round_trip_keeps_fields(tmp_path):
    log = RunLog(tmp_path / "runs.jsonl")
    original = record()
    log.append(original)
    (restored,) = log.read_all()
    assert restored.id == original.id
    assert restored.timestamp == original.timestamp
    assert restored.summary == {"count": 45}


def test_bad_lines_are_skipped(tmp_path):
    path = tmp_path / "runs.jsonl"
    path.write_text("not a record\n")
    log = RunLog(path)
    log.append(record())
    assert len(log.read_all()) == 1


def test_missing_log_is_empty(tmp_path):
    log = RunLog(tmp_path / "absent.jsonl")
    assert log.read_all() == []
    assert log.last() is None
