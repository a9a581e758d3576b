import pytest

from gaze_autocal.cli import main


def run_cli(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_trace(path, rows):
    path.write_text("t_ms,x,y\n" + "".join(f"{t},{x},{y}\n" for t, x, y in rows))


def ts60(i):
    return round(i * 1000 / 60)


def test_replay_stationary_trace_hits_zone_after_100ms(tmp_path, capsys):
    trace = tmp_path / "trace.csv"
    write_trace(trace, [(ts60(i), 500.0, 100.0) for i in range(12)])
    code, out, err = run_cli(
        ["replay", str(trace), "--char-x", "500", "--char-y", "100",
         "--textbox-bottom", "200", "--nchar", "1"],
        capsys,
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "t_ms,raw_x,raw_y,cal_x,cal_y,eps_x,eps_y,zone_hit,updated"
    rows = [l.split(",") for l in lines[1:]]
    assert len(rows) == 12
    zone = [int(r[7]) for r in rows]
    assert zone[:6] == [0] * 6  # below the 100 ms duration rule
    assert all(z == 1 for z in zone[6:])


def test_replay_empty_trace_ok(tmp_path, capsys):
    trace = tmp_path / "empty.csv"
    trace.write_text("t_ms,x,y\n")
    code, out, _ = run_cli(["replay", str(trace)], capsys)
    assert code == 0
    assert out.strip() == "t_ms,raw_x,raw_y,cal_x,cal_y,eps_x,eps_y,zone_hit,updated"


def test_replay_decreasing_timestamp_cites_line(tmp_path, capsys):
    trace = tmp_path / "bad.csv"
    write_trace(trace, [(0, 1, 1), (17, 1, 1), (33, 1, 1), (20, 1, 1)])
    code, _, err = run_cli(["replay", str(trace)], capsys)
    assert code != 0
    assert "line 5" in err  # header + 3 good rows, bad row is file line 5


def test_replay_malformed_row_cites_line(tmp_path, capsys):
    trace = tmp_path / "bad.csv"
    trace.write_text("t_ms,x,y\n0,1,1\nnot,a\n")
    code, _, err = run_cli(["replay", str(trace)], capsys)
    assert code != 0
    assert "line 3" in err


def test_validate_config(tmp_path, capsys):
    cfg = tmp_path / "ok.cfg"
    cfg.write_text("tau = 150\nwindow = 64\n")
    code, out, _ = run_cli(["validate-config", str(cfg)], capsys)
    assert code == 0 and "ok" in out

    bad = tmp_path / "bad.cfg"
    bad.write_text("tau = 0\n")
    code, _, err = run_cli(["validate-config", str(bad)], capsys)
    assert code != 0
    assert "tau must be positive" in err


def test_session_command(tmp_path, capsys):
    out_csv = tmp_path / "telemetry.csv"
    code, out, _ = run_cli(
        ["session", "--phrase", "hi", "--system", "eyeo", "--offset", "75,0",
         "--seed", "3", "--out", str(out_csv)],
        capsys,
    )
    assert code == 0
    assert "completed" in out
    header = out_csv.read_text().splitlines()[0]
    assert header == "t_ms,raw_x,raw_y,cal_x,cal_y,eps_x,eps_y,zone_hit,updated,mode,activation"


def test_experiment_deterministic_and_structured(tmp_path, capsys):
    out1, out2 = tmp_path / "run1", tmp_path / "run2"
    for out_dir in (out1, out2):
        code, out, _ = run_cli(
            ["experiment", "--participants", "2", "--seed", "5", "--out", str(out_dir)],
            capsys,
        )
        assert code == 0
        assert "typing_speed_cpm" in out
    csv1 = (out1 / "sessions.csv").read_bytes()
    csv2 = (out2 / "sessions.csv").read_bytes()
    assert csv1 == csv2
    lines = csv1.decode().strip().splitlines()
    assert lines[0].startswith("participant,system,offset_dx")
    assert len(lines) == 1 + 2 * 10
    assert (out1 / "report.txt").exists()


def test_experiment_rejects_single_participant(tmp_path, capsys):
    code, _, err = run_cli(
        ["experiment", "--participants", "1", "--out", str(tmp_path / "x")], capsys
    )
    assert code != 0
    assert "participants" in err


def test_serve_lifecycle(tmp_path):
    import json
    import signal
    import socket
    import subprocess
    import sys
    import time

    log_path = tmp_path / "telemetry.ndjson"
    proc = subprocess.Popen(
        [sys.executable, "-m", "gaze_autocal.cli", "serve", "--port", "0", "--log", str(log_path)],
        stdout=subprocess.PIPE,
        stderr=subprocess.PIPE,
        text=True,
    )
    try:
        line = proc.stdout.readline()
        assert line.startswith("listening on ")
        port = int(line.strip().rsplit(":", 1)[1])
        with socket.create_connection(("127.0.0.1", port)) as sock:
            f = sock.makefile("rwb")
            f.write(b'{"kind":"HELLO"}\n')
            f.flush()
            assert json.loads(f.readline())["kind"] == "HELLO"
            states = 0
            for i in range(10):
                f.write(json.dumps({"kind": "SAMPLE", "t_ms": 17 * (i + 1), "x": 5.0, "y": 5.0}).encode() + b"\n")
                f.flush()
                while True:
                    reply = json.loads(f.readline())
                    if reply["kind"] == "STATE":
                        states += 1
                        break
            assert states == 10
    finally:
        proc.send_signal(signal.SIGINT)
        proc.wait(timeout=10)
    # telemetry flushed on shutdown: one line per server reply at least
    logged = log_path.read_text().strip().splitlines()
    assert len(logged) >= 11


def test_serve_port_in_use_exits_nonzero(capsys):
    import socket

    placeholder = socket.socket()
    placeholder.bind(("127.0.0.1", 0))
    placeholder.listen(1)
    port = placeholder.getsockname()[1]
    try:
        code, _, err = run_cli(["serve", "--port", str(port)], capsys)
        assert code != 0
        assert "cannot bind" in err or "error" in err
    finally:
        placeholder.close()


def test_bad_offset_flag_rejected(capsys):
    with pytest.raises(SystemExit):
        main(["session", "--offset", "banana"])


def test_unknown_command_rejected(capsys):
    with pytest.raises(SystemExit):
        main(["frobnicate"])
