# Copyright 2026 The hemacd Authors
# SPDX-License-Identifier: Apache-2.0
"""End-to-end checks of the hemacd command line."""

import argparse
import csv
import signal
import socket
import subprocess
import sys
import tempfile
import time
from pathlib import Path


def free_port() -> int:
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


def run(args, **kw):
    return subprocess.run(args, capture_output=True, text=True, timeout=600, **kw)


def check(cond, msg):
    if not cond:
        print("FAIL:", msg)
        sys.exit(1)


def case_exit_codes(exe, data, conf, out):
    r = run([exe, "--input", data, "--norm", "-1"])
    check(r.returncode == 1, f"bad norm should exit 1, got {r.returncode}")
    r = run([exe, "--engine", "quantum"])
    check(r.returncode == 1, f"bad engine should exit 1, got {r.returncode}")
    r = run([exe, "--input", "/nonexistent.csv", "--engine", "oracle", "--out", out])
    check(r.returncode == 2, f"missing input should exit 2, got {r.returncode}")
    r = run([exe, "--input", data, "--engine", "oracle", "--out", out])
    check(r.returncode == 0, f"oracle run failed: {r.stderr}")
    check("MACD" in r.stdout, "report missing MACD row")
    rows = list(csv.DictReader(open(Path(out) / "signals.csv")))
    check(len(rows) == 165, f"expected 165 MACD values, got {len(rows)}")


def case_params_file(exe, data, conf, out):
    r = run([exe, "--input", data, "--engine", "exact-sim", "--params-file", conf, "--out", out])
    check(r.returncode == 0, f"exact-sim run failed: {r.stderr}")
    check("ring_degree = 1024" in r.stdout, "params file not applied")
    for row in csv.DictReader(open(Path(out) / "errors.csv")):
        check(float(row["mape_signed_form"]) == 0.0, f"exact-sim MAPE not zero: {row}")


def case_unbindable(exe, data, conf, out):
    # TEST-NET-1 is never assigned to a local interface.
    r = run([exe, "--role", "aggregator", "--addr", "192.0.2.1:7000", "--input", data,
             "--params-file", conf, "--tau", "0.001", "--out", out])
    check(r.returncode == 2, f"unbindable address should exit 2, got {r.returncode}")
    check("bind" in r.stderr, f"expected a bind error, got: {r.stderr}")


def case_two_traders(exe, data, conf, out):
    addr = f"127.0.0.1:{free_port()}"
    agg = subprocess.Popen([exe, "--role", "aggregator", "--addr", addr, "--traders", "2",
                            "--input", data, "--params-file", conf, "--out", out],
                           stdout=subprocess.PIPE, stderr=subprocess.PIPE, text=True)
    traders = [subprocess.Popen([exe, "--role", "trader", "--addr", addr],
                                stdout=subprocess.PIPE, stderr=subprocess.PIPE, text=True)
               for _ in range(2)]
    rcs = [t.wait(timeout=600) for t in traders]
    arc = agg.wait(timeout=600)
    check(arc == 0, f"aggregator exited {arc}: {agg.stderr.read()}")
    check(rcs == [0, 0], f"traders exited {rcs}")
    rows = list(csv.DictReader(open(Path(out) / "orders.csv")))
    check(len(rows) == 200, f"expected 200 order rows, got {len(rows)}")
    for row in rows:
        votes = row["trader_votes"].split(";")
        check(len(votes) == 2 and votes[0] == votes[1], f"traders disagree: {row}")


def case_sigint(exe, data, conf, out):
    addr = f"127.0.0.1:{free_port()}"
    agg = subprocess.Popen([exe, "--role", "aggregator", "--addr", addr, "--input", data,
                            "--params-file", conf, "--tau", "0.001", "--out", out],
                           stdout=subprocess.PIPE, stderr=subprocess.PIPE, text=True)
    trader = subprocess.Popen([exe, "--role", "trader", "--addr", addr],
                              stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL)
    log = Path(out) / "orders.csv"
    deadline = time.time() + 300
    while time.time() < deadline:
        if log.exists() and len(log.read_text().splitlines()) > 20:
            break
        time.sleep(0.05)
    agg.send_signal(signal.SIGINT)
    arc = agg.wait(timeout=120)
    trader.wait(timeout=120)
    check(arc != 0, "interrupted aggregator must exit nonzero")
    lines = log.read_text().splitlines()
    check(lines[0] == "tick,date,trader_votes,final_order", "partial log lacks header")
    check(20 <= len(lines) - 1 < 200, f"expected a partial log, got {len(lines) - 1} rows")


CASES = {
    "exit_codes": case_exit_codes,
    "params_file": case_params_file,
    "unbindable": case_unbindable,
    "two_traders": case_two_traders,
    "sigint": case_sigint,
}


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--exe", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--conf", required=True)
    p.add_argument("case", choices=sorted(CASES))
    a = p.parse_args()
    with tempfile.TemporaryDirectory() as out:
        CASES[a.case](a.exe, a.data, a.conf, out)
    print("ok:", a.case)


if __name__ == "__main__":
    main()
