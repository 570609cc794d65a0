"""Drive the command line tool end to end into a scratch directory."""
import subprocess
import sys
import tempfile
from pathlib import Path

out = Path(tempfile.mkdtemp(prefix="mpso_demo_"))


def run(*args):
    cmd = [sys.executable, "-m", "mpso_lssvm.cli", *args]
    print("$", " ".join(cmd[2:]))
    subprocess.run(cmd, check=True)


run("cv", "--gamma", "100", "--sigma", "0.5", "--out", str(out / "cv"))
print((out / "cv" / "cv_report.txt").read_text())

run("train", "--gamma", "1.3", "--sigma", "2.9", "--out", str(out / "model"))
run("predict", "--model", str(out / "model" / "model.npz"), "--out", str(out / "pred"))
print("\n".join((out / "pred" / "predictions.csv").read_text().splitlines()[:8]))

# a collapsed box pins the swarm to one point, so this only shows the artifacts;
# drop the bounds to run the real desk search (a few minutes)
run("tune", "--gamma-bounds", "1.3", "1.3", "--sigma-bounds", "2.9", "2.9", "--folds", "5",
    "--config", str(Path(__file__).with_name("tiny_tune.json")), "--out", str(out / "tune"))
print((out / "tune" / "tune_report.txt").read_text()[:1200])
print("artifacts in", out)
