"""Operator command line.

Exit codes: 0 success, 1 usage error, 2 runtime/domain error.
"""

from __future__ import annotations

import csv
import json
import sys
from pathlib import Path

import click

from . import dialog as dialog_mod
from . import synth as synth_mod
from . import triage as triage_mod
from .errors import VitalkitError
from .frameio import load_sequence, write_sequence
from .vitals import Spo2Calibration, estimate_hr, estimate_rr, estimate_spo2


@click.group()
def cli():
    """Camera-based vitals estimation and patient triage toolkit."""


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    click.echo(text)


@cli.command()
@click.option("--kind", type=click.Choice(["hr", "rr", "spo2"]), required=True)
@click.option("--frames", "frames_dir", required=True, type=click.Path(), help="Directory of frame_%06d.ppm files.")
@click.option("--fps", type=float, required=True)
@click.option("--roi", default="auto", show_default=True, help="auto | center:F | box:x,y,w,h")
@click.option("--cal", default=None, help="Oximetry calibration as 'A,B'.")
@click.option("--out", default=None, type=click.Path(), help="Also write the report JSON here.")
def estimate(kind, frames_dir, fps, roi, cal, out):
    """Estimate a vital sign from a directory of frames."""
    seq = load_sequence(frames_dir, fps)
    if kind == "hr":
        report = estimate_hr(seq, roi)
    elif kind == "rr":
        report = estimate_rr(seq)
    else:
        calibration = Spo2Calibration()
        if cal:
            try:
                a, b = (float(v) for v in cal.split(","))
            except ValueError:
                raise click.UsageError("--cal expects two numbers, e.g. 100,5") from None
            calibration = Spo2Calibration(a, b)
        report = estimate_spo2(seq, calibration)
    _emit(report.to_dict(), out)


@cli.command()
@click.option("--spec", "spec_path", required=True, type=click.Path(exists=True), help="SynthSpec JSON file.")
@click.option("--seed", type=int, required=True)
@click.option("--out", "out_dir", required=True, type=click.Path())
def synth(spec_path, seed, out_dir):
    """Generate a synthetic frame directory plus a ground_truth.json sidecar."""
    spec = synth_mod.SynthSpec.from_json(Path(spec_path).read_text())
    seq = synth_mod.generate(spec, seed)
    write_sequence(seq, out_dir)
    cal = Spo2Calibration() if spec.spo2_ratio_R is not None else None
    truth = synth_mod.ground_truth(spec, cal)
    sidecar = {"seed": seed, "spec": spec.to_dict(), **truth}
    if cal is not None:
        sidecar["calibration"] = {"A": cal.A, "B": cal.B}
    Path(out_dir, "ground_truth.json").write_text(json.dumps(sidecar, indent=2) + "\n")
    click.echo(f"wrote {len(seq)} frames to {out_dir}")


@cli.group()
def triage():
    """Score, rank and manage patient records."""


def _load_store(path: str) -> triage_mod.PatientStore:
    return triage_mod.PatientStore(path)


def _load_weights(path: str | None) -> tuple:
    cfg = triage_mod.load_config(path)
    return triage_mod.WeightTable(cfg["weights"]), cfg


@triage.command()
@click.option("--store", "store_path", required=True, type=click.Path())
@click.option("--record", "record_path", required=True, type=click.Path(), help="Record JSON file, or '-' for stdin.")
def upsert(store_path, record_path):
    """Insert or replace one patient record."""
    text = sys.stdin.read() if record_path == "-" else Path(record_path).read_text()
    data = json.loads(text)
    if not data.get("id"):
        data["id"] = triage_mod.new_patient_id()
    record = triage_mod.PatientRecord.from_dict(data)
    stored = _load_store(store_path).upsert(record)
    _emit(stored.to_dict(), None)


@triage.command()
@click.option("--store", "store_path", required=True, type=click.Path())
@click.option("--id", "patient_id", required=True)
def delete(store_path, patient_id):
    """Delete a patient record by id."""
    _load_store(store_path).delete(patient_id)
    click.echo(json.dumps({"deleted": patient_id}))


@triage.command()
@click.option("--store", "store_path", required=True, type=click.Path())
@click.option("--name", default=None)
@click.option("--age", type=float, default=None)
def search(store_path, name, age):
    """Find records by name substring and/or exact age."""
    hits = _load_store(store_path).search(name=name, age=age)
    _emit({"patients": [r.to_dict() for r in hits]}, None)


@triage.command()
@click.option("--store", "store_path", required=True, type=click.Path())
@click.option("--weights", "weights_path", default=None, type=click.Path(exists=True))
def rank(store_path, weights_path):
    """Rank all stored patients by descending score."""
    weights, cfg = _load_weights(weights_path)
    scores = triage_mod.rank(_load_store(store_path).all_records(), weights, cfg)
    _emit(
        {
            "ranking": [
                {"patient_id": s.patient_id, "score": s.score, "contributions": s.contributions}
                for s in scores
            ]
        },
        None,
    )


@triage.command()
@click.option("--store", "store_path", required=True, type=click.Path())
@click.option("--id", "patient_id", required=True)
@click.option("--weights", "weights_path", default=None, type=click.Path(exists=True))
def score(store_path, patient_id, weights_path):
    """Score a single stored patient."""
    weights, cfg = _load_weights(weights_path)
    record = _load_store(store_path).get(patient_id)
    s = triage_mod.score(record, weights, cfg)
    _emit({"patient_id": s.patient_id, "score": s.score, "contributions": s.contributions}, None)


def _read_readings(path: str) -> list[tuple[str, dict]]:
    rows = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"person", "hr", "rr", "spo2"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise VitalkitError("csv needs columns person,hr,rr,spo2")
        for row in reader:
            rows.append(
                (row["person"], {k: float(row[k]) for k in ("hr", "rr", "spo2")})
            )
    return rows


def agreement_report(oximeter_csv: str, televital_csv: str) -> dict:
    """Per-person and overall mean absolute error between two reading sets.

    Rows pair up in file order within each person; both files must list the
    same people with the same number of rows.
    """
    ox = _read_readings(oximeter_csv)
    tv = _read_readings(televital_csv)
    if [p for p, _ in ox] != [p for p, _ in tv]:
        raise VitalkitError("csv files do not pair up by person")
    per_person: dict[str, dict] = {}
    diffs = {"hr": [], "rr": [], "spo2": []}
    for (person, a), (_, b) in zip(ox, tv):
        bucket = per_person.setdefault(person, {"hr": [], "rr": [], "spo2": []})
        for vital in ("hr", "rr", "spo2"):
            d = abs(a[vital] - b[vital])
            bucket[vital].append(d)
            diffs[vital].append(d)
    result = {
        "per_person": {
            person: {v: sum(ds) / len(ds) for v, ds in buckets.items()}
            for person, buckets in per_person.items()
        },
        "overall": {v: sum(ds) / len(ds) for v, ds in diffs.items()},
    }
    return result


@cli.command()
@click.option("--oximeter", "oximeter_csv", required=True, type=click.Path(exists=True))
@click.option("--televital", "televital_csv", required=True, type=click.Path(exists=True))
@click.option("--json", "as_json", is_flag=True, help="Print JSON instead of the table.")
@click.option("--out", default=None, type=click.Path(), help="Also write the JSON report here.")
def report(oximeter_csv, televital_csv, as_json, out):
    """Mean-absolute-error agreement between oximeter and portal readings."""
    result = agreement_report(oximeter_csv, televital_csv)
    if out:
        Path(out).write_text(json.dumps(result, indent=2) + "\n")
    if as_json:
        click.echo(json.dumps(result, indent=2))
        return
    click.echo(f"{'person':<10}{'hr':>8}{'rr':>8}{'spo2':>8}")
    for person, maes in result["per_person"].items():
        click.echo(f"{person:<10}{maes['hr']:>8.3f}{maes['rr']:>8.3f}{maes['spo2']:>8.3f}")
    o = result["overall"]
    click.echo(f"{'overall':<10}{o['hr']:>8.3f}{o['rr']:>8.3f}{o['spo2']:>8.3f}")


@cli.command()
@click.option("--port", type=int, default=None)
@click.option("--store", "store_path", default=None, type=click.Path())
@click.option("--max-frames", type=int, default=None)
@click.option("--workers", type=int, default=None)
@click.option("--config", "config_path", default=None, type=click.Path(exists=True))
def serve(port, store_path, max_frames, workers, config_path):
    """Run the HTTP service."""
    import uvicorn

    from .service import ServiceConfig, create_app

    config = ServiceConfig.load(config_path)
    if port is not None:
        config.port = port
    if store_path is not None:
        config.store_path = store_path
    if max_frames is not None:
        config.max_frames = max_frames
    if workers is not None:
        config.workers = workers
    uvicorn.run(create_app(config), host="0.0.0.0", port=config.port)


@cli.command()
@click.option("--graph", "graph_path", default=None, type=click.Path(exists=True),
              help="Graph JSON file; defaults to the built-in screening graph.")
def dialog(graph_path):
    """Walk a dialog graph interactively.

    Type a choice label to follow it, press enter for the default link,
    '!return' to jump back to the last checkpoint, '!quit' to leave.
    """
    graph = (
        dialog_mod.DialogGraph.from_file(graph_path)
        if graph_path
        else dialog_mod.load_builtin_graph()
    )
    session = dialog_mod.start_session(graph)
    while True:
        node = session.current_node
        click.echo(node.text)
        if node.is_terminal:
            return
        if node.choices:
            click.echo(f"choices: {', '.join(node.choice_labels())}")
        try:
            line = click.prompt("", prompt_suffix="> ", default="", show_default=False)
        except (EOFError, click.exceptions.Abort):
            return
        line = line.strip()
        if line == "!quit":
            return
        try:
            if line == "!return":
                dialog_mod.return_to_checkpoint(session)
            elif line == "":
                dialog_mod.step(session)
            else:
                dialog_mod.step(session, line)
        except VitalkitError as exc:
            click.echo(f"({exc})")


def main(argv=None):
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Abort:
        sys.exit(1)
    except click.UsageError as exc:
        exc.show()
        sys.exit(1)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)
    except (VitalkitError, OSError, json.JSONDecodeError) as exc:
        click.echo(str(exc), err=True)
        sys.exit(2)
    sys.exit(0)


if __name__ == "__main__":
    main()
