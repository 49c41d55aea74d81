import csv

import numpy as np
import pytest
from PIL import Image

from lainfig import FAMILIES, PlotSpec, load_spec, render
from lainfig.cli import main as cli_main
from lainfig.data import MissingColumns, load_table, moving_average
from lainfig.render import render_all


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


DETECTION_HEADER = ["scenario", "scheme", "p1", "p2", "p3", "thr", "seed",
                    "detection_slots"]
CURVES_HEADER = ["scenario", "algorithm", "learning_rate", "n_demands", "seed",
                 "episode", "reward_sum", "mean_loss", "epsilon"]
SUMMARY_HEADER = ["scenario", "algorithm", "varsigma", "n_uavs", "n_malicious",
                  "n_demands", "seed", "tsr", "mean_e2e_s", "objective", "reward_sum"]


@pytest.fixture
def detection_csv(tmp_path):
    rows = []
    rng = np.random.default_rng(0)
    for triple in [(0.6, 0.6, 0.6), (0.8, 0.8, 0.8)]:
        for scheme in ("adaptive", "average", "random"):
            for seed in range(9):
                slots = int(rng.integers(2, 40))
                if scheme == "average" and seed == 0:
                    slots = -1  # undetected sentinel
                rows.append(("trust_detection", scheme, *triple, 0.8, seed, slots))
    path = tmp_path / "trust_detection.csv"
    write_csv(path, DETECTION_HEADER, rows)
    return path


@pytest.fixture
def curves_csv(tmp_path):
    rows = []
    for algo in ("SP-MADDQN", "MADQN"):
        for ep in range(40):
            reward = 10 + ep * 0.5 + (3.0 if algo == "SP-MADDQN" else 0.0)
            loss = 5.0 / (1 + ep) if ep > 2 else float("nan")
            rows.append(("training_convergence", algo, 0.005, 25, 0, ep,
                         reward, loss, max(0.01, 1 - ep / 32)))
    path = tmp_path / "training_convergence.csv"
    write_csv(path, CURVES_HEADER, rows)
    return path


@pytest.fixture
def summary_csv(tmp_path):
    rows = []
    rng = np.random.default_rng(1)
    for algo in ("SP-MADDQN", "MADQN"):
        for sigma in (0.0, 0.2, 2.0):
            for nu in (6, 10):
                for nm in (0, 2):
                    for nd in (15, 25):
                        for seed in range(3):
                            rows.append(("algo_comparison", algo, sigma, nu, nm, nd,
                                         seed, float(rng.uniform(0.4, 1.0)),
                                         float(rng.uniform(0.05, 0.4)),
                                         float(rng.uniform(1, 10)),
                                         float(rng.uniform(10, 80))))
    path = tmp_path / "summary.csv"
    write_csv(path, SUMMARY_HEADER, rows)
    return path


def family_source(family, detection, curves, summary):
    return {
        "detection_bars": detection,
        "threshold_lines": detection,
        "convergence_curves": curves,
        "loss_curves": curves,
        "sigma_sensitivity": summary,
        "delay_bars": summary,
        "tsr_bars": summary,
        "scale_sweep": summary,
    }[family]


@pytest.mark.parametrize("family", FAMILIES)
def test_every_family_renders(family, detection_csv, curves_csv, summary_csv, tmp_path):
    source = family_source(family, detection_csv, curves_csv, summary_csv)
    if family == "threshold_lines":
        # threshold plots key off the thr column; give it some spread
        table = load_table(source)
        rows = list(zip(*[table[c] for c in DETECTION_HEADER]))
        rows = [(*r[:5], 0.6 if int(r[6]) % 2 else 0.9, r[6], r[7]) for r in rows]
        source = tmp_path / "thr.csv"
        write_csv(source, DETECTION_HEADER, rows)
    out = tmp_path / f"{family}.png"
    spec = PlotSpec(family=family, input_csv=str(source), output_image=str(out),
                    smoothing_window=5)
    drawn = render(spec)
    assert out.exists() and out.stat().st_size > 0
    assert drawn  # every family reports what it drew


def test_detection_bars_values_equal_csv_medians(detection_csv, tmp_path):
    out = tmp_path / "bars.png"
    drawn = render(PlotSpec(family="detection_bars", input_csv=str(detection_csv),
                            output_image=str(out)))
    table = load_table(detection_csv)
    for scheme, heights in drawn.items():
        idx = 0
        triples = sorted(set(zip(table["p1"], table["p2"], table["p3"])))
        for triple in triples:
            values = [float(s) for s, a, b, c, g in
                      zip(table["detection_slots"], table["p1"], table["p2"],
                          table["p3"], table["scheme"])
                      if (a, b, c) == triple and g == scheme]
            values = [np.inf if v < 0 else v for v in values]
            assert heights[idx] == np.median(values)
            idx += 1


def test_curve_values_equal_csv_exactly(curves_csv, tmp_path):
    out = tmp_path / "c.png"
    drawn = render(PlotSpec(family="convergence_curves", input_csv=str(curves_csv),
                            output_image=str(out), smoothing_window=1))
    table = load_table(curves_csv)
    for label, ys in drawn.items():
        algo = label.split()[0]
        expected = [float(r) for a, r in zip(table["algorithm"], table["reward_sum"])
                    if a == algo]
        np.testing.assert_array_equal(ys, expected)


def test_empty_csv_renders_warning_axes(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    out = tmp_path / "empty.png"
    drawn = render(PlotSpec(family="detection_bars", input_csv=str(empty),
                            output_image=str(out)))
    assert drawn == {}
    assert out.exists()


def test_missing_columns_named(tmp_path):
    bad = tmp_path / "bad.csv"
    write_csv(bad, ["scheme", "p1"], [("adaptive", 0.6)])
    with pytest.raises(MissingColumns) as err:
        render(PlotSpec(family="detection_bars", input_csv=str(bad),
                        output_image=str(tmp_path / "x.png")))
    assert "detection_slots" in str(err.value)
    assert "p2" in str(err.value)


def test_same_csv_twice_identical(detection_csv, tmp_path):
    spec1 = PlotSpec(family="detection_bars", input_csv=str(detection_csv),
                     output_image=str(tmp_path / "one.png"))
    spec2 = PlotSpec(family="detection_bars", input_csv=str(detection_csv),
                     output_image=str(tmp_path / "two.png"))
    d1, d2 = render(spec1), render(spec2)
    assert d1 == d2
    with Image.open(tmp_path / "one.png") as a, Image.open(tmp_path / "two.png") as b:
        assert a.size == b.size


def test_moving_average_matches_bruteforce():
    rng = np.random.default_rng(7)
    y = rng.normal(size=60)
    for window in (1, 4, 9):
        got = moving_average(y, window)
        expected = [np.mean(y[max(0, i - window + 1): i + 1]) for i in range(len(y))]
        np.testing.assert_allclose(got, expected, rtol=1e-12)


def test_spec_loading_and_validation(tmp_path):
    spec_file = tmp_path / "spec.yaml"
    spec_file.write_text(
        "family: tsr_bars\ninput_csv: in.csv\noutput_image: out.png\n"
        "smoothing_window: 3\n")
    spec = load_spec(spec_file)
    assert spec.family == "tsr_bars" and spec.smoothing_window == 3
    with pytest.raises(ValueError):
        PlotSpec(family="pie_chart", input_csv="a", output_image="b")
    spec_file.write_text("family: tsr_bars\nbogus: 1\n")
    with pytest.raises(ValueError):
        load_spec(spec_file)


def test_cli_spec_and_all(detection_csv, curves_csv, summary_csv, tmp_path, capsys):
    spec_file = tmp_path / "spec.yaml"
    out = tmp_path / "cli.png"
    spec_file.write_text(
        f"family: detection_bars\ninput_csv: {detection_csv}\n"
        f"output_image: {out}\n")
    assert cli_main(["render", "--spec", str(spec_file)]) == 0
    assert out.exists()

    results = tmp_path / "results"
    results.mkdir()
    (results / "trust_detection.csv").write_bytes(detection_csv.read_bytes())
    (results / "training_convergence.csv").write_bytes(curves_csv.read_bytes())
    (results / "algo_comparison.csv").write_bytes(summary_csv.read_bytes())
    assert cli_main(["render", "--all", str(results)]) == 0
    rendered = capsys.readouterr().out.strip().splitlines()[-4:]
    assert len(rendered) == 4  # detection, convergence, loss, delay/tsr bars
    assert cli_main(["render", "--all", str(tmp_path / "missing")]) == 0


def test_render_all_covers_families_with_sources(detection_csv, curves_csv,
                                                 summary_csv, tmp_path):
    results = tmp_path / "rd"
    results.mkdir()
    for name, src in (("trust_detection.csv", detection_csv),
                      ("trust_threshold.csv", detection_csv),
                      ("training_convergence.csv", curves_csv),
                      ("sigma_sensitivity.csv", summary_csv),
                      ("algo_comparison.csv", summary_csv),
                      ("scale_sweep.csv", summary_csv)):
        (results / name).write_bytes(src.read_bytes())
    rendered = render_all(results, tmp_path / "imgs")
    assert len(rendered) == len(FAMILIES)
