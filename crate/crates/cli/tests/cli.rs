use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn intsnn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_intsnn"))
        .args(args)
        .env_remove("INTSNN_WORKERS")
        .output()
        .expect("binary runs")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn simulate_writes_figure_set_and_is_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (path(tmp.path(), "a"), path(tmp.path(), "b"));
    for dir in [&a, &b] {
        let out = intsnn(&[
            "-o",
            dir,
            "simulate",
            "--n",
            "64",
            "--density",
            "0.5",
            "--bits",
            "8",
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    for f in [
        "connectivity.svg",
        "membrane_traces.svg",
        "spike_raster.svg",
        "delay_embedding.svg",
    ] {
        let svg = fs::read_to_string(Path::new(&a).join(f)).unwrap();
        assert!(
            svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"),
            "{f}"
        );
    }
    for f in ["trajectory.csv", "metrics.csv", "network.json"] {
        assert_eq!(
            fs::read(Path::new(&a).join(f)).unwrap(),
            fs::read(Path::new(&b).join(f)).unwrap(),
            "{f}"
        );
    }
    let csv = fs::read_to_string(Path::new(&a).join("trajectory.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,neuron_id,v,s"));
    assert_eq!(lines.count(), 1001 * 64);
    assert!(!csv.contains('\r'));
}

#[test]
fn two_bit_raster_is_empty() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = path(tmp.path(), "sim");
    assert!(intsnn(&["-o", &dir, "simulate", "--bits", "2"])
        .status
        .success());
    let svg = fs::read_to_string(Path::new(&dir).join("spike_raster.svg")).unwrap();
    assert!(!svg.contains("fill=\"black\""));
    let csv = fs::read_to_string(Path::new(&dir).join("trajectory.csv")).unwrap();
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",0")));
}

#[test]
fn oracle_leak_only_single_neuron() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = path(tmp.path(), "o");
    let out = intsnn(&["-o", &dir, "oracle", "--n", "1", "--bits", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(
        text.contains("4 states checked, 0 mismatches: PASS"),
        "{text}"
    );
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(Path::new(&dir).join("oracle.json")).unwrap())
            .unwrap();
    let reps: Vec<i64> = doc["attractors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| a["representative_state"][0].as_i64().unwrap())
        .collect();
    let mut sorted = reps.clone();
    sorted.sort();
    assert_eq!(sorted, vec![0, 1]);
}

#[test]
fn oracle_two_neurons_three_bits() {
    let tmp = tempfile::tempdir().unwrap();
    for seed in ["1", "2", "3"] {
        let out = intsnn(&[
            "-o",
            &path(tmp.path(), seed),
            "oracle",
            "--n",
            "2",
            "--bits",
            "3",
            "--seed",
            seed,
        ]);
        assert!(out.status.success());
        assert!(stdout(&out).contains("64 states checked, 0 mismatches: PASS"));
    }
}

#[test]
fn oracle_refuses_oversized_state_space() {
    let tmp = tempfile::tempdir().unwrap();
    let out = intsnn(&[
        "-o",
        &path(tmp.path(), "o"),
        "oracle",
        "--n",
        "8",
        "--bits",
        "8",
    ]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("18446744073709551616 states required"),
        "{err}"
    );
    assert!(!tmp.path().join("o/oracle.json").exists());
}

#[test]
fn empty_bit_list_is_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out = intsnn(&[
        "-o",
        &path(tmp.path(), "s"),
        "--set",
        "bit_widths=",
        "sweep",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = intsnn(&["-o", &path(tmp.path(), "s"), "sweep", "--variant", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_then_report_reproduces_summary() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("small.conf");
    fs::write(
        &cfg,
        "sizes = 30, 40\ndensities = 0.3\nbit_widths = 2..5\nhorizon = 200\n",
    )
    .unwrap();
    let sweep = path(tmp.path(), "sweep");
    let out = intsnn(&["--config", &cfg.to_string_lossy(), "-o", &sweep, "sweep"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let results = fs::read_to_string(Path::new(&sweep).join("results.csv")).unwrap();
    assert_eq!(results.lines().count(), 1 + 8);
    for f in [
        "summary.csv",
        "manifest.json",
        "top_recurrent.csv",
        "firing_rate_vs_bits.svg",
        "cycle_length_vs_bits.svg",
    ] {
        assert!(Path::new(&sweep).join(f).exists(), "{f}");
    }
    let report = path(tmp.path(), "report");
    let out = intsnn(&[
        "-o",
        &report,
        "report",
        "--results",
        &path(Path::new(&sweep), "results.csv"),
        "--manifest",
        &path(Path::new(&sweep), "manifest.json"),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(
        fs::read(Path::new(&sweep).join("summary.csv")).unwrap(),
        fs::read(Path::new(&report).join("summary.csv")).unwrap()
    );
}

#[test]
fn focused_writes_std_column_and_exemplar() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = path(tmp.path(), "f");
    let out = intsnn(&[
        "-o",
        &dir,
        "--set",
        "horizon=200",
        "focused",
        "--bits",
        "2,8",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let summary = fs::read_to_string(Path::new(&dir).join("focused_summary.csv")).unwrap();
    assert!(summary.lines().next().unwrap().contains("std_firing_rate"));
    assert!(summary.lines().nth(1).unwrap().starts_with("2,0,0,"));
    assert_eq!(
        fs::read_to_string(Path::new(&dir).join("focused_results.csv"))
            .unwrap()
            .lines()
            .count(),
        1 + 10
    );
    assert!(Path::new(&dir).join("exemplar_spike_raster.svg").exists());
}

#[test]
fn variant_suffix_on_plots() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = path(tmp.path(), "k8");
    let out = intsnn(
        &["-o", &dir, "sweep", "--variant", "variant-k8"]
            .iter()
            .copied()
            .chain([
                "--set",
                "sizes=30",
                "--set",
                "bit_widths=4,8",
                "--set",
                "horizon=100",
            ])
            .collect::<Vec<_>>(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(Path::new(&dir)
        .join("firing_rate_vs_bits_variant-k8.svg")
        .exists());
    let manifest = fs::read_to_string(Path::new(&dir).join("manifest.json")).unwrap();
    assert!(manifest.contains("\"leak_k\": 8"));
}
