use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hnf-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn hnf(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hnf"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env("RUST_LOG", "error")
        .output()
        .unwrap()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn derive_ring_writes_six_hyperedges() {
    let dir = scratch("derive");
    let o = hnf(&["derive", "--preset", "ring4"], &dir);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let hn = json(&dir.join("hypernetwork.json"));
    assert_eq!(hn["hyperedges"].as_array().unwrap().len(), 6);
    for f in [
        "system.json",
        "transforms.json",
        "cancellation.json",
        "phase_model.json",
        "derivation.txt",
    ] {
        assert!(dir.join(f).exists(), "{f}");
    }
}

#[test]
fn resonant_system_exits_2_and_names_the_monomial() {
    let dir = scratch("resonant");
    let cfg = dir.join("resonant.json");
    let system = serde_json::json!({
        "system": {
            "n": 2,
            "adjacency": [[0.0, 1.0], [1.0, 0.0]],
            "lambda": 0.15,
            "omega": [1.0, 1.02],
            "coupling": {"n": 2, "terms": [
                {"s": [0, 1], "t": [0, 0], "re": 1.0, "im": 0.0},
                {"s": [2, 0], "t": [0, 1], "re": 1.0, "im": 0.0}
            ]},
            "alpha": 0.1
        }
    });
    std::fs::write(&cfg, system.to_string()).unwrap();
    let o = hnf(&["derive", "--config", cfg.to_str().unwrap()], &dir);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("z1^2 zb2"), "{err}");
}

#[test]
fn report_on_empty_directory_exits_3() {
    let dir = scratch("empty");
    assert_eq!(hnf(&["report"], &dir).status.code(), Some(3));
}

#[test]
fn recover_without_simulation_exits_3() {
    let dir = scratch("nosim");
    assert_eq!(
        hnf(&["recover", "--preset", "chain3"], &dir).status.code(),
        Some(3)
    );
}

#[test]
fn missing_preset_and_bad_stage_order_exit_3() {
    let dir = scratch("input");
    assert_eq!(hnf(&["derive"], &dir).status.code(), Some(3));
    let cfg = dir.join("stages.json");
    std::fs::write(
        &cfg,
        r#"{"preset": "chain3", "stages": ["derive", "recover"]}"#,
    )
    .unwrap();
    assert_eq!(
        hnf(&["pipeline", "--config", cfg.to_str().unwrap()], &dir)
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn oversized_step_exits_4() {
    let dir = scratch("diverge");
    let cfg = dir.join("diverge.json");
    std::fs::write(
        &cfg,
        r#"{"preset": "chain3", "simulation": {"dt": 5.0, "t_end": 1000.0, "transient": 100.0}}"#,
    )
    .unwrap();
    assert_eq!(
        hnf(&["simulate", "--config", cfg.to_str().unwrap()], &dir)
            .status
            .code(),
        Some(4)
    );
}

#[test]
fn short_chain_pipeline_is_reproducible() {
    let cfg_dir = scratch("cfg");
    let cfg = cfg_dir.join("chain.json");
    std::fs::write(
        &cfg,
        r#"{"preset": "chain3", "seed": 7, "simulation": {"t_end": 3000.0, "transient": 1000.0}}"#,
    )
    .unwrap();
    let runs: Vec<PathBuf> = ["a", "b"]
        .iter()
        .map(|tag| {
            let dir = scratch(&format!("pipeline-{tag}"));
            let o = hnf(&["pipeline", "--config", cfg.to_str().unwrap()], &dir);
            assert_eq!(
                o.status.code(),
                Some(0),
                "{}",
                String::from_utf8_lossy(&o.stderr)
            );
            dir
        })
        .collect();

    let index = json(&runs[0].join("index.json"));
    let stages = index["stages"].as_array().unwrap();
    assert_eq!(stages.len(), 4);
    for stage in stages {
        for m in stage["metrics"].as_array().unwrap() {
            let source = m["source"].as_str().unwrap();
            assert!(runs[0].join(source).exists(), "{source}");
        }
    }
    assert_eq!(json(&runs[0].join("status.json"))["ok"], true);
    for f in [
        "index.json",
        "equations.json",
        "slow_fit.json",
        "prediction.csv",
        "trajectory-0.csv",
        "slow_phases.svg",
    ] {
        let a = std::fs::read(runs[0].join(f)).unwrap();
        let b = std::fs::read(runs[1].join(f)).unwrap();
        assert!(a == b, "{f} differs between identical runs");
    }

    // the resonant triplet is the only slow phase of the chain
    let eq = json(&runs[0].join("equations.json"));
    assert_eq!(eq["slow_phases"], serde_json::json!(["x1-x2+x3"]));
}
