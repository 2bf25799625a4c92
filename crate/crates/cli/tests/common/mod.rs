#![allow(dead_code)]

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const HOPPER: &str = "ev[0:15](v > 0.5) and alw[0:20]((z > 0.7) and (abs(a) < 1))";

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_stlrob")
}

pub fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("spawn stlrob")
}

pub fn run_with_stdin(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(bin())
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn stlrob");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

/// Columns of a synthetic hopping robot: forward velocity `v`, torso height `z`,
/// torso angle `a`, distance `x` and three controls. Height occasionally sags
/// below the safety threshold.
pub struct HopperTrace {
    pub names: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl HopperTrace {
    pub fn generate(steps: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut x = 0.0;
        let rows = (0..steps)
            .map(|t| {
                let phase = t as f64 * 0.3;
                let v = 0.6 + 0.4 * phase.sin() + rng.gen_range(-0.2..0.2);
                let z = 1.1 + 0.25 * (phase * 0.7).cos() + rng.gen_range(-0.3..0.1);
                let a = 0.8 * (phase * 1.3).sin() + rng.gen_range(-0.4..0.4);
                x += v * 0.05;
                let u: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
                vec![v, z, a, x, u[0], u[1], u[2]]
            })
            .collect();
        HopperTrace { names: vec!["v", "z", "a", "x", "u1", "u2", "u3"], rows }
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.names.join(",") + "\n";
        for r in &self.rows {
            s.push_str(&r.iter().map(|v| format!("{v}")).collect::<Vec<_>>().join(","));
            s.push('\n');
        }
        s
    }

    /// One `step` request per row, preceded by `init` for `formula`.
    pub fn to_requests(&self, formula: &str, semantics: &str) -> String {
        let init = serde_json::json!({"cmd": "init", "formula": formula, "semantics": semantics});
        let mut s = format!("{init}\n");
        for r in &self.rows {
            let values: serde_json::Map<String, serde_json::Value> =
                self.names.iter().zip(r).map(|(n, v)| (n.to_string(), serde_json::json!(v))).collect();
            s.push_str(&format!("{}\n", serde_json::json!({"cmd": "step", "values": values})));
        }
        s.push_str("{\"cmd\":\"quit\"}\n");
        s
    }
}

/// Parses `monitor` output into per-row robustness (`None` during warm-up).
pub fn monitor_values(out: &str) -> Vec<Option<f64>> {
    out.lines()
        .enumerate()
        .map(|(i, line)| {
            let (t, rho) = line.split_once(',').expect("t,rho");
            assert_eq!(t.parse::<usize>().unwrap(), i);
            (!rho.is_empty()).then(|| rho.parse().unwrap())
        })
        .collect()
}

/// Parses `serve` step responses into robustness (`None` for null).
pub fn serve_values(out: &str) -> Vec<Option<f64>> {
    out.lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap())
        .filter(|v| v.get("rho").is_some())
        .map(|v| v["rho"].as_f64())
        .collect()
}
