//! Line-delimited JSON session around one [`OnlineMonitor`].
//!
//! Requests, one per line:
//!
//! ```text
//! {"cmd":"init","formula":"alw[0:2](x > 0)","semantics":"sss","params":{"mu":0.3,"eta":300}}
//! {"cmd":"step","values":{"x":1.5}}
//! {"cmd":"reset"}
//! {"cmd":"quit"}
//! ```
//!
//! `params` may also carry `temporal_agg`, `normalize` and `domains` (a map from
//! signal name to `[lo, hi]`). Each request gets exactly one response line:
//! `{"ok":true,"horizon":h}` for init, `{"ok":true,"rho":v}` for step (`null`
//! during warm-up), `{"ok":true}` otherwise, or `{"ok":false,"error":"..."}`.
//! Errors never end the session; `quit` or end of input does.

use std::collections::BTreeMap;
use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize, Serializer};
use stlrob::semantics::{DEFAULT_ETA, DEFAULT_MU};
use stlrob::{parse_formula, Config64, Domains, OnlineMonitor, Sample, SignalDomain, StepResult, TemporalAgg};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Request {
    cmd: String,
    formula: Option<String>,
    semantics: Option<String>,
    #[serde(default)]
    params: Params,
    values: Option<BTreeMap<String, f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Params {
    mu: Option<f64>,
    eta: Option<f64>,
    temporal_agg: Option<String>,
    #[serde(default)]
    normalize: bool,
    domains: Option<BTreeMap<String, [f64; 2]>>,
}

/// Robustness as a JSON value: a number, or the strings `inf`, `-inf` and `nan`
/// for values JSON cannot represent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rho(pub f64);

impl Serialize for Rho {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            v if v.is_finite() => s.serialize_f64(v),
            v if v.is_nan() => s.serialize_str("nan"),
            v if v > 0.0 => s.serialize_str("inf"),
            _ => s.serialize_str("-inf"),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Response {
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<Option<Rho>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Response {
    fn ok() -> Self {
        Response { ok: true, horizon: None, rho: None, error: None }
    }

    fn error(message: impl Into<String>) -> Self {
        Response { ok: false, horizon: None, rho: None, error: Some(message.into()) }
    }
}

/// Whether the session should keep reading after a request.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flow {
    Continue,
    Quit,
}

/// Protocol state: at most one monitor, created by `init`.
#[derive(Debug, Default)]
pub struct Session {
    monitor: Option<OnlineMonitor<f64>>,
}

impl Session {
    pub fn new() -> Self {
        Self::default()
    }

    /// Handles one request line and returns the response line (without newline).
    pub fn handle_line(&mut self, line: &str) -> (String, Flow) {
        let (response, flow) = match serde_json::from_str::<Request>(line) {
            Ok(req) => self.handle(req),
            Err(e) => (Response::error(format!("malformed request: {e}")), Flow::Continue),
        };
        (serde_json::to_string(&response).expect("response serializes"), flow)
    }

    fn handle(&mut self, req: Request) -> (Response, Flow) {
        match req.cmd.as_str() {
            "init" => (self.init(req).unwrap_or_else(Response::error), Flow::Continue),
            "step" => (self.step(req).unwrap_or_else(Response::error), Flow::Continue),
            "reset" => match &mut self.monitor {
                Some(m) => {
                    m.reset();
                    (Response::ok(), Flow::Continue)
                }
                None => (Response::error("reset before init"), Flow::Continue),
            },
            "quit" => (Response::ok(), Flow::Quit),
            other => (Response::error(format!("unknown cmd `{other}`")), Flow::Continue),
        }
    }

    fn init(&mut self, req: Request) -> Result<Response, String> {
        let text = req.formula.ok_or("init needs `formula`")?;
        let f = parse_formula(&text).map_err(|e| format!("parse error at {e}"))?;
        let p = req.params;
        let agg = match p.temporal_agg.as_deref() {
            None => TemporalAgg::default(),
            Some(s) => TemporalAgg::parse(s).ok_or_else(|| format!("unknown temporal_agg `{s}`"))?,
        };
        let cfg = Config64::by_name(req.semantics.as_deref().unwrap_or("classical"), None)
            .and_then(|c| c.with_mu(p.mu.unwrap_or(DEFAULT_MU)))
            .and_then(|c| c.with_eta(p.eta.unwrap_or(DEFAULT_ETA)))
            .map_err(|e| e.to_string())?
            .with_temporal_agg(agg);
        let monitor = if p.normalize {
            let raw = p.domains.ok_or("normalize needs `params.domains`")?;
            let domains = raw
                .into_iter()
                .map(|(s, [lo, hi])| SignalDomain::new(s, lo, hi))
                .collect::<stlrob::Result<Vec<_>>>()
                .map_err(|e| e.to_string())?;
            OnlineMonitor::normalized(&f, cfg, &domains.into_iter().collect::<Domains>()).map_err(|e| e.to_string())?
        } else {
            OnlineMonitor::new(&f, cfg)
        };
        let horizon = monitor.horizon();
        self.monitor = Some(monitor);
        Ok(Response { horizon: Some(horizon), ..Response::ok() })
    }

    fn step(&mut self, req: Request) -> Result<Response, String> {
        let m = self.monitor.as_mut().ok_or("step before init")?;
        let values = req.values.ok_or("step needs `values`")?;
        let sample: Sample<f64> = values.into_iter().collect();
        let rho = match m.step(&sample).map_err(|e| e.to_string())? {
            StepResult::WarmUp => None,
            StepResult::Value(v) => Some(Rho(v)),
        };
        Ok(Response { rho: Some(rho), ..Response::ok() })
    }
}

/// Reads requests from `input` until `quit` or end of input, writing one
/// response per request and flushing after each. Blank lines are skipped.
pub fn serve(input: &mut dyn BufRead, out: &mut dyn Write) -> io::Result<()> {
    let mut session = Session::new();
    let mut line = String::new();
    loop {
        line.clear();
        if input.read_line(&mut line)? == 0 {
            return Ok(());
        }
        if line.trim().is_empty() {
            continue;
        }
        let (response, flow) = session.handle_line(line.trim_end_matches(['\n', '\r']));
        writeln!(out, "{response}")?;
        out.flush()?;
        if flow == Flow::Quit {
            return Ok(());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(lines: &[&str]) -> Vec<String> {
        let input = lines.join("\n");
        let mut out = Vec::new();
        serve(&mut input.as_bytes(), &mut out).unwrap();
        String::from_utf8(out).unwrap().lines().map(str::to_owned).collect()
    }

    #[test]
    fn predicate_answers_immediately() {
        let out = run(&[r#"{"cmd":"init","formula":"v > 0.5"}"#, r#"{"cmd":"step","values":{"v":0.4}}"#]);
        assert_eq!(out[0], r#"{"ok":true,"horizon":0}"#);
        assert_eq!(out[1], format!(r#"{{"ok":true,"rho":{}}}"#, 0.4f64 - 0.5));
    }

    #[test]
    fn step_before_init_is_an_error_and_session_survives() {
        let out = run(&[
            r#"{"cmd":"step","values":{"v":1}}"#,
            "not json",
            r#"{"cmd":"init","formula":"v >"}"#,
            r#"{"cmd":"init","formula":"v > 0"}"#,
            r#"{"cmd":"step","values":{"w":1}}"#,
            r#"{"cmd":"step","values":{"v":2}}"#,
        ]);
        assert!(out[0].contains("step before init"), "{}", out[0]);
        assert!(out[1].starts_with(r#"{"ok":false,"error":"malformed request"#));
        assert!(out[2].contains("parse error at 1:4"), "{}", out[2]);
        assert_eq!(out[3], r#"{"ok":true,"horizon":0}"#);
        assert!(out[4].starts_with(r#"{"ok":false"#));
        assert_eq!(out[5], r#"{"ok":true,"rho":2.0}"#);
    }

    #[test]
    fn quit_stops_reading() {
        let out = run(&[r#"{"cmd":"quit"}"#, r#"{"cmd":"init","formula":"true"}"#]);
        assert_eq!(out, [r#"{"ok":true}"#]);
    }

    #[test]
    fn infinite_rho_is_a_string() {
        let out = run(&[r#"{"cmd":"init","formula":"true"}"#, r#"{"cmd":"step","values":{}}"#]);
        assert_eq!(out[1], r#"{"ok":true,"rho":"inf"}"#);
    }

    #[test]
    fn normalized_init_uses_domains() {
        let out = run(&[
            r#"{"cmd":"init","formula":"v > 1","params":{"normalize":true,"domains":{"v":[0,4]}}}"#,
            r#"{"cmd":"step","values":{"v":2}}"#,
        ]);
        assert_eq!(out[1], r#"{"ok":true,"rho":0.25}"#);
        let out = run(&[r#"{"cmd":"init","formula":"v > 1","params":{"normalize":true}}"#]);
        assert!(out[0].contains("domains"));
    }
}
