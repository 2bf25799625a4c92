use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use stlrob::metrics::{evaluate_episode, EpisodeTrace};
use stlrob::{parse_formula, Config64, Domains, Evaluator, Formula, OnlineMonitor, TemporalAgg, Trace, Verdict};

use crate::args::{Cli, Command, OutputFormat, SemanticsArgs, SpecArgs};
use crate::error::{CliError, CliResult};
use crate::serve;

/// Runs one parsed command line. Normal output goes to `out`, warnings to `err`;
/// `input` is only read by `serve`.
pub fn run(cli: Cli, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    match cli.command {
        Command::Parse { spec } => parse(&spec, out),
        Command::Eval { spec, sem, input, t, all, output } => {
            let f = load_formula(&spec)?;
            let trace = load_trace(&input.trace)?;
            eval(&f, &sem, &trace, if all { None } else { Some(t) }, output, out)
        }
        Command::Monitor { spec, sem, input } => {
            let f = load_formula(&spec)?;
            let trace = load_trace(&input.trace)?;
            monitor(&f, &sem, &trace, out, err)
        }
        Command::Metrics { spec, input, safety, distance_signal, controls, output } => {
            let f = load_formula(&spec)?;
            let safety = safety.as_deref().map(parse_text).transpose()?.unwrap_or_else(|| f.clone());
            let trace = load_trace(&input.trace)?;
            metrics(&f, &safety, trace, &distance_signal, &controls, output, out)
        }
        Command::Compare { spec, input, semantics, mu, eta, temporal_agg, normalize, domains, safety, output } => {
            let f = load_formula(&spec)?;
            let safety = safety.as_deref().map(parse_text).transpose()?.unwrap_or_else(|| f.clone());
            let trace = load_trace(&input.trace)?;
            let domains = if normalize { Some(load_domains(domains.as_deref())?) } else { None };
            let agg = parse_temporal_agg(&temporal_agg)?;
            let configs = semantics
                .iter()
                .map(|name| config(name, mu, eta, agg).map(|c| (name.as_str(), c)))
                .collect::<CliResult<Vec<_>>>()?;
            compare(&f, &safety, &trace, &configs, domains.as_ref(), output, out)
        }
        Command::Serve => serve::serve(input, out).map_err(CliError::from),
    }
}

fn parse_text(text: &str) -> CliResult<Formula> {
    Ok(parse_formula(text).map_err(stlrob::Error::from)?)
}

fn load_formula(spec: &SpecArgs) -> CliResult<Formula> {
    match (&spec.formula, &spec.spec_file) {
        (Some(text), _) => parse_text(text),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
            parse_text(&text)
        }
        (None, None) => Err(CliError::Usage("one of --formula or --spec-file is required".into())),
    }
}

fn open(path: &Path) -> CliResult<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn load_trace(path: &Path) -> CliResult<Trace<f64>> {
    Trace::from_csv_reader(open(path)?).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn load_domains(path: Option<&Path>) -> CliResult<Domains> {
    let path = path.ok_or_else(|| CliError::Usage("--normalize requires --domains".into()))?;
    Domains::from_csv_reader(open(path)?).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn parse_temporal_agg(s: &str) -> CliResult<TemporalAgg> {
    TemporalAgg::parse(s)
        .ok_or_else(|| CliError::Usage(format!("unknown temporal aggregation `{s}` (expected semantic or pointwise)")))
}

fn config(name: &str, mu: f64, eta: f64, agg: TemporalAgg) -> CliResult<Config64> {
    Ok(Config64::by_name(name, None)?.with_mu(mu)?.with_eta(eta)?.with_temporal_agg(agg))
}

fn evaluator(f: &Formula, sem: &SemanticsArgs) -> CliResult<Evaluator<f64>> {
    let cfg = config(&sem.semantics, sem.mu, sem.eta, parse_temporal_agg(&sem.temporal_agg)?)?;
    if sem.normalize {
        let domains = load_domains(sem.domains.as_deref())?;
        Ok(Evaluator::normalized(f, cfg, &domains)?)
    } else {
        Ok(Evaluator::new(f, cfg))
    }
}

fn require_signals(f: &Formula, trace: &Trace<f64>) -> CliResult<()> {
    let missing: Vec<String> = f.signals().into_iter().filter(|s| trace.signal(s).is_none()).collect();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(CliError::Data(format!("trace has no column for signal(s): {}", missing.join(", "))))
    }
}

/// Shortest decimal that parses back to the same `f64`.
pub fn fmt_num(v: f64) -> String {
    format!("{v}")
}

/// Left-aligned columns separated by two spaces.
fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(String::len).max().unwrap_or(0)).collect();
    let mut s = String::new();
    for row in rows {
        let line: Vec<String> = row.iter().enumerate().map(|(c, cell)| format!("{cell:<w$}", w = widths[c])).collect();
        s.push_str(line.join("  ").trim_end());
        s.push('\n');
    }
    s
}

fn csv(rows: &[Vec<String>]) -> String {
    rows.iter().map(|r| r.join(",") + "\n").collect()
}

fn parse(spec: &SpecArgs, out: &mut dyn Write) -> CliResult<()> {
    let f = load_formula(spec)?;
    let signals: Vec<String> = f.signals().into_iter().collect();
    writeln!(out, "formula: {f}")?;
    writeln!(out, "horizon: {}", f.horizon())?;
    writeln!(out, "signals: {}", signals.join(","))?;
    Ok(())
}

fn eval(
    f: &Formula,
    sem: &SemanticsArgs,
    trace: &Trace<f64>,
    anchor: Option<usize>,
    output: OutputFormat,
    out: &mut dyn Write,
) -> CliResult<()> {
    let ev = evaluator(f, sem)?;
    require_signals(f, trace)?;
    let values: Vec<(usize, f64)> = match anchor {
        Some(t) => vec![(t, ev.robustness(trace, t)?)],
        None => ev.robustness_all(trace)?.into_iter().enumerate().collect(),
    };
    let text = match (output, anchor) {
        (OutputFormat::Csv, Some(_)) => format!("{}\n", fmt_num(values[0].1)),
        (OutputFormat::Csv, None) => {
            csv(&values.iter().map(|(t, v)| vec![t.to_string(), fmt_num(*v)]).collect::<Vec<_>>())
        }
        (OutputFormat::Table, _) => {
            let mut rows = vec![vec!["t".to_string(), "rho".into(), "verdict".into()]];
            rows.extend(values.iter().map(|(t, v)| vec![t.to_string(), fmt_num(*v), Verdict::of(*v).to_string()]));
            table(&rows)
        }
    };
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn monitor(
    f: &Formula,
    sem: &SemanticsArgs,
    trace: &Trace<f64>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult<()> {
    let cfg = config(&sem.semantics, sem.mu, sem.eta, parse_temporal_agg(&sem.temporal_agg)?)?;
    let mut m = if sem.normalize {
        OnlineMonitor::normalized(f, cfg, &load_domains(sem.domains.as_deref())?)?
    } else {
        OnlineMonitor::new(f, cfg)
    };
    require_signals(f, trace)?;
    if trace.len() <= m.horizon() {
        writeln!(
            err,
            "warning: trace has {} rows but horizon {} needs {}; every row is warm-up",
            trace.len(),
            m.horizon(),
            m.horizon() + 1
        )?;
    }
    let mut text = String::new();
    for (t, sample) in trace.samples().enumerate() {
        let cell = m.step(&sample)?.value().map(fmt_num).unwrap_or_default();
        text.push_str(&format!("{t},{cell}\n"));
    }
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn metrics(
    f: &Formula,
    safety: &Formula,
    trace: Trace<f64>,
    distance_signal: &str,
    controls: &[String],
    output: OutputFormat,
    out: &mut dyn Write,
) -> CliResult<()> {
    require_signals(f, &trace)?;
    require_signals(safety, &trace)?;
    let columns = controls
        .iter()
        .map(|c| {
            trace
                .signal(c)
                .map(|v| (c.clone(), v.to_vec()))
                .ok_or_else(|| CliError::Data(format!("trace has no control column `{c}`")))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let controls = Trace::from_columns(columns)?;
    let ep = EpisodeTrace::new(trace, controls, distance_signal)?;
    let r = evaluate_episode(f, safety, &ep)?;
    let rows = vec![
        vec!["cc".to_string(), "dc".into(), "mos".into(), "sat".into()],
        vec![fmt_num(r.cc), fmt_num(r.dc), fmt_num(r.mos), r.sat.to_string()],
    ];
    let text = match output {
        OutputFormat::Csv => csv(&rows),
        OutputFormat::Table => table(&rows),
    };
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn compare(
    f: &Formula,
    safety: &Formula,
    trace: &Trace<f64>,
    configs: &[(&str, Config64)],
    domains: Option<&Domains>,
    output: OutputFormat,
    out: &mut dyn Write,
) -> CliResult<()> {
    require_signals(f, trace)?;
    require_signals(safety, trace)?;
    let build = |g: &Formula, cfg: &Config64| -> CliResult<Evaluator<f64>> {
        Ok(match domains {
            Some(d) => Evaluator::normalized(g, cfg.clone(), d)?,
            None => Evaluator::new(g, cfg.clone()),
        })
    };
    let mut rows = vec![vec!["semantics".to_string(), "rho".into(), "mos".into(), "sat".into()]];
    for (name, cfg) in configs {
        let values = build(f, cfg)?.robustness_all(trace)?;
        let mos = values.iter().sum::<f64>() / values.len() as f64;
        let worst = build(safety, cfg)?.robustness_all(trace)?.into_iter().fold(f64::INFINITY, f64::min);
        rows.push(vec![name.to_string(), fmt_num(values[0]), fmt_num(mos), u8::from(worst > 0.0).to_string()]);
    }
    let text = match output {
        OutputFormat::Csv => csv(&rows),
        OutputFormat::Table => table(&rows),
    };
    out.write_all(text.as_bytes())?;
    Ok(())
}
