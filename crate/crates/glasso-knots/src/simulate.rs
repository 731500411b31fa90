//! Parallel replication runner, scenario config files and result export.

use std::fs;
use std::io::Write;
use std::path::Path;

use glasso_knots_core::montecarlo::summarize;
use glasso_knots_core::{qq_points, replicate, Scenario, ScenarioKind, SimulationResult};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Runs all replications on the rayon pool. Each replication seeds itself
/// from `(seed, rep)`, so the result equals the sequential run.
pub fn run(s: &Scenario) -> Result<SimulationResult> {
    s.validate()?;
    let outcomes = (0..s.reps as u64)
        .into_par_iter()
        .map(|rep| replicate(s, rep))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(summarize(s, outcomes)?)
}

/// Switches `s` to `kind`, resetting signal size and strength to that
/// kind's defaults. Nothing changes when the kind is already `kind`.
pub fn set_kind(s: &mut Scenario, kind: ScenarioKind) {
    if s.kind != kind {
        let fresh = Scenario::new(kind, s.n, s.p);
        s.kind = kind;
        s.signal_size = fresh.signal_size;
        s.signal_strength = fresh.signal_strength;
    }
}

/// Applies `key = value` lines to `s` in order. Blank lines and `#`
/// comments are skipped. Keys are the long CLI flags; `_` and `-` are
/// interchangeable. A `kind` line resets the signal defaults, so later
/// lines override them.
pub fn apply_config(s: &mut Scenario, text: &str) -> Result<()> {
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Config {
            line: line_no,
            message,
        };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(format!("expected key = value, got {line:?}")))?;
        let (key, value) = (key.trim().replace('_', "-"), value.trim());
        let num = |v: &str| -> Result<usize> {
            v.parse().map_err(|_| err(format!("{key}: {v:?} is not a count")))
        };
        match key.as_str() {
            "kind" => {
                let kind = ScenarioKind::parse(value)
                    .ok_or_else(|| err(format!("unknown scenario kind {value:?}")))?;
                set_kind(s, kind);
            }
            "n" => s.n = num(value)?,
            "p" => s.p = num(value)?,
            "reps" => s.reps = num(value)?,
            "seed" => {
                s.seed = value
                    .parse()
                    .map_err(|_| err(format!("seed: {value:?} is not an integer")))?
            }
            "signal-size" => s.signal_size = num(value)?,
            "signal-strength" => {
                s.signal_strength = value
                    .parse()
                    .map_err(|_| err(format!("signal-strength: {value:?} is not a number")))?
            }
            "null-steps" => s.null_steps = num(value)?,
            "raw-steps" => s.raw_steps = num(value)?,
            "disjoint-top" => s.disjoint_top = num(value)?,
            other => return Err(err(format!("unknown key {other:?}"))),
        }
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct SummaryJson<'a> {
    scenario: &'a Scenario,
    reps: usize,
    aligned_steps: usize,
    null_steps: &'a [glasso_knots_core::StepSummary],
    raw_steps: &'a [glasso_knots_core::StepSummary],
    first_null_pvalue_ks: Option<glasso_knots_core::KsResult>,
    event_b_frequency: Option<f64>,
    top_disjoint_frequency: f64,
    mean_signal_steps: f64,
}

pub fn summary_json(r: &SimulationResult) -> Result<String> {
    let reps = r.outcomes.len();
    Ok(serde_json::to_string_pretty(&SummaryJson {
        scenario: &r.scenario,
        reps,
        aligned_steps: r.aligned_steps,
        null_steps: &r.null_summaries,
        raw_steps: &r.raw_summaries,
        first_null_pvalue_ks: r.pvalue_ks,
        event_b_frequency: r.event_b_frequency,
        top_disjoint_frequency: r.top_disjoint_frequency,
        mean_signal_steps: r.outcomes.iter().map(|o| o.signal_steps as f64).sum::<f64>()
            / reps as f64,
    })?)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Csv(e.to_string())
}

/// One row per replication and step: `rep, kind, step, t` with `kind`
/// either `null` (aligned) or `raw`.
pub fn write_statistics<W: Write>(r: &SimulationResult, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["rep", "kind", "step", "t", "signal_steps"]).map_err(csv_err)?;
    for o in &r.outcomes {
        for (series, values) in [("null", &o.null), ("raw", &o.raw)] {
            for (k, t) in values.iter().enumerate() {
                w.write_record([
                    o.rep.to_string(),
                    series.to_string(),
                    (k + 1).to_string(),
                    format!("{t:?}"),
                    o.signal_steps.to_string(),
                ])
                .map_err(csv_err)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// QQ points of each aligned null step against Exp(1) quantiles.
pub fn write_qq<W: Write>(r: &SimulationResult, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["step", "theoretical", "empirical"]).map_err(csv_err)?;
    for k in 1..=r.aligned_steps {
        for (x, y) in qq_points(&r.null_column(k), 1.0) {
            w.write_record([k.to_string(), format!("{x:?}"), format!("{y:?}")])
                .map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_pvalues<W: Write>(r: &SimulationResult, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["rep", "p_first_null"]).map_err(csv_err)?;
    for o in &r.outcomes {
        if let Some(pv) = o.first_null_p {
            w.write_record([o.rep.to_string(), format!("{pv:?}")]).map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Twenty equal-width bins on [0, 1].
pub fn write_pvalue_histogram<W: Write>(r: &SimulationResult, out: W) -> Result<()> {
    const BINS: usize = 20;
    let mut counts = [0usize; BINS];
    for &pv in &r.pvalue_samples {
        let b = ((pv * BINS as f64) as usize).min(BINS - 1);
        counts[b] += 1;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["lower", "upper", "count"]).map_err(csv_err)?;
    for (b, c) in counts.iter().enumerate() {
        w.write_record([
            format!("{:?}", b as f64 / BINS as f64),
            format!("{:?}", (b + 1) as f64 / BINS as f64),
            c.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `statistics.csv`, `summary.json`, `qq.csv`, `pvalues.csv` and
/// `pvalue_histogram.csv` into `dir`.
pub fn write_outputs(r: &SimulationResult, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    write_statistics(r, fs::File::create(dir.join("statistics.csv"))?)?;
    fs::write(dir.join("summary.json"), summary_json(r)? + "\n")?;
    write_qq(r, fs::File::create(dir.join("qq.csv"))?)?;
    write_pvalues(r, fs::File::create(dir.join("pvalues.csv"))?)?;
    write_pvalue_histogram(r, fs::File::create(dir.join("pvalue_histogram.csv"))?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parsing() {
        let mut s = Scenario::new(ScenarioKind::GlobalNull, 10, 5);
        apply_config(
            &mut s,
            "# comment\nkind = clique\nn=300\n p = 40 \nsignal_size = 4\nsignal-strength = 0.5\nseed=9\n",
        )
        .unwrap();
        assert_eq!((s.kind, s.n, s.p, s.signal_size, s.seed), (ScenarioKind::Clique, 300, 40, 4, 9));
        assert_eq!(s.signal_strength, 0.5);
        assert!(matches!(
            apply_config(&mut s, "n = 5\nbogus = 1"),
            Err(Error::Config { line: 2, .. })
        ));
        assert!(apply_config(&mut s, "n = five").is_err());
    }

    #[test]
    fn parallel_equals_sequential() {
        let s = Scenario::new(ScenarioKind::Clique, 60, 15).with_reps(12).with_seed(3);
        assert_eq!(run(&s).unwrap(), glasso_knots_core::run_sequential(&s).unwrap());
    }
}
