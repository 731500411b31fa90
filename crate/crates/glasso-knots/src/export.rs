//! JSON, CSV and Newick renderings of knots, reports and dendrograms.
//! Variable indices are 0-based; step indices `k` are 1-based.

use std::io::Write;

use glasso_knots_core::{Dendrogram, KnotSequence, TestReport};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Serialize)]
pub struct KnotRow {
    pub k: usize,
    pub rho: f64,
    pub i: usize,
    pub j: usize,
    pub components_after: usize,
}

pub fn knot_rows(ks: &KnotSequence) -> Vec<KnotRow> {
    ks.knots
        .iter()
        .enumerate()
        .map(|(idx, k)| KnotRow {
            k: idx + 1,
            rho: k.rho,
            i: k.edge.0,
            j: k.edge.1,
            components_after: k.components_after,
        })
        .collect()
}

pub fn knots_json(ks: &KnotSequence) -> Result<String> {
    Ok(serde_json::to_string_pretty(&knot_rows(ks))?)
}

#[derive(Debug, Serialize)]
struct DendrogramJson<'a> {
    leaves: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    names: Option<&'a [String]>,
    merges: &'a [glasso_knots_core::Merge],
}

pub fn dendrogram_json(d: &Dendrogram, names: Option<&[String]>) -> Result<String> {
    Ok(serde_json::to_string_pretty(&DendrogramJson {
        leaves: d.leaves,
        names,
        merges: &d.merges,
    })?)
}

fn newick_label(name: &str) -> String {
    if name
        .chars()
        .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.' || c == '-')
        && !name.is_empty()
    {
        name.to_string()
    } else {
        format!("'{}'", name.replace('\'', "''"))
    }
}

/// Newick string with leaves at similarity 1 and each internal node at its
/// merge height; branch lengths are child height minus parent height. A
/// forest is joined under a root at height 0.
pub fn newick(d: &Dendrogram, names: Option<&[String]>) -> String {
    let p = d.leaves;
    let height = |id: usize| if id < p { 1.0 } else { d.merges[id - p].height };
    let mut merged = vec![false; p + d.merges.len()];
    for m in &d.merges {
        merged[m.left] = true;
        merged[m.right] = true;
    }
    fn render(
        d: &Dendrogram,
        id: usize,
        names: Option<&[String]>,
        height: &dyn Fn(usize) -> f64,
        out: &mut String,
    ) {
        let p = d.leaves;
        if id < p {
            let label = names.map_or_else(|| id.to_string(), |n| n[id].clone());
            out.push_str(&newick_label(&label));
            return;
        }
        let m = &d.merges[id - p];
        out.push('(');
        for (pos, child) in [m.left, m.right].into_iter().enumerate() {
            if pos > 0 {
                out.push(',');
            }
            render(d, child, names, height, out);
            out.push_str(&format!(":{}", height(child) - m.height));
        }
        out.push(')');
    }
    let roots: Vec<usize> = (0..p + d.merges.len()).filter(|&id| !merged[id]).collect();
    let mut out = String::new();
    if let [root] = roots[..] {
        render(d, root, names, &height, &mut out);
    } else {
        out.push('(');
        for (pos, &r) in roots.iter().enumerate() {
            if pos > 0 {
                out.push(',');
            }
            render(d, r, names, &height, &mut out);
            out.push_str(&format!(":{}", height(r)));
        }
        out.push(')');
    }
    out.push(';');
    out
}

#[derive(Debug, Serialize)]
pub struct ReportRow {
    pub k: usize,
    pub rho_k: f64,
    pub rho_k1: f64,
    pub t: f64,
    pub p_conservative: f64,
    pub p_exact_given_m: Option<f64>,
    pub first_exceedance: bool,
}

pub fn report_rows(tr: &TestReport, stop: Option<usize>) -> Vec<ReportRow> {
    tr.steps
        .iter()
        .map(|s| ReportRow {
            k: s.k,
            rho_k: s.rho_k,
            rho_k1: s.rho_k1,
            t: s.t,
            p_conservative: s.p_conservative,
            p_exact_given_m: s.p_exact_given_m,
            first_exceedance: Some(s.k) == stop,
        })
        .collect()
}

pub fn report_csv<W: Write>(tr: &TestReport, stop: Option<usize>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in report_rows(tr, stop) {
        w.serialize(row).map_err(|e| Error::Csv(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct ReportJson {
    n: usize,
    m: Option<usize>,
    alpha: f64,
    first_exceedance: Option<usize>,
    steps: Vec<ReportRow>,
}

pub fn report_json(tr: &TestReport, alpha: f64, stop: Option<usize>) -> Result<String> {
    Ok(serde_json::to_string_pretty(&ReportJson {
        n: tr.n,
        m: tr.m,
        alpha,
        first_exceedance: stop,
        steps: report_rows(tr, stop),
    })?)
}

/// Human-readable table; the first step with `p > alpha` is marked.
pub fn report_text(tr: &TestReport, alpha: f64, stop: Option<usize>) -> String {
    let mut s = format!(
        "n = {}, steps = {}, alpha = {alpha}\n{:>4} {:>12} {:>12} {:>12} {:>12} {:>12}\n",
        tr.n,
        tr.steps.len(),
        "k",
        "rho_k",
        "rho_k+1",
        "T_k",
        "p_cons",
        "p_exact"
    );
    for r in report_rows(tr, stop) {
        let exact = r.p_exact_given_m.map_or_else(|| "-".to_string(), |v| format!("{v:.6}"));
        s.push_str(&format!(
            "{:>4} {:>12.6} {:>12.6} {:>12.6} {:>12.6} {:>12}{}\n",
            r.k,
            r.rho_k,
            r.rho_k1,
            r.t,
            r.p_conservative,
            exact,
            if r.first_exceedance { "  <= first p > alpha" } else { "" }
        ));
    }
    match stop {
        Some(k) => s.push_str(&format!("first step with p > {alpha}: {k}\n")),
        None => s.push_str(&format!("every step has p <= {alpha}\n")),
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use glasso_knots_core::{single_linkage, CorrelationMatrix};

    #[test]
    fn newick_three_leaves() {
        let c = CorrelationMatrix::from_values(
            10,
            3,
            vec![1.0, 0.5, 0.25, 0.5, 1.0, 0.125, 0.25, 0.125, 1.0],
        )
        .unwrap();
        let d = single_linkage(&c);
        assert_eq!(newick(&d, None), "((0:0.5,1:0.5):0.25,2:0.75);");
        let names = vec!["a b".to_string(), "x".to_string(), "y".to_string()];
        assert_eq!(newick(&d, Some(&names)), "(('a b':0.5,x:0.5):0.25,y:0.75);");
    }

    #[test]
    fn newick_forest() {
        let c = CorrelationMatrix::from_values(10, 3, vec![1.0, 0.5, 0.0, 0.5, 1.0, 0.0, 0.0, 0.0, 1.0])
            .unwrap();
        let d = single_linkage(&c);
        assert_eq!(newick(&d, None), "(2:1,(0:0.5,1:0.5):0.5);");
    }
}
