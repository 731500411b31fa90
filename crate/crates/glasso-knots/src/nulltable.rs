use std::io::Write;

use glasso_knots_core::nulltheory::support_grid;
use glasso_knots_core::NullMarginal;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct NullRow {
    pub x: f64,
    pub f_n: f64,
    pub fbar_n: f64,
    pub lower: Option<f64>,
    pub upper: f64,
    pub chen_stein: f64,
    pub mills_ratio: f64,
}

/// Rows at `grid_points` equally spaced interior points of `(0, √n)`.
pub fn null_table(n: usize, p: usize, grid_points: usize) -> Result<Vec<NullRow>> {
    let m = NullMarginal::new(n)?;
    support_grid(&m, grid_points)
        .map(|x| {
            let b = m.mills_bounds(x)?;
            Ok(NullRow {
                x,
                f_n: m.density(x),
                fbar_n: m.tail(x),
                lower: b.lower,
                upper: b.upper,
                chen_stein: m.max_cdf_chenstein(p, x),
                mills_ratio: m.mills_ratio(x),
            })
        })
        .collect()
}

pub fn write_null_table<W: Write>(rows: &[NullRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| Error::Csv(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}
