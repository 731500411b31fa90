//! Globally adaptive Gauss-Kronrod (7/15) quadrature.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate drops below `max(abs, rel * |I|)` or the subdivision budget runs
//! out.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

pub const DEFAULT_MAX_INTERVALS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub const fn absolute(abs: f64) -> Self {
        Self { abs, rel: 0.0 }
    }

    pub const fn relative(rel: f64) -> Self {
        Self { abs: 0.0, rel }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    splittable: bool,
}

fn kronrod<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (idx, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kron += w * pair;
        if idx % 2 == 1 {
            gauss += WG[idx / 2] * pair;
        }
    }
    (kron * half, ((kron - gauss) * half).abs())
}

/// Integrates `f` over `[a, b]`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Quadrature {
    integrate_with_budget(&mut f, a, b, tol, DEFAULT_MAX_INTERVALS)
}

pub fn integrate_with_budget<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    tol: Tolerance,
    max_intervals: usize,
) -> Quadrature {
    if a == b {
        return Quadrature {
            value: 0.0,
            error: 0.0,
            intervals: 0,
            converged: true,
        };
    }
    let (value, error) = kronrod(f, a, b);
    let mut segments: Vec<Segment> = Vec::with_capacity(64);
    segments.push(Segment {
        a,
        b,
        value,
        error,
        splittable: true,
    });

    loop {
        let total: f64 = segments.iter().map(|s| s.value).sum();
        let err: f64 = segments.iter().map(|s| s.error).sum();
        if !total.is_finite() || !err.is_finite() {
            return Quadrature {
                value: total,
                error: err,
                intervals: segments.len(),
                converged: false,
            };
        }
        if err <= tol.target(total) {
            return Quadrature {
                value: total,
                error: err,
                intervals: segments.len(),
                converged: true,
            };
        }

        let worst = segments
            .iter()
            .enumerate()
            .filter(|(_, s)| s.splittable)
            .max_by(|(_, x), (_, y)| x.error.total_cmp(&y.error))
            .map(|(idx, _)| idx);
        let Some(worst) = worst else {
            return Quadrature {
                value: total,
                error: err,
                intervals: segments.len(),
                converged: false,
            };
        };
        if segments.len() >= max_intervals {
            return Quadrature {
                value: total,
                error: err,
                intervals: segments.len(),
                converged: false,
            };
        }

        let seg = segments[worst];
        let mid = 0.5 * (seg.a + seg.b);
        // Intervals at the resolution limit of f64 cannot be bisected further.
        if !(mid > seg.a && mid < seg.b) || (seg.b - seg.a) <= 4.0 * f64::EPSILON * mid.abs() {
            segments[worst].splittable = false;
            continue;
        }
        let (lv, le) = kronrod(f, seg.a, mid);
        let (rv, re) = kronrod(f, mid, seg.b);
        segments[worst] = Segment {
            a: seg.a,
            b: mid,
            value: lv,
            error: le,
            splittable: true,
        };
        segments.push(Segment {
            a: mid,
            b: seg.b,
            value: rv,
            error: re,
            splittable: true,
        });
    }
}
